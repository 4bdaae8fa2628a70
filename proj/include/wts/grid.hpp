#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "wts/errors.hpp"

namespace wts {

using Complex = std::complex<double>;

// Uniform grid x_j = j*h, j = 0..n-1, on the truncated half-line [0, x_max].
// Quadrature weight is h per point, so <f,g> approximates the L2(R+) pairing
// of step functions on cells [x_j, x_j + h).
struct GridSpec {
    double h = 0.25;
    int n = 256;

    double point(int j) const { return h * static_cast<double>(j); }
    double x_max() const { return h * static_cast<double>(n); }

    // Largest index, used as the default "nothing truncated" bound.
    int last() const { return n - 1; }

    bool operator==(const GridSpec& o) const { return h == o.h && n == o.n; }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

inline GridSpec make_grid(double h, double x_max) {
    if (h <= 0.0) throw ValidationError("grid step must be positive");
    double ratio = x_max / h;
    double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio) || rounded < 2.0)
        throw ValidationError("x_max must be an integer multiple (>= 2) of h");
    return GridSpec{h, static_cast<int>(rounded)};
}

// Converts a translation parameter to its grid shift count.
// Throws NonGridTranslation unless t is a positive integer multiple of h.
inline int shift_count(const GridSpec& g, double t) {
    double ratio = t / g.h;
    double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw NonGridTranslation("translation is not a positive multiple of the grid step");
    return static_cast<int>(rounded);
}

struct GridFunction {
    GridSpec grid;
    std::vector<Complex> v;

    GridFunction() = default;
    explicit GridFunction(const GridSpec& g) : grid(g), v(static_cast<size_t>(g.n), Complex{0.0, 0.0}) {}
    GridFunction(const GridSpec& g, std::vector<Complex> values) : grid(g), v(std::move(values)) {
        if (static_cast<int>(v.size()) != g.n) throw GridMismatch("grid function length mismatch");
    }

    int size() const { return grid.n; }
    Complex& operator[](int j) { return v[static_cast<size_t>(j)]; }
    const Complex& operator[](int j) const { return v[static_cast<size_t>(j)]; }
};

// Indicator of [a, b) as a grid function (1 on cells with a <= x_j < b).
GridFunction indicator(const GridSpec& g, double a, double b);

// Single-cell indicator e_j.
GridFunction unit_cell(const GridSpec& g, int j);

// <f,g> = h * sum f(x_j) * conj(g(x_j)).
Complex inner_product(const GridFunction& f, const GridFunction& g);
double norm(const GridFunction& f);

}  // namespace wts
