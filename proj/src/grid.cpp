#include "wts/grid.hpp"

namespace wts {

GridFunction indicator(const GridSpec& g, double a, double b) {
    GridFunction f(g);
    for (int j = 0; j < g.n; ++j) {
        double x = g.point(j);
        if (x >= a && x < b) f[j] = 1.0;
    }
    return f;
}

GridFunction unit_cell(const GridSpec& g, int j) {
    GridFunction f(g);
    if (j < 0 || j >= g.n) throw OutOfDomain("cell index outside grid");
    f[j] = 1.0;
    return f;
}

Complex inner_product(const GridFunction& f, const GridFunction& g) {
    if (f.grid != g.grid) throw GridMismatch("inner product across different grids");
    Complex acc{0.0, 0.0};
    for (int j = 0; j < f.size(); ++j) acc += f[j] * std::conj(g[j]);
    return acc * f.grid.h;
}

double norm(const GridFunction& f) {
    double acc = 0.0;
    for (int j = 0; j < f.size(); ++j) acc += std::norm(f[j]);
    return std::sqrt(acc * f.grid.h);
}

}  // namespace wts
