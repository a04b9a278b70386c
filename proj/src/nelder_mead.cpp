#include "csge/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace csge {
namespace {

using Point = std::vector<double>;

double distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

Point lerp(const Point& from, const Point& to, double t) {
    Point p(from.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = from[i] + t * (to[i] - from[i]);
    return p;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, Point start, std::span<const double> steps, const RefineSpec& spec) {
    const std::size_t n = start.size();
    if (n == 0 || steps.size() != n) throw std::invalid_argument("nelder_mead: dimension mismatch");

    std::vector<Point> simplex(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += steps[i];
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) values[i] = f(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        // Stable on ties so that equal values keep their insertion order.
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<Point> s2(n + 1);
        std::vector<double> v2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            s2[i] = std::move(simplex[order[i]]);
            v2[i] = values[order[i]];
        }
        simplex = std::move(s2);
        values = std::move(v2);
    };

    NelderMeadResult result;
    sort_simplex();
    for (int iter = 0; iter < spec.max_iterations; ++iter) {
        double diameter = 0.0;
        for (std::size_t i = 1; i <= n; ++i) diameter = std::max(diameter, distance(simplex[0], simplex[i]));
        const double spread = values[n] - values[0];
        if (diameter < spec.diameter_tol || spread <= 1e-14 * (1.0 + std::abs(values[0]))) {
            result.converged = true;
            break;
        }
        ++result.iterations;

        Point centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);

        const Point reflected = lerp(centroid, simplex[n], -spec.reflect);
        const double f_reflected = f(reflected);
        if (f_reflected < values[0]) {
            const Point expanded = lerp(centroid, simplex[n], -spec.expand);
            const double f_expanded = f(expanded);
            if (f_expanded < f_reflected) {
                simplex[n] = expanded;
                values[n] = f_expanded;
            } else {
                simplex[n] = reflected;
                values[n] = f_reflected;
            }
        } else if (f_reflected < values[n - 1]) {
            simplex[n] = reflected;
            values[n] = f_reflected;
        } else {
            const bool outside = f_reflected < values[n];
            const Point contracted = outside ? lerp(centroid, reflected, spec.contract)
                                             : lerp(centroid, simplex[n], spec.contract);
            const double f_contracted = f(contracted);
            if (f_contracted < std::min(f_reflected, values[n])) {
                simplex[n] = contracted;
                values[n] = f_contracted;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    simplex[i] = lerp(simplex[0], simplex[i], spec.shrink);
                    values[i] = f(simplex[i]);
                }
            }
        }
        sort_simplex();
        result.trace.push_back(values[0]);
    }

    if (!result.converged) {
        double diameter = 0.0;
        for (std::size_t i = 1; i <= n; ++i) diameter = std::max(diameter, distance(simplex[0], simplex[i]));
        result.converged = diameter < spec.diameter_tol || values[n] - values[0] <= 1e-14 * (1.0 + std::abs(values[0]));
    }
    result.x = simplex[0];
    result.value = values[0];
    return result;
}

}  // namespace csge
