#pragma once

#include <functional>
#include <span>
#include <vector>

namespace csge {

struct RefineSpec {
    bool enabled = true;
    int max_iterations = 500;
    double diameter_tol = 1e-8;
    // Reflection, expansion, contraction and shrink coefficients.
    double reflect = 1.0;
    double expand = 2.0;
    double contract = 0.5;
    double shrink = 0.5;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    // Best value after each iteration.
    std::vector<double> trace;
};

using Objective = std::function<double(std::span<const double>)>;

/// Minimizes `f` from an axis-aligned simplex around `start` with edge
/// lengths `steps`. Stops when the simplex diameter drops below
/// spec.diameter_tol or the vertex values agree to ~1e-14 relative.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start, std::span<const double> steps,
                             const RefineSpec& spec);

}  // namespace csge
