#pragma once

#include <complex>
#include <functional>

namespace csge {

// Trapezoid rule on n equally spaced points spanning [lo, hi] (both ends
// included). For the smooth, Gaussian-decaying integrands used here the
// error is dominated by truncation, not by the rule.
std::complex<double> trapezoid(const std::function<std::complex<double>(double)>& f, double lo, double hi, int n);

}  // namespace csge
