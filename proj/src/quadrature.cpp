#include "csge/quadrature.hpp"

#include <stdexcept>

namespace csge {

std::complex<double> trapezoid(const std::function<std::complex<double>(double)>& f, double lo, double hi, int n) {
    if (n < 2) throw std::invalid_argument("trapezoid needs at least two points");
    const double h = (hi - lo) / (n - 1);
    std::complex<double> sum = 0.5 * (f(lo) + f(hi));
    for (int i = 1; i < n - 1; ++i) sum += f(lo + i * h);
    return sum * h;
}

}  // namespace csge
