#include "pmeb/quadrature.hpp"

#include "pmeb/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace pmeb {

namespace {

struct Panel {
    double lo, mid, hi;
    double f_lo, f_mid, f_hi;
    double whole;
    double tolerance;
    int depth;
};

double simpson(double lo, double hi, double f_lo, double f_mid, double f_hi)
{
    return (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
}

} // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                                  double abs_tolerance, int max_depth)
{
    QuadratureResult result;
    if (hi == lo)
        return result;

    auto eval = [&](double x) {
        ++result.evaluations;
        const double y = f(x);
        if (!std::isfinite(y))
            throw NumericalError("adaptive_simpson: non-finite integrand at x = " + std::to_string(x));
        return y;
    };

    const double mid = 0.5 * (lo + hi);
    const double f_lo = eval(lo), f_mid = eval(mid), f_hi = eval(hi);
    // explicit stack keeps the summation order deterministic (left to right)
    std::vector<Panel> stack{{lo, mid, hi, f_lo, f_mid, f_hi, simpson(lo, hi, f_lo, f_mid, f_hi), abs_tolerance, 0}};

    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        const double lm = 0.5 * (p.lo + p.mid);
        const double rm = 0.5 * (p.mid + p.hi);
        const double f_lm = eval(lm), f_rm = eval(rm);
        const double left = simpson(p.lo, p.mid, p.f_lo, f_lm, p.f_mid);
        const double right = simpson(p.mid, p.hi, p.f_mid, f_rm, p.f_hi);
        const double delta = left + right - p.whole;

        if (std::abs(delta) <= 15.0 * p.tolerance) {
            result.value += left + right + delta / 15.0;
            result.error_estimate += std::abs(delta) / 15.0;
            continue;
        }
        if (p.depth >= max_depth)
            throw NumericalError("adaptive_simpson: no convergence to tolerance " + std::to_string(abs_tolerance) +
                                 " near x = " + std::to_string(p.mid));
        stack.push_back({p.mid, rm, p.hi, p.f_mid, f_rm, p.f_hi, right, 0.5 * p.tolerance, p.depth + 1});
        stack.push_back({p.lo, lm, p.mid, p.f_lo, f_lm, p.f_mid, left, 0.5 * p.tolerance, p.depth + 1});
    }
    return result;
}

} // namespace pmeb
