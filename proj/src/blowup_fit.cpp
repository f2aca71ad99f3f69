#include "pmeb/blowup_fit.hpp"

#include "pmeb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pmeb {

namespace {

constexpr double qualifying_phi = 1e3;
constexpr std::size_t minimum_samples = 8;

struct Fit {
    double ssr = std::numeric_limits<double>::infinity();
    double gamma = 0.0;
};

// Least squares of log phi = c - gamma log(t_c - t) at t_c = t_last + delta.
Fit fit_at(const std::vector<Sample>& s, double t_last, double delta)
{
    const double n = static_cast<double>(s.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> xs(s.size()), ys(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        xs[i] = std::log((t_last - s[i].t) + delta);
        ys[i] = std::log(s[i].phi);
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    for (std::size_t i = 0; i < s.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    Fit f;
    if (sxx <= 0.0)
        return f;
    const double slope = sxy / sxx;
    f.gamma = -slope;
    f.ssr = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double r = ys[i] - (my + slope * (xs[i] - mx));
        f.ssr += r * r;
    }
    return f;
}

BlowupEstimate fit_window(const std::vector<Sample>& window)
{
    const double t_last = window.back().t;
    const double span = t_last - window.front().t;
    if (!(span > 0.0))
        throw EstimationError("blow-up fit: window has no time extent");

    // delta ranges from a few ulps of t_last to a hundred window spans
    const double lo = std::max(8.0 * std::numeric_limits<double>::epsilon() * std::abs(t_last), 1e-300);
    const double hi = 100.0 * span;
    const int points = 241;
    const double llo = std::log(lo), lhi = std::log(hi);
    auto objective = [&](double ld) { return fit_at(window, t_last, std::exp(ld)).ssr; };

    int best = 0;
    double best_ssr = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        const double ssr = objective(llo + (lhi - llo) * i / (points - 1));
        if (ssr < best_ssr) {
            best_ssr = ssr;
            best = i;
        }
    }
    if (best == points - 1)
        throw EstimationError("blow-up fit: best blow-up time at the far end of the scan (no blow-up signature)");

    double a = llo + (lhi - llo) * std::max(best - 1, 0) / (points - 1);
    double b = llo + (lhi - llo) * std::min(best + 1, points - 1) / (points - 1);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective(x2);
        }
    }
    const double ld = f1 <= f2 ? x1 : x2;
    const double delta = std::exp(ld);
    const Fit f = fit_at(window, t_last, delta);
    if (!(f.gamma > 0.0))
        throw EstimationError("blow-up fit: non-positive growth exponent");
    return {t_last + delta, 0.0, f.gamma};
}

} // namespace

BlowupEstimate estimate_blowup_time(const SimulationSeries& series)
{
    std::vector<Sample> q;
    for (const Sample& s : series.samples)
        if (s.phi > qualifying_phi && std::isfinite(s.phi) && (q.empty() || s.t > q.back().t))
            q.push_back(s);
    if (q.size() < minimum_samples)
        throw EstimationError("blow-up fit: fewer than 8 samples with phi > 1e3");

    const std::size_t third = std::max<std::size_t>(q.size() / 3, 4);
    const std::size_t half = std::max<std::size_t>(q.size() / 2, 4);
    const std::vector<Sample> last_third(q.end() - static_cast<std::ptrdiff_t>(third), q.end());
    const std::vector<Sample> last_half(q.end() - static_cast<std::ptrdiff_t>(half), q.end());

    BlowupEstimate est = fit_window(last_third);
    const BlowupEstimate wide = fit_window(last_half);
    est.uncertainty = std::abs(est.t_star - wide.t_star);
    return est;
}

} // namespace pmeb
