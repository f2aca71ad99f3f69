#include "pmeb/bounds.hpp"

#include "pmeb/errors.hpp"
#include "pmeb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace pmeb {

std::string_view to_string(LedgerVariant variant)
{
    switch (variant) {
    case LedgerVariant::blowup_3d: return "blowup-3d";
    case LedgerVariant::blowup_2d: return "blowup-2d";
    case LedgerVariant::global: return "global";
    }
    return "?";
}

std::string_view to_string(BoundFormula formula)
{
    switch (formula) {
    case BoundFormula::closed_3d: return "closed-3d";
    case BoundFormula::closed_2d: return "closed-2d";
    case BoundFormula::quadrature_3d: return "quadrature-3d";
    case BoundFormula::quadrature_2d: return "quadrature-2d";
    case BoundFormula::closed_2d_upsilon_positive: return "closed-2d-upsilon-positive";
    case BoundFormula::closed_2d_upsilon_zero: return "closed-2d-upsilon-zero";
    case BoundFormula::global_ceiling: return "global-ceiling";
    }
    return "?";
}

namespace {

using std::numbers::sqrt2;

// Shared by both dimensions: the coefficient multiplying the interpolated
// integral of v^3 once the boundary and source terms are collected.
double interpolation_weight(const ProblemParams& pp, const DomainGeometry& g, double eps1)
{
    const double m = pp.m, s = pp.s(), k = pp.k, d = g.d, rho0 = g.rho0;
    return 3.0 * m * m * s * k / (2.0 * rho0) + 5.0 * m * m * m * s * s * k * d / (8.0 * rho0 * eps1) +
           2.0 * pp.a * s * g.volume;
}

double linear_coefficient(const ProblemParams& pp, const DomainGeometry& g)
{
    return pp.a * (pp.m - 2.0) * pp.s() * g.volume + 3.0 * pp.m * pp.m * pp.s() * pp.k / (2.0 * g.rho0);
}

// c/(ms) - 5mdk eps1/(2 rho0): what the eps2 terms have to absorb
double gradient_slack(const ProblemParams& pp, const DomainGeometry& g, double eps1)
{
    return pp.c / pp.ms() - 5.0 * pp.m * g.d * pp.k * eps1 / (2.0 * g.rho0);
}

void check_eps1(const ProblemParams& pp, const DomainGeometry& g, double eps1)
{
    const double upper = eps1_upper_limit(pp, g);
    if (!(eps1 > 0.0 && eps1 < upper))
        throw PreconditionError("eps1 = " + std::to_string(eps1) + " outside (0, " + std::to_string(upper) + ")");
    if (!(gradient_slack(pp, g, eps1) > 0.0))
        throw InfeasibilityError("no eps2 cancels the gradient coefficient at eps1 = " + std::to_string(eps1));
}

void require_positive(double phi0, const char* what)
{
    if (!(phi0 > 0.0) || !std::isfinite(phi0))
        throw PreconditionError(std::string(what) + ": phi0 must be positive and finite");
}

void require_variant(const ConstantsLedger& ledger, LedgerVariant want, const char* what)
{
    if (ledger.variant != want)
        throw UsageError(std::string(what) + ": expected a " + std::string(to_string(want)) + " ledger, got " +
                         std::string(to_string(ledger.variant)));
}

constexpr double tail_fraction = 1e-3;

// Integrand of int_{phi0}^inf dtau / (c1 tau + c2 tau^{3/2} + cN tau^N) after
// tau = phi0 / sigma, on sigma in (0, 1]. The caller adds the analytic tail.
QuadratureResult improper_integral(double c1, double c2, double cN, int power, double phi0, double tolerance)
{
    const double r0 = std::sqrt(phi0);
    QuadratureResult body;
    double tail = 0.0, sigma_cut = 0.0;
    if (power == 3) {
        // tail int_{tau_max}^inf dtau/(cN tau^3) = sigma_cut^2 / (2 cN phi0^2)
        sigma_cut = std::min(1e-2, std::sqrt(2.0 * cN * phi0 * phi0 * tolerance * tail_fraction));
        tail = sigma_cut * sigma_cut / (2.0 * cN * phi0 * phi0);
        auto g = [=](double sg) {
            return phi0 * sg / (c1 * phi0 * sg * sg + c2 * phi0 * r0 * sg * std::sqrt(sg) + cN * phi0 * phi0 * phi0);
        };
        body = adaptive_simpson(g, sigma_cut, 1.0, tolerance);
    } else {
        sigma_cut = std::min(1e-2, cN * phi0 * tolerance * tail_fraction);
        tail = sigma_cut / (cN * phi0);
        auto g = [=](double sg) {
            return phi0 / (c1 * phi0 * sg + c2 * phi0 * r0 * std::sqrt(sg) + cN * phi0 * phi0);
        };
        body = adaptive_simpson(g, sigma_cut, 1.0, tolerance);
    }
    // the true tail lies in (0, tail]; report the midpoint of the bracket
    body.value += 0.5 * tail;
    body.error_estimate += 0.5 * tail;
    return body;
}

// 1e-10 absolute, tightened for ledgers whose bound is itself tiny.
double quadrature_tolerance(double scale)
{
    return 1e-10 * std::min(1.0, scale);
}

BoundResult blowup_bound(const ProblemParams& pp, const DomainGeometry& g, double eps1, double phi0,
                         LedgerVariant variant)
{
    if (variant == LedgerVariant::blowup_3d)
        return lower_bound_3d(constants_3d(pp, g, eps1), phi0);
    return lower_bound_2d(constants_2d(pp, g, eps1), phi0);
}

} // namespace

double eps1_upper_limit(const ProblemParams& params, const DomainGeometry& geom)
{
    const double m = params.m;
    return 2.0 * geom.rho0 * params.c / (5.0 * m * m * params.s() * geom.d * params.k);
}

double gradient_coefficient(const ProblemParams& pp, const DomainGeometry& g, LedgerVariant variant, double eps1,
                            double eps2)
{
    const double m = pp.m, s = pp.s(), k = pp.k, d = g.d, rho0 = g.rho0, a = pp.a, vol = g.volume;
    const double ms = pp.ms();
    const double first = 3.0 * m * m * s * k / (2.0 * rho0) + 2.0 * a * s * vol;
    const double second = 5.0 * m * m * m * s * s * k * d / (8.0 * rho0 * eps1);
    const double tail = 5.0 * m * d * k * eps1 / (2.0 * rho0) - pp.c / ms;
    if (variant == LedgerVariant::blowup_3d) {
        const double geo = std::pow(d / rho0 + 1.0, 1.5);
        return (3.0 * sqrt2 / 4.0) * geo * eps2 * first + (3.0 * sqrt2 / 4.0) * geo * eps2 * second + tail;
    }
    if (variant == LedgerVariant::blowup_2d) {
        const double geo = sqrt2 * (d + rho0) * eps2 * eps2 / (4.0 * rho0);
        return geo * first + geo * second + tail;
    }
    throw UsageError("gradient_coefficient: the global variant has no gradient coefficient");
}

ConstantsLedger constants_3d(const ProblemParams& pp, const DomainGeometry& g, double eps1)
{
    if (!classify(pp, g.dimension).blowup_bound_3d)
        throw UsageError("constants_3d: parameters are not in the N = 3 blow-up regime");
    check_eps1(pp, g, eps1);

    const double ms = pp.ms(), q = pp.q, rho0 = g.rho0;
    const double A = interpolation_weight(pp, g, eps1);
    const double geo = sqrt2 * std::pow(g.d / rho0 + 1.0, 1.5);

    ConstantsLedger L;
    L.variant = LedgerVariant::blowup_3d;
    L.c1 = linear_coefficient(pp, g);
    L.c2 = A * std::pow(3.0, 1.5) / (2.0 * std::pow(rho0, 1.5));

    EpsilonChoice e;
    e.eps1 = eps1;
    e.eps1_max = eps1_upper_limit(pp, g);
    e.eps2 = gradient_slack(pp, g, eps1) / (A * 0.75 * geo);
    if (!(e.eps2 > 0.0) || !std::isfinite(e.eps2))
        throw InfeasibilityError("constants_3d: eps2 is not positive");
    L.c3 = A * geo / (4.0 * e.eps2 * e.eps2 * e.eps2);
    L.c4 = gradient_coefficient(pp, g, LedgerVariant::blowup_3d, eps1, e.eps2);

    const double big = 4.0 * ms - 2.0 * q + 2.0;
    const double small = ms - 2.0 * q + 2.0;
    e.eps3 = std::pow(pp.b * big * std::pow(g.volume, (1.0 - q) / ms) / (3.0 * L.c2), 3.0 * ms / big);
    L.c5 = L.c2 * small / big * std::pow(e.eps3, -big / small) + L.c3;
    L.epsilons = e;
    return L;
}

ConstantsLedger constants_2d(const ProblemParams& pp, const DomainGeometry& g, double eps1)
{
    if (!classify(pp, g.dimension).blowup_bound_2d)
        throw UsageError("constants_2d: parameters are not in the N = 2 blow-up regime");
    check_eps1(pp, g, eps1);

    const double ms = pp.ms(), q = pp.q, rho0 = g.rho0;
    const double A = interpolation_weight(pp, g, eps1);
    const double geo = sqrt2 * (g.d + rho0) / (4.0 * rho0);

    ConstantsLedger L;
    L.variant = LedgerVariant::blowup_2d;
    L.c1 = linear_coefficient(pp, g);
    L.c2 = A * sqrt2 / (2.0 * rho0);

    EpsilonChoice e;
    e.eps1 = eps1;
    e.eps1_max = eps1_upper_limit(pp, g);
    e.eps2 = std::sqrt(gradient_slack(pp, g, eps1) / (A * geo));
    if (!(e.eps2 > 0.0) || !std::isfinite(e.eps2))
        throw InfeasibilityError("constants_2d: eps2 is not positive");
    L.c3 = A * geo / (e.eps2 * e.eps2);
    L.c4 = gradient_coefficient(pp, g, LedgerVariant::blowup_2d, eps1, e.eps2);

    const double big = 2.0 * ms - 2.0 * q + 2.0;
    const double small = ms - 2.0 * q + 2.0;
    e.eps3 = std::pow(big * pp.b * std::pow(g.volume, (1.0 - q) / ms) / L.c2, ms / big);
    L.c5 = small / big * L.c2 * std::pow(e.eps3, -big / small) + L.c3;
    L.upsilon = 4.0 * L.c1 * L.c3 - L.c2 * L.c2;
    L.epsilons = e;
    return L;
}

double comparison_ode_blowup(double c_lin, double c_pow, int exponent, double phi0)
{
    if (!(c_lin > 0.0) || !(c_pow > 0.0) || !(phi0 > 0.0))
        throw PreconditionError("comparison_ode_blowup: c_lin, c_pow and phi0 must be positive");
    if (exponent == 3)
        return std::log1p(c_lin / (c_pow * phi0 * phi0)) / (2.0 * c_lin);
    if (exponent == 2)
        return std::log1p(c_lin / (c_pow * phi0)) / c_lin;
    throw PreconditionError("comparison_ode_blowup: exponent must be 2 or 3");
}

BoundResult lower_bound_3d(const ConstantsLedger& ledger, double phi0)
{
    require_variant(ledger, LedgerVariant::blowup_3d, "lower_bound_3d");
    require_positive(phi0, "lower_bound_3d");
    BoundResult r;
    r.ledger = ledger;
    r.phi0 = phi0;
    r.value = comparison_ode_blowup(ledger.c1, ledger.c5, 3, phi0);
    r.formula = BoundFormula::closed_3d;
    return r;
}

BoundResult lower_bound_3d_quadrature(const ConstantsLedger& ledger, double phi0)
{
    require_variant(ledger, LedgerVariant::blowup_3d, "lower_bound_3d_quadrature");
    require_positive(phi0, "lower_bound_3d_quadrature");
    const double scale = comparison_ode_blowup(ledger.c1, ledger.c5, 3, phi0);
    const auto q = improper_integral(ledger.c1, ledger.c2, ledger.c5, 3, phi0, quadrature_tolerance(scale));
    BoundResult r;
    r.ledger = ledger;
    r.phi0 = phi0;
    r.value = q.value;
    r.error_estimate = q.error_estimate;
    r.formula = BoundFormula::quadrature_3d;
    return r;
}

BoundResult lower_bound_2d(const ConstantsLedger& ledger, double phi0)
{
    require_variant(ledger, LedgerVariant::blowup_2d, "lower_bound_2d");
    require_positive(phi0, "lower_bound_2d");
    BoundResult r;
    r.ledger = ledger;
    r.phi0 = phi0;
    r.value = comparison_ode_blowup(ledger.c1, ledger.c5, 2, phi0);
    r.formula = BoundFormula::closed_2d;
    return r;
}

BoundResult lower_bound_2d_quadrature(const ConstantsLedger& ledger, double phi0)
{
    require_variant(ledger, LedgerVariant::blowup_2d, "lower_bound_2d_quadrature");
    require_positive(phi0, "lower_bound_2d_quadrature");
    const double c1 = ledger.c1, c2 = ledger.c2, c3 = ledger.c3;
    if (!(c1 > 0.0) || !(c2 >= 0.0) || !(c3 > 0.0))
        throw PreconditionError("lower_bound_2d_quadrature: need c1 > 0, c2 >= 0, c3 > 0");
    const double ups = 4.0 * c1 * c3 - c2 * c2;
    const double x0 = std::sqrt(phi0);

    BoundResult r;
    r.ledger = ledger;
    r.ledger.upsilon = ups;
    r.phi0 = phi0;
    // (1/c1) log((c1 + c2 x0 + c3 phi0) / (c3 phi0)) appears in both closed forms
    const double log_part = std::log1p((c1 + c2 * x0) / (c3 * phi0)) / c1;
    if (std::abs(ups) <= 1e-12 * (4.0 * c1 * c3 + c2 * c2)) {
        const double r1 = std::sqrt(c1), r3 = std::sqrt(c3);
        r.value = log_part - 2.0 / (r1 * (r1 + r3 * x0));
        r.formula = BoundFormula::closed_2d_upsilon_zero;
    } else if (ups > 0.0) {
        const double root = std::sqrt(ups);
        // pi/2 - atan(z) = atan(1/z) for z > 0 avoids cancellation for large z
        r.value = log_part - 2.0 * c2 * std::atan(root / (c2 + 2.0 * c3 * x0)) / (c1 * root);
        r.formula = BoundFormula::closed_2d_upsilon_positive;
    } else {
        const double scale = std::log1p(c1 / (c3 * phi0)) / c1;
        const auto q = improper_integral(c1, c2, c3, 2, phi0, quadrature_tolerance(scale));
        r.value = q.value;
        r.error_estimate = q.error_estimate;
        r.formula = BoundFormula::quadrature_2d;
    }
    return r;
}

std::vector<double> eps1_search_grid(double eps1_max)
{
    constexpr int n = 100;
    const double delta = 1e-6 * eps1_max;
    const double lo = delta, hi = eps1_max - delta;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[i] = lo + (hi - lo) * i / (n - 1);
    return grid;
}

namespace {

double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double width)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > width) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 >= f2 ? x1 : x2;
}

bool unimodal(const std::vector<double>& values)
{
    std::size_t i = 1;
    while (i < values.size() && values[i] >= values[i - 1])
        ++i;
    while (i < values.size() && values[i] <= values[i - 1])
        ++i;
    return i == values.size();
}

} // namespace

BoundResult optimize_eps1(const ProblemParams& params, const DomainGeometry& geom, double phi0,
                          LedgerVariant variant)
{
    if (variant == LedgerVariant::global)
        throw UsageError("optimize_eps1: the global variant has no eps1");
    const auto verdict = classify(params, geom.dimension);
    if ((variant == LedgerVariant::blowup_3d && !verdict.blowup_bound_3d) ||
        (variant == LedgerVariant::blowup_2d && !verdict.blowup_bound_2d))
        throw UsageError("optimize_eps1: parameters are not in the requested regime (" + describe(verdict) + ")");
    require_positive(phi0, "optimize_eps1");

    const double eps1_max = eps1_upper_limit(params, geom);
    const double ninf = -std::numeric_limits<double>::infinity();
    auto objective = [&](double eps1) {
        try {
            return blowup_bound(params, geom, eps1, phi0, variant).value;
        } catch (const InfeasibilityError&) {
            return ninf;
        }
    };

    const auto grid = eps1_search_grid(eps1_max);
    std::vector<double> values(grid.size());
    std::transform(grid.begin(), grid.end(), values.begin(), objective);
    // first maximal sample, so ties go to the smaller eps1
    const auto best_it = std::max_element(values.begin(), values.end());
    if (*best_it == ninf)
        throw InfeasibilityError("optimize_eps1: every sampled eps1 is infeasible");
    const std::size_t best = static_cast<std::size_t>(best_it - values.begin());

    const double width = 1e-8 * eps1_max;
    double lo = grid.front(), hi = grid.back();
    if (!unimodal(values)) {
        lo = grid[best == 0 ? 0 : best - 1];
        hi = grid[std::min(best + 1, grid.size() - 1)];
    }
    const double refined = golden_section_max(objective, lo, hi, width);
    const double refined_value = objective(refined);

    double chosen = grid[best];
    if (refined_value > values[best] || (refined_value == values[best] && refined < grid[best]))
        chosen = refined;
    return blowup_bound(params, geom, chosen, phi0, variant);
}

BoundResult global_ceiling(const ProblemParams& pp, const DomainGeometry& g, double psi0)
{
    if (!classify(pp, g.dimension).global_existence)
        throw UsageError("global_ceiling: parameters are not in the global-existence regime");
    require_positive(psi0, "global_ceiling");

    const double m = pp.m, p = pp.p, q = pp.q, N = g.dimension;
    GlobalConstants gc;
    gc.sigma = pp.k * g.d * (p + 1.0) * (m + 1.0) / (4.0 * g.rho0);
    gc.alpha = (q + m - 2.0 * p) / (q - p);
    const double lead = 8.0 * m * gc.sigma * gc.sigma / ((m + 1.0) * (m + 1.0));
    gc.epsilon = pp.b / (lead * (1.0 - gc.alpha));
    gc.M1 = 2.0 * pp.k * N * m / g.rho0 + 2.0 * pp.a * g.volume +
            lead * gc.alpha * std::pow(gc.epsilon, (gc.alpha - 1.0) / gc.alpha);
    gc.M2 = 2.0 * pp.b - lead * gc.epsilon * (1.0 - gc.alpha);

    ConstantsLedger L;
    L.variant = LedgerVariant::global;
    L.global = gc;

    BoundResult r;
    r.ledger = L;
    r.phi0 = psi0;
    r.value = std::max(psi0, g.volume * std::pow(gc.M1 / gc.M2, 2.0 / (q - p)));
    r.formula = BoundFormula::global_ceiling;
    return r;
}

} // namespace pmeb
