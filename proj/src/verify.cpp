#include "pmeb/verify.hpp"

#include "pmeb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <string>
#include <thread>

namespace pmeb {

std::string_view to_string(InequalityKind kind)
{
    switch (kind) {
    case InequalityKind::boundary_trace: return "boundary-trace";
    case InequalityKind::interp_2d: return "interp-2d";
    case InequalityKind::interp_3d: return "interp-3d";
    }
    return "?";
}

std::string_view to_string(TestFunctionKind kind)
{
    switch (kind) {
    case TestFunctionKind::constant: return "constant";
    case TestFunctionKind::radial_polynomial: return "radial-polynomial";
    case TestFunctionKind::trig_mix: return "trig-mix";
    }
    return "?";
}

std::vector<double> TestFunction::sample(const SpatialGrid& grid) const
{
    std::vector<double> v(grid.size());
    const bool planar = grid.axis_count() == 2;
    auto xy = [&](std::size_t node) {
        return std::pair{grid.coordinate(node, 0), planar ? grid.coordinate(node, 1) : 0.0};
    };

    switch (kind) {
    case TestFunctionKind::constant:
        std::fill(v.begin(), v.end(), amplitude);
        return v;
    case TestFunctionKind::radial_polynomial:
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double r = grid.distance_from_origin(i);
            v[i] = 1.0 + amplitude * r * r;
        }
        return v;
    case TestFunctionKind::trig_mix: break;
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double L = grid.geometry().shape.extent_x();
    const double Ly = planar ? grid.geometry().shape.extent_y() : L;
    const int K = std::max(modes, 1);
    std::vector<double> amp(K), wx(K), wy(K), phase(K);
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
        amp[k] = unit(rng);
        total += std::abs(amp[k]);
        const double f1 = 1.75 + 1.25 * unit(rng), f2 = 1.75 + 1.25 * unit(rng);
        if (grid.is_radial()) {
            wx[k] = f1 / (L * L);
        } else {
            wx[k] = (unit(rng) < 0.0 ? -f1 : f1) / L;
            wy[k] = (unit(rng) < 0.0 ? -f2 : f2) / Ly;
        }
        phase[k] = std::numbers::pi * (1.0 + unit(rng));
    }
    const double budget = 2.0 * (0.625 + 0.375 * unit(rng));
    for (double& a : amp)
        a *= budget / total;

    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto [x, y] = xy(i);
        double e = 0.0;
        for (int k = 0; k < K; ++k) {
            const double arg = grid.is_radial() ? wx[k] * x * x : wx[k] * x + (planar ? wy[k] * y : 0.0);
            e += amp[k] * std::cos(arg + phase[k]);
        }
        v[i] = std::exp(e);
    }
    return v;
}

namespace {

struct Sides {
    double lhs = 0.0;
    double rhs = 0.0;
};

std::vector<double> power(const std::vector<double>& v, double e)
{
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = std::pow(v[i], e);
    return out;
}

Sides evaluate(const InequalityCase& c, const DomainGeometry& g, int resolution)
{
    const SpatialGrid grid = build_grid(g, resolution);
    const auto V = c.test_function.sample(grid);
    for (double x : V)
        if (!(x > 0.0) || !std::isfinite(x))
            throw DomainError("check_inequality: test function must be strictly positive");

    const double lam = c.lambda, rho0 = g.rho0, d = g.d;
    const double I = integrate(grid, V, lam);
    Sides s;
    if (c.inequality == InequalityKind::boundary_trace) {
        const auto g2 = grid.gradient_squared(V);
        std::vector<double> weighted(V.size());
        for (std::size_t i = 0; i < V.size(); ++i)
            weighted[i] = std::pow(V[i], lam - 1.0) * std::sqrt(g2[i]);
        s.lhs = integrate_boundary(grid, V, lam);
        s.rhs = g.dimension / rho0 * I + d * lam / rho0 * integrate(grid, weighted, 1.0);
        return s;
    }

    const double eps = *c.epsilon;
    const auto W = power(V, lam / 2.0);
    const double D = integrate(grid, grid.gradient_squared(W), 1.0);
    s.lhs = integrate(grid, V, 1.5 * lam);
    if (c.inequality == InequalityKind::interp_2d) {
        s.rhs = std::numbers::sqrt2 / (2.0 * rho0) *
                (std::pow(I, 1.5) + (d + rho0) / (2.0 * eps * eps) * I * I + (d + rho0) * eps * eps / 2.0 * D);
    } else {
        const double geo = std::pow(1.0 + d / rho0, 1.5);
        s.rhs = std::numbers::sqrt2 * (std::pow(3.0 / (2.0 * rho0), 1.5) * std::pow(I, 1.5) +
                                       geo / (4.0 * eps * eps * eps) * I * I * I + 0.75 * geo * eps * D);
    }
    return s;
}

} // namespace

InequalityReport check_inequality(const InequalityCase& c, const DomainGeometry& geom)
{
    if (!(c.lambda >= 1.0))
        throw PreconditionError("check_inequality: lambda must be at least 1");
    if (c.inequality == InequalityKind::interp_2d && geom.dimension != 2)
        throw UsageError("check_inequality: interp-2d needs a two-dimensional domain");
    if (c.inequality == InequalityKind::interp_3d && geom.dimension != 3)
        throw UsageError("check_inequality: interp-3d needs a three-dimensional domain");
    if (c.inequality != InequalityKind::boundary_trace && !(c.epsilon && *c.epsilon > 0.0))
        throw PreconditionError("check_inequality: epsilon must be positive");

    const Sides base = evaluate(c, geom, c.resolution);
    const Sides fine = evaluate(c, geom, 2 * c.resolution);
    const Sides finest = evaluate(c, geom, 4 * c.resolution);

    InequalityReport r;
    r.lhs = base.lhs;
    r.rhs = base.rhs;
    r.margin = base.rhs - base.lhs;
    r.margin_refined = {fine.rhs - fine.lhs, finest.rhs - finest.lhs};
    r.tolerance = std::max(4.0 / 3.0 * std::abs(r.margin - r.margin_refined[0]),
                           1e-12 * (std::abs(r.lhs) + std::abs(r.rhs)));
    return r;
}

std::size_t SuiteSummary::failures() const
{
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const SuiteEntry& e) { return !e.passed; }));
}

SuiteSummary run_inequality_suite(std::uint64_t seed, int per_combo, int resolution)
{
    const auto interval = compute_geometry(DomainShape::interval(1.0));
    const auto disk = compute_geometry(DomainShape::disk(1.0));
    const auto ball = compute_geometry(DomainShape::ball(1.0));
    const auto rect = compute_geometry(DomainShape::rectangle(1.0, 0.5));
    const double lambdas[] = {1.0, 2.0, 3.5};
    const double epsilons[] = {0.5, 1.0, 2.0};

    SuiteSummary summary;
    auto add = [&](InequalityKind kind, const DomainGeometry& g, double lam, std::optional<double> eps,
                   TestFunction tf) {
        SuiteEntry e{InequalityCase{kind, lam, eps, tf, resolution}, g, {}, false};
        summary.entries.push_back(std::move(e));
    };

    add(InequalityKind::boundary_trace, ball, 2.0, std::nullopt, TestFunction{TestFunctionKind::constant, 1.0, 0, 0});
    std::uint64_t next = seed;
    auto trig = [&] { return TestFunction{TestFunctionKind::trig_mix, 1.0, next++, 3}; };
    for (const auto* g : {&interval, &disk, &ball, &rect})
        for (double lam : lambdas)
            for (int k = 0; k < per_combo; ++k)
                add(InequalityKind::boundary_trace, *g, lam, std::nullopt, trig());
    for (const auto* g : {&disk, &rect})
        for (double lam : lambdas)
            for (double eps : epsilons)
                for (int k = 0; k < per_combo; ++k)
                    add(InequalityKind::interp_2d, *g, lam, eps, trig());
    for (double lam : lambdas)
        for (double eps : epsilons)
            for (int k = 0; k < per_combo; ++k)
                add(InequalityKind::interp_3d, ball, lam, eps, trig());

    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    auto& entries = summary.entries;
    for (std::size_t start = 0; start < entries.size(); start += workers) {
        const std::size_t stop = std::min(entries.size(), start + workers);
        std::vector<std::future<InequalityReport>> jobs;
        for (std::size_t i = start; i < stop; ++i)
            jobs.push_back(std::async(std::launch::async,
                                      [&e = entries[i]] { return check_inequality(e.c, e.geometry); }));
        for (std::size_t i = start; i < stop; ++i) {
            entries[i].report = jobs[i - start].get();
            entries[i].passed = entries[i].report.margin >= -10.0 * entries[i].report.tolerance;
        }
    }
    return summary;
}

EnvelopeReport check_phi_envelope(const SimulationSeries& series, const ConstantsLedger& ledger, double grid_spacing)
{
    int power = 0;
    if (ledger.variant == LedgerVariant::blowup_3d)
        power = 3;
    else if (ledger.variant == LedgerVariant::blowup_2d)
        power = 2;
    else
        throw UsageError("check_phi_envelope: needs a blow-up ledger");

    EnvelopeReport r;
    r.tolerance = 0.05 + grid_spacing * grid_spacing;
    const auto& s = series.samples;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double dt = s[i + 1].t - s[i].t;
        if (!(dt > 0.0) || !std::isfinite(s[i + 1].phi))
            continue;
        const double quotient = (s[i + 1].phi - s[i].phi) / dt;
        const double envelope = ledger.c1 * s[i].phi + ledger.c5 * std::pow(s[i].phi, power);
        const double ratio = quotient / envelope;
        ++r.pairs;
        if (r.pairs == 1 || ratio > r.worst_ratio)
            r.worst_ratio = ratio;
        if (ratio > 1.0 + r.tolerance)
            r.holds = false;
    }
    return r;
}

CeilingReport check_psi_ceiling(const SimulationSeries& series, const BoundResult& ceiling)
{
    if (ceiling.formula != BoundFormula::global_ceiling)
        throw UsageError("check_psi_ceiling: needs a global-ceiling bound");
    CeilingReport r;
    r.ceiling = ceiling.value;
    for (const Sample& s : series.samples) {
        r.worst_psi = std::max(r.worst_psi, s.psi);
        if (s.psi > ceiling.value)
            r.holds = false;
    }
    return r;
}

} // namespace pmeb
