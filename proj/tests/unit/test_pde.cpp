#include "pmeb/errors.hpp"
#include "pmeb/pde.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace pmeb;
using std::numbers::pi;

namespace {

ProblemParams params(double m, double p, double q)
{
    ProblemParams pp;
    pp.m = m;
    pp.p = p;
    pp.q = q;
    return pp;
}

ProblemParams pure_pme(double m)
{
    auto pp = params(m, 2.0, 2.0);
    pp.a = pp.b = pp.c = pp.k = 0.0;
    return pp;
}

std::vector<double> radial_field(const SpatialGrid& g, double (*f)(double))
{
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = f(g.coordinate(i, 0));
    return v;
}

std::size_t node_at(const SpatialGrid& g, double r)
{
    return static_cast<std::size_t>(std::lround(r / g.spacing(0)));
}

double laplacian_exact(double r)
{
    // Lap (1 + r^2)^{5/2} in three dimensions
    const double m = 2.5, s = 1.0 + r * r;
    return 6.0 * m * std::pow(s, m - 1.0) + 4.0 * m * (m - 1.0) * r * r * std::pow(s, m - 2.0);
}

} // namespace

TEST_CASE("scheme and verdict names")
{
    CHECK(parse_time_scheme("explicit-rk2") == TimeScheme::explicit_rk2);
    CHECK(parse_time_scheme("implicit") == TimeScheme::rosenbrock2);
    CHECK(to_string(TimeScheme::rosenbrock2) == "rosenbrock2");
    CHECK_THROWS_AS(parse_time_scheme("euler"), ConfigurationError);
    CHECK(to_string(Verdict::dt_floor_without_growth) == "dt-floor-without-growth");
}

TEST_CASE("uniform field: the right-hand side is the scalar reaction")
{
    const auto geom = compute_geometry(DomainShape::ball(1.0));
    const auto grid = build_grid(geom, 32);
    auto pp = params(2.5, 2.0, 1.6);
    pp.k = 0.0;
    const double u = 2.0;
    const auto rhs = spatial_rhs(Field{&grid, std::vector<double>(grid.size(), u), 0.0}, pp, 1.0);
    const double expected = pp.a * geom.volume * std::pow(u, pp.p) - pp.b * std::pow(u, pp.q);
    for (double r : rhs)
        CHECK(r == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("radial Laplacian matches the symbolic oracle at second order")
{
    const auto geom = compute_geometry(DomainShape::ball(1.0));
    const auto pp = pure_pme(2.5);
    // reference values from tests/oracles/bounds_oracle.py
    CHECK(laplacian_exact(0.25) == doctest::Approx(17.394351858074505445).epsilon(1e-14));
    CHECK(laplacian_exact(0.5) == doctest::Approx(25.155764746872634085).epsilon(1e-14));
    CHECK(laplacian_exact(0.75) == doctest::Approx(39.84375).epsilon(1e-14));

    for (double r : {0.25, 0.5, 0.75}) {
        double previous = 0.0;
        for (int res : {32, 64, 128, 256}) {
            const auto grid = build_grid(geom, res);
            const auto u = radial_field(grid, [](double x) { return 1.0 + x * x; });
            const auto rhs = spatial_rhs(Field{&grid, u, 0.0}, pp, 1.0);
            const double err = std::abs(rhs[node_at(grid, r)] - laplacian_exact(r));
            CHECK(err < 0.05);
            if (previous > 0.0)
                CHECK(previous / err > 3.5);
            previous = err;
        }
    }
}

TEST_CASE("gradient damping of e^x is e^x / 4")
{
    const auto grid = build_grid(compute_geometry(DomainShape::interval(1.0)), 128);
    std::vector<double> u(grid.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        u[i] = std::exp(grid.coordinate(i, 0));
    auto pp = pure_pme(2.0);
    const auto base = spatial_rhs(Field{&grid, u, 0.0}, pp, 1.0);
    pp.c = 1.0;
    const auto damped = spatial_rhs(Field{&grid, u, 0.0}, pp, 1.0);
    for (std::size_t i = 1; i + 1 < u.size(); ++i)
        CHECK(base[i] - damped[i] == doctest::Approx(u[i] / 4.0).epsilon(1e-4));
}

TEST_CASE("boundary flux enters through the boundary cells")
{
    const auto geom = compute_geometry(DomainShape::ball(1.0));
    const auto grid = build_grid(geom, 16);
    auto pp = pure_pme(2.0);
    pp.k = 1.0;
    const std::vector<double> u(grid.size(), 1.0);
    const auto rhs = spatial_rhs(Field{&grid, u, 0.0}, pp, 1.0);
    const std::size_t last = grid.size() - 1;
    CHECK(rhs[last] == doctest::Approx(grid.boundary_weights()[last] * 2.0 / grid.cell_weights()[last]));
    for (std::size_t i = 0; i < last; ++i)
        CHECK(rhs[i] == 0.0);
    // total inflow is |dOmega| m k
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        total += grid.cell_weights()[i] * rhs[i];
    CHECK(total == doctest::Approx(4.0 * pi * 2.0));
}

TEST_CASE("spatial_rhs preconditions")
{
    const auto grid = build_grid(compute_geometry(DomainShape::interval(1.0)), 8);
    const auto pp = pure_pme(2.0);
    CHECK_THROWS_AS(spatial_rhs(Field{nullptr, {}, 0.0}, pp, 1.0), PreconditionError);
    CHECK_THROWS_AS(spatial_rhs(Field{&grid, std::vector<double>(3, 1.0), 0.0}, pp, 1.0), PreconditionError);
    std::vector<double> u(grid.size(), 1.0);
    u[2] = 0.0;
    CHECK_THROWS_AS(spatial_rhs(Field{&grid, u, 0.0}, pp, 1.0), PositivityError);
}

TEST_CASE("uniform explicit step is the scalar midpoint update")
{
    const auto geom = compute_geometry(DomainShape::ball(1.0));
    const auto grid = build_grid(geom, 16);
    auto pp = params(2.5, 2.0, 1.6);
    pp.k = 0.0;
    SolverConfig cfg;
    const double u0 = 1.3;
    const auto next = step(Field{&grid, std::vector<double>(grid.size(), u0), 0.0}, pp, 1.0, cfg);
    const double dt = next.time;
    auto f = [&](double u) { return pp.a * geom.volume * std::pow(u, pp.p) - pp.b * std::pow(u, pp.q); };
    const double expected = u0 + dt * f(u0 + 0.5 * dt * f(u0));
    CHECK(dt > 0.0);
    for (double v : next.values)
        CHECK(v == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("stable step shrinks as the field grows")
{
    const auto grid = build_grid(compute_geometry(DomainShape::ball(1.0)), 32);
    const auto pp = pure_pme(2.5);
    SolverConfig cfg;
    const std::vector<double> zero(grid.size(), 0.0);
    const double dt1 = stable_time_step(Field{&grid, std::vector<double>(grid.size(), 1.0), 0.0}, pp, cfg, zero);
    const double dt4 = stable_time_step(Field{&grid, std::vector<double>(grid.size(), 4.0), 0.0}, pp, cfg, zero);
    CHECK(dt1 / dt4 == doctest::Approx(std::pow(4.0, 1.5)));
    CHECK(dt1 == doctest::Approx(cfg.cfl_safety * std::pow(grid.min_spacing(), 2) / (2.0 * 3.0 * 2.5)));
    cfg.dt_max = 1e-9;
    CHECK(stable_time_step(Field{&grid, std::vector<double>(grid.size(), 1.0), 0.0}, pp, cfg, zero) == 1e-9);
}

TEST_CASE("pure porous-medium flow conserves mass")
{
    for (auto scheme : {TimeScheme::explicit_rk2, TimeScheme::rosenbrock2}) {
        for (const auto& shape : {DomainShape::ball(1.0), DomainShape::disk(1.0), DomainShape::interval(1.0),
                                  DomainShape::rectangle(1.0, 0.5)}) {
            const auto geom = compute_geometry(shape);
            const auto grid = build_grid(geom, 32);
            std::vector<double> u(grid.size());
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double r = grid.distance_from_origin(i);
                u[i] = 0.2 + std::exp(-8.0 * r * r);
            }
            SolverConfig cfg;
            cfg.scheme = scheme;
            cfg.t_horizon = 0.02;
            cfg.resolution = 32;
            const auto s = run_from(grid, u, pure_pme(2.0), 1.0, cfg);
            CHECK(s.verdict == Verdict::global_to_horizon);
            const double before = integrate(grid, u, 1.0);
            const double after = integrate(grid, s.final_values, 1.0);
            CHECK(std::abs(after - before) / before < 1e-8);
            CHECK(s.samples.back().t == cfg.t_horizon);
        }
    }
}

TEST_CASE("verdicts")
{
    const auto ball = compute_geometry(DomainShape::ball(1.0));
    InitialDatum datum;
    SolverConfig cfg;
    cfg.resolution = 32;

    SUBCASE("blow-up")
    {
        cfg.t_horizon = 10.0;
        const auto s = run(datum, params(2.5, 6.0, 2.0), ball, cfg);
        CHECK(s.verdict == Verdict::blowup);
        CHECK(std::isfinite(s.t_star_est));
        CHECK(s.t_star_est >= s.samples.back().t);
        CHECK(s.beta == doctest::Approx(blowup_flux_exponent(params(2.5, 6.0, 2.0))));
    }
    SUBCASE("global")
    {
        cfg.t_horizon = 1.0;
        const auto s = run(datum, params(1.5, 2.0, 3.0), ball, cfg);
        CHECK(s.verdict == Verdict::global_to_horizon);
        CHECK(std::isnan(s.t_star_est));
        CHECK(s.samples.back().t == 1.0);
    }
    SUBCASE("step limit")
    {
        cfg.max_steps = 5;
        const auto s = run(datum, params(1.5, 2.0, 3.0), ball, cfg);
        CHECK(s.verdict == Verdict::step_limit);
        CHECK(s.steps == 5);
    }
    SUBCASE("step floor without growth")
    {
        cfg.dt_floor = 0.5;
        const auto s = run(datum, params(1.5, 2.0, 3.0), ball, cfg);
        CHECK(s.verdict == Verdict::dt_floor_without_growth);
    }
}

TEST_CASE("sample times increase and include every checkpoint")
{
    const auto ball = compute_geometry(DomainShape::ball(1.0));
    SolverConfig cfg;
    cfg.resolution = 16;
    cfg.t_horizon = 0.3;
    cfg.output_stride = 50;
    cfg.checkpoints = {0.1, 0.05, 0.2};
    const auto s = run(InitialDatum{}, params(1.5, 2.0, 3.0), ball, cfg);
    for (std::size_t i = 1; i < s.samples.size(); ++i)
        CHECK(s.samples[i].t > s.samples[i - 1].t);
    for (double c : {0.05, 0.1, 0.2, 0.3})
        CHECK(std::any_of(s.samples.begin(), s.samples.end(), [c](const Sample& x) { return x.t == c; }));
}

TEST_CASE("the two time schemes agree")
{
    const auto ball = compute_geometry(DomainShape::ball(1.0));
    SolverConfig cfg;
    cfg.resolution = 32;
    cfg.t_horizon = 0.5;
    cfg.rtol = 1e-7;
    cfg.atol = 1e-11;
    const auto pp = params(1.5, 2.0, 3.0);
    const auto a = run(InitialDatum{}, pp, ball, cfg);
    cfg.scheme = TimeScheme::rosenbrock2;
    const auto b = run(InitialDatum{}, pp, ball, cfg);
    CHECK(b.steps < a.steps);
    CHECK(b.samples.back().psi == doctest::Approx(a.samples.back().psi).epsilon(1e-5));
    CHECK(b.samples.back().sup_u == doctest::Approx(a.samples.back().sup_u).epsilon(1e-5));
}

TEST_CASE("stronger boundary inflow gives a larger phi")
{
    const auto ball = compute_geometry(DomainShape::ball(1.0));
    SolverConfig cfg;
    cfg.resolution = 24;
    cfg.t_horizon = 0.02;
    double previous = 0.0;
    for (double k : {0.0, 0.5, 1.0, 2.0}) {
        auto pp = params(2.5, 2.0, 1.6);
        pp.k = k;
        const auto s = run(InitialDatum{}, pp, ball, cfg);
        CHECK(s.samples.back().phi > previous);
        previous = s.samples.back().phi;
    }
}

TEST_CASE("beta resolution")
{
    SolverConfig cfg;
    CHECK(resolve_beta(params(2.5, 2.0, 1.6), 3, cfg) == doctest::Approx(0.125));
    CHECK(resolve_beta(params(1.5, 2.0, 3.0), 3, cfg) == doctest::Approx(1.5));
    auto outside = params(3.0, 2.0, 1.6);
    CHECK_THROWS_AS(resolve_beta(outside, 3, cfg), UsageError);
    outside.k = 0.0;
    CHECK(resolve_beta(outside, 3, cfg) == 1.0);
    outside.k = 1.0;
    cfg.beta_override = 0.7;
    CHECK(resolve_beta(outside, 3, cfg) == 0.7);
}

TEST_CASE("solver configuration validation")
{
    auto bad = [](auto edit) {
        SolverConfig c;
        edit(c);
        return c;
    };
    CHECK_NOTHROW(SolverConfig{}.validate());
    CHECK_THROWS_AS(bad([](SolverConfig& c) { c.resolution = 4; }).validate(), ConfigurationError);
    CHECK_THROWS_AS(bad([](SolverConfig& c) { c.cfl_safety = 1.5; }).validate(), ConfigurationError);
    CHECK_THROWS_AS(bad([](SolverConfig& c) { c.t_horizon = 0.0; }).validate(), ConfigurationError);
    CHECK_THROWS_AS(bad([](SolverConfig& c) { c.output_stride = 0; }).validate(), ConfigurationError);
    CHECK_THROWS_AS(bad([](SolverConfig& c) { c.checkpoints = {2.0}; }).validate(), ConfigurationError);
    CHECK_THROWS_AS(bad([](SolverConfig& c) { c.rtol = -1.0; }).validate(), ConfigurationError);
}
