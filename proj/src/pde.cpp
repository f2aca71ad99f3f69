#include "pmeb/pde.hpp"

#include "pmeb/blowup_fit.hpp"
#include "pmeb/errors.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <string>

namespace pmeb {

std::string_view to_string(TimeScheme scheme)
{
    return scheme == TimeScheme::explicit_rk2 ? "explicit-rk2" : "rosenbrock2";
}

TimeScheme parse_time_scheme(std::string_view name)
{
    if (name == "explicit-rk2" || name == "explicit")
        return TimeScheme::explicit_rk2;
    if (name == "rosenbrock2" || name == "implicit")
        return TimeScheme::rosenbrock2;
    throw ConfigurationError("unknown time scheme '" + std::string(name) + "'");
}

std::string_view to_string(Verdict verdict)
{
    switch (verdict) {
    case Verdict::blowup: return "blowup";
    case Verdict::global_to_horizon: return "global-to-horizon";
    case Verdict::positivity_lost: return "positivity-lost";
    case Verdict::dt_floor_without_growth: return "dt-floor-without-growth";
    case Verdict::step_limit: return "step-limit";
    }
    return "?";
}

void SolverConfig::validate() const
{
    auto fail = [](const std::string& what) { throw ConfigurationError("solver: " + what); };
    if (resolution < SpatialGrid::minimum_resolution)
        fail("resolution must be at least " + std::to_string(SpatialGrid::minimum_resolution));
    if (!(cfl_safety > 0.0 && cfl_safety < 1.0))
        fail("cfl_safety must lie in (0, 1)");
    if (!(t_horizon > 0.0) || !std::isfinite(t_horizon))
        fail("t_horizon must be positive and finite");
    if (!(blowup_sup_threshold > 0.0) || !(blowup_phi_threshold > 0.0) || !(dt_floor > 0.0))
        fail("thresholds must be positive");
    if (output_stride < 1)
        fail("output_stride must be at least 1");
    if (!(max_relative_change > 0.0))
        fail("max_relative_change must be positive");
    if (!(rtol > 0.0) || !(atol > 0.0) || !(dt_max > 0.0))
        fail("rtol, atol and dt_max must be positive");
    if (max_steps < 1)
        fail("max_steps must be positive");
    for (double c : checkpoints)
        if (!(c > 0.0) || !(c <= t_horizon))
            fail("checkpoints must lie in (0, t_horizon]");
}

namespace {

void require_positive_field(std::span<const double> u)
{
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!(u[i] > 0.0) || !std::isfinite(u[i]))
            throw PositivityError("field value " + std::to_string(u[i]) + " at node " + std::to_string(i));
}

bool all_positive(const std::vector<double>& u)
{
    return std::all_of(u.begin(), u.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
}

std::vector<double> rhs_of(const SpatialGrid& grid, const std::vector<double>& u, const ProblemParams& pp,
                           double beta)
{
    return spatial_rhs(Field{&grid, u, 0.0}, pp, beta);
}

std::vector<double> axpy(const std::vector<double>& u, double a, const std::vector<double>& x)
{
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        out[i] = u[i] + a * x[i];
    return out;
}

// Linearly implicit two-stage scheme with gamma = 1 + 1/sqrt(2):
//   W k1 = F(u),  W k2 = F(u + dt k1) - 2 k1,  u+ = u + dt (3 k1 + k2) / 2,
// W = I - gamma dt J. Second order for any J, so J keeps only the local
// diffusion, boundary-flux and absorption parts plus the rank-one nonlocal
// source column (through Sherman-Morrison); the gradient damping is left out.
class Rosenbrock {
public:
    Rosenbrock(const SpatialGrid& grid, const ProblemParams& pp, double beta) : grid_(grid), pp_(pp), beta_(beta) {}

    struct Attempt {
        std::vector<double> u;
        double error = 0.0;
        bool positive = false;
    };

    Attempt attempt(const std::vector<double>& u, const std::vector<double>& f0, double dt, const SolverConfig& cfg)
    {
        factorize(u, dt);
        Attempt out;
        const std::size_t n = u.size();
        const std::vector<double> k1 = solve(f0);
        const std::vector<double> stage = axpy(u, dt, k1);
        if (!all_positive(stage))
            return out;
        std::vector<double> f1 = rhs_of(grid_, stage, pp_, beta_);
        for (std::size_t i = 0; i < n; ++i)
            f1[i] -= 2.0 * k1[i];
        const std::vector<double> k2 = solve(f1);

        out.u.resize(n);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            out.u[i] = u[i] + dt * (1.5 * k1[i] + 0.5 * k2[i]);
            const double err = 0.5 * dt * std::abs(k1[i] + k2[i]);
            const double scale = cfg.atol + cfg.rtol * std::max(std::abs(u[i]), std::abs(out.u[i]));
            worst = std::max(worst, err / scale);
        }
        out.error = std::isfinite(worst) ? worst : std::numeric_limits<double>::infinity();
        out.positive = all_positive(out.u);
        return out;
    }

private:
    static constexpr double gamma = 1.0 + 1.0 / std::numbers::sqrt2;

    void factorize(const std::vector<double>& u, double dt)
    {
        const std::size_t n = u.size();
        const auto w = grid_.cell_weights();
        const auto bw = grid_.boundary_weights();
        const double m = pp_.m, gdt = gamma * dt;

        std::vector<double> dv(n);
        for (std::size_t i = 0; i < n; ++i)
            dv[i] = m * std::pow(u[i], m - 1.0);

        triplets_.clear();
        std::vector<double> diag(n, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            double j = -pp_.b * pp_.q * std::pow(u[i], pp_.q - 1.0);
            if (bw[i] > 0.0 && pp_.k != 0.0)
                j += bw[i] / w[i] * m * pp_.k * (m - 1.0 + beta_) * std::pow(u[i], m - 2.0 + beta_);
            diag[i] -= gdt * j;
        }
        for (const Face& f : grid_.faces()) {
            const auto l = static_cast<Eigen::Index>(f.left), r = static_cast<Eigen::Index>(f.right);
            diag[f.left] += gdt * f.coefficient / w[f.left] * dv[f.left];
            diag[f.right] += gdt * f.coefficient / w[f.right] * dv[f.right];
            triplets_.emplace_back(l, r, -gdt * f.coefficient / w[f.left] * dv[f.right]);
            triplets_.emplace_back(r, l, -gdt * f.coefficient / w[f.right] * dv[f.left]);
        }
        for (std::size_t i = 0; i < n; ++i)
            triplets_.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), diag[i]);

        matrix_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        matrix_.setFromTriplets(triplets_.begin(), triplets_.end());
        matrix_.makeCompressed();
        if (!analyzed_) {
            lu_.analyzePattern(matrix_);
            analyzed_ = true;
        }
        lu_.factorize(matrix_);
        if (lu_.info() != Eigen::Success)
            throw NumericalError("rosenbrock: factorization failed");

        z_.resize(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            z_[static_cast<Eigen::Index>(i)] = pp_.a * pp_.p * w[i] * std::pow(u[i], pp_.p - 1.0);
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
        s_ = lu_.solve(ones);
        coupling_ = gdt;
        denominator_ = 1.0 - gdt * z_.dot(s_);
    }

    std::vector<double> solve(const std::vector<double>& b)
    {
        Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
        Eigen::VectorXd y = lu_.solve(rhs);
        if (pp_.a != 0.0)
            y += s_ * (coupling_ * z_.dot(y) / denominator_);
        return {y.data(), y.data() + y.size()};
    }

    const SpatialGrid& grid_;
    const ProblemParams& pp_;
    double beta_;
    std::vector<Eigen::Triplet<double>> triplets_;
    Eigen::SparseMatrix<double> matrix_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    bool analyzed_ = false;
    Eigen::VectorXd z_, s_;
    double coupling_ = 0.0;
    double denominator_ = 1.0;
};

std::optional<std::vector<double>> midpoint(const SpatialGrid& grid, const std::vector<double>& u,
                                            const std::vector<double>& f0, double dt, const ProblemParams& pp,
                                            double beta)
{
    const auto half = axpy(u, 0.5 * dt, f0);
    if (!all_positive(half))
        return std::nullopt;
    auto next = axpy(u, dt, rhs_of(grid, half, pp, beta));
    if (!all_positive(next))
        return std::nullopt;
    return next;
}

Sample measure(const SpatialGrid& grid, const std::vector<double>& u, const ProblemParams& pp, double t, double dt)
{
    Sample s;
    s.t = t;
    s.sup_u = *std::max_element(u.begin(), u.end());
    s.phi = integrate(grid, u, pp.ms());
    s.psi = integrate(grid, u, 2.0);
    s.dt = dt;
    return s;
}

void record(SimulationSeries& series, const Sample& s)
{
    if (!series.samples.empty() && !(s.t > series.samples.back().t))
        series.samples.back() = s;
    else
        series.samples.push_back(s);
}

} // namespace

std::vector<double> spatial_rhs(const Field& field, const ProblemParams& pp, double beta)
{
    if (field.grid == nullptr)
        throw PreconditionError("spatial_rhs: field has no grid");
    const SpatialGrid& grid = *field.grid;
    const auto& u = field.values;
    const std::size_t n = grid.size();
    if (u.size() != n)
        throw PreconditionError("spatial_rhs: one value per node required");
    require_positive_field(u);

    const auto w = grid.cell_weights();
    const auto bw = grid.boundary_weights();
    const double m = pp.m;

    std::vector<double> v(n), rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::pow(u[i], m);
    for (const Face& f : grid.faces()) {
        const double flux = f.coefficient * (v[f.right] - v[f.left]);
        rhs[f.left] += flux;
        rhs[f.right] -= flux;
    }

    std::vector<double> g(n, 0.0);
    if (pp.k != 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            if (bw[i] == 0.0)
                continue;
            g[i] = pp.k * std::pow(u[i], beta);
            // d(u^m)/dnu = m u^{m-1} g(u)
            rhs[i] += bw[i] * m * v[i] / u[i] * g[i];
        }
    }

    const double source = pp.a != 0.0 ? pp.a * integrate(grid, u, pp.p) : 0.0;
    std::vector<double> grad2;
    if (pp.c != 0.0)
        grad2 = grid.gradient_squared(u, g);
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = rhs[i] / w[i] + source;
        if (pp.b != 0.0)
            rhs[i] -= pp.b * std::pow(u[i], pp.q);
        if (pp.c != 0.0)
            rhs[i] -= pp.c * grad2[i] / (4.0 * u[i]);
    }
    return rhs;
}

double stable_time_step(const Field& field, const ProblemParams& pp, const SolverConfig& config,
                        const std::vector<double>& rhs)
{
    const SpatialGrid& grid = *field.grid;
    const double h = grid.min_spacing();
    double diffusivity = 0.0, rate = 0.0;
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        const double u = field.values[i];
        diffusivity = std::max(diffusivity, pp.m * std::pow(u, pp.m - 1.0));
        rate = std::max(rate, std::abs(rhs[i]) / u);
    }
    const int N = grid.geometry().dimension;
    double dt = config.cfl_safety * h * h / (2.0 * N * diffusivity + 1e-300);
    if (rate > 0.0)
        dt = std::min(dt, config.max_relative_change / rate);
    return std::min(dt, config.dt_max);
}

Field step(const Field& field, const ProblemParams& params, double beta, const SolverConfig& config)
{
    const auto f0 = spatial_rhs(field, params, beta);
    double dt = stable_time_step(field, params, config, f0);
    while (dt >= config.dt_floor) {
        if (auto next = midpoint(*field.grid, field.values, f0, dt, params, beta))
            return Field{field.grid, std::move(*next), field.time + dt};
        dt *= 0.5;
    }
    throw PositivityError("explicit step lost positivity above dt_floor");
}

double resolve_beta(const ProblemParams& params, int dimension, const SolverConfig& config)
{
    if (config.beta_override)
        return *config.beta_override;
    const auto verdict = classify(params, dimension);
    if (verdict.covered())
        return flux_exponent(params, verdict);
    if (params.k == 0.0)
        return 1.0;
    return flux_exponent(params, verdict);
}

SimulationSeries run(const InitialDatum& datum, const ProblemParams& params, const DomainGeometry& geom,
                     const SolverConfig& config)
{
    config.validate();
    const double beta = resolve_beta(params, geom.dimension, config);
    const SpatialGrid grid = build_grid(geom, config.resolution);
    auto u0 = sample_initial_field(datum, grid, FluxLaw{params.k, beta});
    return run_from(grid, std::move(u0), params, beta, config);
}

SimulationSeries run_from(const SpatialGrid& grid, std::vector<double> u, const ProblemParams& params,
                          double beta, const SolverConfig& config)
{
    config.validate();
    require_positive_field(u);

    SimulationSeries series;
    series.beta = beta;
    std::vector<double> checkpoints = config.checkpoints;
    std::sort(checkpoints.begin(), checkpoints.end());
    std::size_t next_checkpoint = 0;

    double t = 0.0;
    Sample current = measure(grid, u, params, t, 0.0);
    record(series, current);
    const double sup0 = current.sup_u;

    std::optional<Rosenbrock> ros;
    if (config.scheme == TimeScheme::rosenbrock2)
        ros.emplace(grid, params, beta);
    double dt_control = 0.0;
    double dt0 = 0.0;

    auto growth = [&] {
        return current.sup_u > config.blowup_sup_threshold || current.phi > config.blowup_phi_threshold ||
               !std::isfinite(current.phi);
    };
    auto floor_verdict = [&] {
        series.verdict = (growth() || current.sup_u >= 10.0 * sup0) ? Verdict::blowup
                                                                    : Verdict::dt_floor_without_growth;
        series.message = "step size fell below dt_floor";
    };

    bool finished = false;
    while (!finished) {
        if (t >= config.t_horizon) {
            series.verdict = Verdict::global_to_horizon;
            break;
        }
        if (series.steps >= config.max_steps) {
            series.verdict = Verdict::step_limit;
            series.message = "max_steps reached at t = " + std::to_string(t);
            break;
        }
        const auto f0 = rhs_of(grid, u, params, beta);
        const Field field{&grid, u, t};
        double dt = stable_time_step(field, params, config, f0);
        if (ros) {
            if (dt_control == 0.0)
                dt_control = dt;
            dt = std::min(dt_control, config.dt_max);
        }

        if (dt0 > 0.0 && growth() && dt < 1e-10 * dt0) {
            series.verdict = Verdict::blowup;
            series.message = "magnitude threshold crossed with collapsing step";
            break;
        }
        if (dt < config.dt_floor) {
            floor_verdict();
            break;
        }

        double target = config.t_horizon;
        while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] <= t)
            ++next_checkpoint;
        if (next_checkpoint < checkpoints.size())
            target = std::min(target, checkpoints[next_checkpoint]);

        // attempt, shrinking until accepted
        std::vector<double> next;
        bool accepted = false;
        while (!accepted) {
            const bool landing = dt >= target - t;
            const double h = landing ? target - t : dt;
            if (ros) {
                auto a = ros->attempt(u, f0, h, config);
                if (a.positive && a.error <= 1.0) {
                    next = std::move(a.u);
                    accepted = true;
                    const double factor = a.error > 0.0 ? 0.9 / std::sqrt(a.error) : 4.0;
                    dt_control = std::max(dt_control, h) * std::clamp(factor, 0.2, 4.0);
                    if (landing && h < dt)
                        dt_control = std::max(dt_control, dt);
                } else {
                    const double factor = (a.positive && std::isfinite(a.error)) ? 0.9 / std::sqrt(a.error) : 0.5;
                    dt = h * std::clamp(factor, 0.1, 0.5);
                    dt_control = dt;
                }
            } else if (auto m = midpoint(grid, u, f0, h, params, beta)) {
                next = std::move(*m);
                accepted = true;
            } else {
                dt = 0.5 * h;
            }
            if (accepted) {
                const double t_new = landing ? target : t + h;
                if (dt0 == 0.0)
                    dt0 = h;
                t = t_new;
                current = measure(grid, next, params, t, h);
                break;
            }
            ++series.rejected_steps;
            if (dt < config.dt_floor) {
                if (growth() || current.sup_u >= 10.0 * sup0) {
                    floor_verdict();
                } else {
                    series.verdict = ros ? Verdict::dt_floor_without_growth : Verdict::positivity_lost;
                    series.message = "no acceptable step above dt_floor";
                }
                finished = true;
                break;
            }
        }
        if (!accepted)
            break;

        u = std::move(next);
        ++series.steps;
        const bool at_checkpoint = next_checkpoint < checkpoints.size() && t == checkpoints[next_checkpoint];
        if (series.steps % config.output_stride == 0 || at_checkpoint)
            record(series, current);
        if (!std::isfinite(current.phi) || !std::isfinite(current.sup_u)) {
            series.verdict = Verdict::blowup;
            series.message = "field overflowed";
            break;
        }
    }

    record(series, current);
    series.final_values = std::move(u);

    if (series.verdict == Verdict::blowup) {
        try {
            const auto est = estimate_blowup_time(series);
            series.t_star_est = est.t_star;
            series.uncertainty = est.uncertainty;
        } catch (const EstimationError& e) {
            series.t_star_est = series.samples.back().t;
            series.uncertainty = 0.0;
            series.estimate_fallback = true;
            series.message += "; fit failed (" + std::string(e.what()) + "), last sample time used";
        }
    }
    return series;
}

} // namespace pmeb
