#pragma once

#include "pmeb/geometry.hpp"
#include "pmeb/initial_datum.hpp"
#include "pmeb/regime.hpp"

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pmeb {

enum class TimeScheme {
    explicit_rk2, ///< midpoint rule under the porous-medium CFL limit
    rosenbrock2,  ///< two-stage linearly implicit scheme with error control
};

std::string_view to_string(TimeScheme scheme);
TimeScheme parse_time_scheme(std::string_view name);

struct SolverConfig {
    int resolution = 64;
    double cfl_safety = 0.45;
    double t_horizon = 1.0;
    double blowup_sup_threshold = 1e8;
    double blowup_phi_threshold = 1e12;
    double dt_floor = 1e-14;
    int output_stride = 1;

    TimeScheme scheme = TimeScheme::explicit_rk2;
    /// Explicit steps are also limited so that no nodal value moves by more than this fraction.
    double max_relative_change = 0.2;
    /// Error control of the implicit scheme.
    double rtol = 1e-5;
    double atol = 1e-9;
    double dt_max = std::numeric_limits<double>::infinity();
    long max_steps = 50'000'000;
    /// Times the stepper lands on exactly and records.
    std::vector<double> checkpoints;
    /// Replaces the regime's beta; needed only outside every regime with k > 0.
    std::optional<double> beta_override;

    void validate() const;
};

struct Field {
    const SpatialGrid* grid = nullptr;
    std::vector<double> values;
    double time = 0.0;
};

/// Semi-discrete right-hand side of
///   u_t = Lap(u^m) + a int u^p - b u^q - c |grad sqrt(u)|^2,   du/dnu = k u^beta.
///
/// Lap(u^m) is the conservative face sum of the grid divided by the cell
/// weight; the boundary flux d(u^m)/dnu = m u^{m-1} k u^beta enters the
/// boundary cells through their boundary weights.
std::vector<double> spatial_rhs(const Field& field, const ProblemParams& params, double beta);

/// Largest explicit step allowed by the CFL limit and the relative-change cap.
double stable_time_step(const Field& field, const ProblemParams& params, const SolverConfig& config,
                        const std::vector<double>& rhs);

/// One explicit midpoint step at the stable step size, halved until positivity holds.
Field step(const Field& field, const ProblemParams& params, double beta, const SolverConfig& config);

struct Sample {
    double t = 0.0;
    double sup_u = 0.0;
    double phi = 0.0; ///< int u^{m(p-1)}
    double psi = 0.0; ///< int u^2
    double dt = 0.0;
};

enum class Verdict { blowup, global_to_horizon, positivity_lost, dt_floor_without_growth, step_limit };

std::string_view to_string(Verdict verdict);

struct SimulationSeries {
    std::vector<Sample> samples;
    Verdict verdict = Verdict::global_to_horizon;
    double t_star_est = std::numeric_limits<double>::quiet_NaN();
    double uncertainty = std::numeric_limits<double>::quiet_NaN();
    /// True when the power-law fit failed and t_star_est is the last sample time.
    bool estimate_fallback = false;
    long steps = 0;
    long rejected_steps = 0;
    double beta = 0.0;
    std::string message;
    std::vector<double> final_values;
};

/// beta from the regime, or the override, or 1 when k = 0 makes it irrelevant.
double resolve_beta(const ProblemParams& params, int dimension, const SolverConfig& config);

SimulationSeries run(const InitialDatum& datum, const ProblemParams& params, const DomainGeometry& geom,
                     const SolverConfig& config);

/// Same as run() but from explicit node values on a prebuilt grid.
SimulationSeries run_from(const SpatialGrid& grid, std::vector<double> u0, const ProblemParams& params,
                          double beta, const SolverConfig& config);

} // namespace pmeb
