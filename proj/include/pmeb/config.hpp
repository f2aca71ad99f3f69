#pragma once

#include "pmeb/geometry.hpp"
#include "pmeb/initial_datum.hpp"
#include "pmeb/pde.hpp"
#include "pmeb/regime.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace pmeb {

enum class Mode { bound_only, simulate, validate, inequality_suite, sweep };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view name);

struct SweepConfig {
    std::string parameter = "b"; ///< one of a, b, c, k, m, p, q, amplitude
    double from = 0.5;
    double to = 4.0;
    int samples = 8;
    Mode mode = Mode::bound_only;
};

struct SuiteConfig {
    int per_combo = 3;
    int resolution = 128;
};

/// One experiment, read from a sectioned key = value file:
///
///   [domain]     shape, extent, extent_y
///   [params]     a, b, c, k, m, p, q
///   [datum]      kind, amplitude, width, offset, table, project, compatibility_tolerance
///   [solver]     every SolverConfig field by name
///   [experiment] mode, seed, eps1
///   [sweep]      parameter, from, to, samples, mode
///   [inequality] per_combo, resolution
struct ExperimentConfig {
    ShapeKind shape = ShapeKind::ball_radial;
    double extent_x = 1.0;
    double extent_y = 1.0;
    ProblemParams params;
    InitialDatum datum;
    SolverConfig solver;
    Mode mode = Mode::bound_only;
    std::uint64_t seed = 1;
    std::optional<double> eps1; ///< fixed eps1 instead of the optimizer
    SweepConfig sweep;
    SuiteConfig suite;

    DomainGeometry geometry() const;
};

/// Throws ConfigurationError: syntax errors name the line, value errors the
/// section and key. Comment lines start with ';'.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every field, resolved, in the same format; parse_config(render_config(c)) == c.
std::string render_config(const ExperimentConfig& config);

/// Shortest round-trip text for a double (17 significant digits).
std::string format_number(double x);

} // namespace pmeb
