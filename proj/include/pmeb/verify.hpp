#pragma once

#include "pmeb/bounds.hpp"
#include "pmeb/geometry.hpp"
#include "pmeb/pde.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace pmeb {

enum class InequalityKind { boundary_trace, interp_2d, interp_3d };

std::string_view to_string(InequalityKind kind);

enum class TestFunctionKind { constant, radial_polynomial, trig_mix };

std::string_view to_string(TestFunctionKind kind);

/// Positive C^1 test functions.
///
///   constant           V = amplitude
///   radial-polynomial  V = 1 + amplitude |x|^2
///   trig-mix           V = exp(sum_k a_k cos(w_k . xi + phase_k)), sum |a_k| <= 2,
///                      with xi = |x|^2 on radial grids (keeps V smooth at the origin)
///                      and the Cartesian coordinates otherwise; drawn from `seed`
struct TestFunction {
    TestFunctionKind kind = TestFunctionKind::constant;
    double amplitude = 1.0;
    std::uint64_t seed = 0;
    int modes = 3;

    std::vector<double> sample(const SpatialGrid& grid) const;
};

struct InequalityCase {
    InequalityKind inequality = InequalityKind::boundary_trace;
    double lambda = 1.0;
    std::optional<double> epsilon; ///< absent for the boundary trace
    TestFunction test_function;
    int resolution = 128;
};

struct InequalityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;                     ///< rhs - lhs at the case resolution
    std::array<double, 2> margin_refined{}; ///< margins at 2x and 4x resolution
    /// max(4/3 |margin - margin_refined[0]|, 1e-12 (|lhs| + |rhs|)): the
    /// Richardson error estimate of `margin` for a second-order quadrature.
    double tolerance = 0.0;
};

/// Evaluates both sides of one functional inequality on the grid ladder
/// resolution, 2 resolution, 4 resolution.
InequalityReport check_inequality(const InequalityCase& c, const DomainGeometry& geom);

struct SuiteEntry {
    InequalityCase c;
    DomainGeometry geometry;
    InequalityReport report;
    bool passed = false; ///< margin >= -10 tolerance
};

struct SuiteSummary {
    std::vector<SuiteEntry> entries;
    std::size_t failures() const;
};

/// Seeded sweep: boundary trace on interval, disk, ball and rectangle, the
/// N = 2 interpolation on disk and rectangle, the N = 3 one on the ball, each
/// with lambda in {1, 2, 3.5} and epsilon in {0.5, 1, 2}, `per_combo` trig-mix
/// functions per combination, plus the constant-on-ball equality case first.
/// Cases run concurrently; the result order is fixed.
SuiteSummary run_inequality_suite(std::uint64_t seed, int per_combo, int resolution);

struct EnvelopeReport {
    bool holds = true;
    double worst_ratio = 0.0; ///< max over sample pairs of the difference quotient over the envelope
    double tolerance = 0.0;
    std::size_t pairs = 0;
};

/// Checks (phi_{i+1} - phi_i) / (t_{i+1} - t_i) <= (c1 phi_i + c5 phi_i^n)(1 + tol)
/// with n = 3 (N = 3 ledger) or 2 (N = 2 ledger) and tol = 0.05 + h^2.
EnvelopeReport check_phi_envelope(const SimulationSeries& series, const ConstantsLedger& ledger,
                                  double grid_spacing = 0.0);

struct CeilingReport {
    bool holds = true;
    double worst_psi = 0.0;
    double ceiling = 0.0;
};

/// psi(t) <= C at every sample.
CeilingReport check_psi_ceiling(const SimulationSeries& series, const BoundResult& ceiling);

} // namespace pmeb
