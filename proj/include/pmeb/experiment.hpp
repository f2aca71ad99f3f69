#pragma once

#include "pmeb/bounds.hpp"
#include "pmeb/config.hpp"
#include "pmeb/pde.hpp"
#include "pmeb/verify.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pmeb {

enum ExitStatus : int { exit_ok = 0, exit_configuration = 1, exit_bound_violated = 2 };

struct ExperimentOutcome {
    int status = exit_ok;
    std::string report; ///< the text written to report.txt
    RegimeVerdict verdict;
    std::vector<BoundResult> bounds;
    std::optional<SimulationSeries> series;
    std::optional<EnvelopeReport> envelope;
    std::optional<CeilingReport> ceiling;
    std::optional<SuiteSummary> suite;
    /// "yes", "no" or "untestable" after a validate run, empty otherwise.
    std::string bound_holds;
};

/// Runs one experiment and writes its artifacts into `out_dir`:
/// config.ini (the resolved configuration), report.txt, and depending on the
/// mode bounds.csv, series.csv, envelope.csv, inequalities.csv, sweep.csv.
/// Sweep samples run concurrently, each in out_dir/sample_NNN.
ExperimentOutcome run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// All bounds that apply to the configuration's regime, at the datum's phi(0) or psi(0).
std::vector<BoundResult> compute_bounds(const ExperimentConfig& config);

void write_bounds_csv(const std::filesystem::path& file, const std::vector<BoundResult>& bounds);
void write_series_csv(const std::filesystem::path& file, const SimulationSeries& series);
void write_inequalities_csv(const std::filesystem::path& file, const SuiteSummary& suite);

} // namespace pmeb
