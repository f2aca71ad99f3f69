#pragma once

#include "pmeb/pde.hpp"

namespace pmeb {

struct BlowupEstimate {
    double t_star = 0.0;
    double uncertainty = 0.0;
    double exponent = 0.0; ///< gamma in phi ~ A (t* - t)^{-gamma}
};

/// Fits phi(t) = A (t_c - t)^{-gamma} to the samples with phi > 1e3.
///
/// For each candidate t_c the fit is a linear regression of log phi on
/// log(t_c - t); t_c is scanned on a logarithmic grid above the last sample
/// time and refined by golden section. The estimate uses the last third of
/// the qualifying samples, the uncertainty is its distance to the last-half
/// estimate. Throws EstimationError with fewer than 8 qualifying samples,
/// a non-positive exponent, or a best t_c at the far end of the scan
/// (no blow-up signature).
BlowupEstimate estimate_blowup_time(const SimulationSeries& series);

} // namespace pmeb
