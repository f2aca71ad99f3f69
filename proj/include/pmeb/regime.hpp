#pragma once

#include <string>
#include <vector>

namespace pmeb {

/// Coefficients of u_t = Lap(u^m) + a int u^p - b u^q - c |grad sqrt(u)|^2
/// with boundary flux u_nu = g(u), 0 <= g(xi) <= k xi^beta.
struct ProblemParams {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    double k = 1.0;
    double m = 2.0;
    double p = 2.0;
    double q = 2.0;

    double s() const { return p - 1.0; }
    /// m (p - 1): the exponent of the blow-up functional phi = int u^{m(p-1)}.
    double ms() const { return m * (p - 1.0); }
};

/// beta = m(p-1)/4 - m + 2, the flux exponent of the blow-up bounds.
double blowup_flux_exponent(const ProblemParams& params);
/// beta = p - m + 1, the flux exponent of the global-existence criterion.
double global_flux_exponent(const ProblemParams& params);

struct RegimeVerdict {
    bool blowup_bound_3d = false;
    bool blowup_bound_2d = false;
    bool global_existence = false;
    /// Named hypothesis failures; empty exactly when some flag is set.
    std::vector<std::string> violated_conditions;

    bool covered() const { return blowup_bound_3d || blowup_bound_2d || global_existence; }
    bool blowup() const { return blowup_bound_3d || blowup_bound_2d; }
};

/// Strict inequalities are evaluated exactly as stated, with no tolerance band.
///
/// When nothing applies the reported failures belong to the family the
/// parameters point at: the blow-up hypotheses when p > q, the global ones
/// when p < q, and a single "p != q" entry when p = q.
RegimeVerdict classify(const ProblemParams& params, int dimension);

/// beta for the active regime; throws UsageError when no regime applies.
double flux_exponent(const ProblemParams& params, const RegimeVerdict& verdict);

std::string describe(const RegimeVerdict& verdict);

} // namespace pmeb
