#pragma once

#include "pmeb/geometry.hpp"
#include "pmeb/regime.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace pmeb {

enum class LedgerVariant { blowup_3d, blowup_2d, global };

std::string_view to_string(LedgerVariant variant);

/// The free parameters of the blow-up estimates. eps2 cancels the gradient
/// coefficient c4 and eps3 cancels the phi^{(ms+q-1)/ms} coefficient.
struct EpsilonChoice {
    double eps1 = 0.0;
    double eps2 = 0.0;
    double eps3 = 0.0;
    double eps1_max = 0.0; ///< 2 rho0 c / (5 m^2 s d k)
};

struct GlobalConstants {
    double sigma = 0.0;
    double alpha = 0.0;
    double epsilon = 0.0;
    double M1 = 0.0;
    double M2 = 0.0;
};

/// Every intermediate constant of one bound, with the choices that produced it.
///
/// For blowup_2d the c1..c5 fields hold the barred constants.
struct ConstantsLedger {
    LedgerVariant variant = LedgerVariant::blowup_3d;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double c4 = 0.0; ///< gradient coefficient recomputed at the stored epsilons
    double c5 = 0.0;
    std::optional<double> upsilon; ///< 4 c1 c3 - c2^2, blowup_2d only
    std::optional<GlobalConstants> global;
    std::optional<EpsilonChoice> epsilons;
};

enum class BoundFormula {
    closed_3d,
    closed_2d,
    quadrature_3d,
    quadrature_2d,
    closed_2d_upsilon_positive,
    closed_2d_upsilon_zero,
    global_ceiling,
};

std::string_view to_string(BoundFormula formula);

struct BoundResult {
    ConstantsLedger ledger;
    double phi0 = 0.0;  ///< int u0^{m(p-1)} for blow-up bounds, int u0^2 for the ceiling
    double value = 0.0; ///< lower bound T on t*, or the ceiling C on int u^2
    BoundFormula formula = BoundFormula::closed_3d;
    double error_estimate = 0.0; ///< quadrature variants only
};

double eps1_upper_limit(const ProblemParams& params, const DomainGeometry& geom);

/// Gradient coefficient c4 (or its N = 2 analogue) written out term by term,
/// for auditing a ledger's epsilon choice.
double gradient_coefficient(const ProblemParams& params, const DomainGeometry& geom, LedgerVariant variant,
                            double eps1, double eps2);

ConstantsLedger constants_3d(const ProblemParams& params, const DomainGeometry& geom, double eps1);
ConstantsLedger constants_2d(const ProblemParams& params, const DomainGeometry& geom, double eps1);

/// Blow-up time of phi' = c_lin phi + c_pow phi^exponent, phi(0) = phi0, exponent in {2, 3}.
double comparison_ode_blowup(double c_lin, double c_pow, int exponent, double phi0);

BoundResult lower_bound_3d(const ConstantsLedger& ledger, double phi0);
/// int_{phi0}^inf dtau / (c1 tau + c2 tau^{3/2} + c5 tau^3) by adaptive quadrature.
BoundResult lower_bound_3d_quadrature(const ConstantsLedger& ledger, double phi0);
BoundResult lower_bound_2d(const ConstantsLedger& ledger, double phi0);
/// int_{phi0}^inf dtau / (c1 tau + c2 tau^{3/2} + c3 tau^2): closed form when
/// upsilon >= 0, adaptive quadrature otherwise.
BoundResult lower_bound_2d_quadrature(const ConstantsLedger& ledger, double phi0);

/// The 100 equally spaced eps1 samples used for the unimodality check.
std::vector<double> eps1_search_grid(double eps1_max);

/// Maximizes the explicit bound over eps1 by golden-section search.
///
/// Falls back to the best grid sample plus a local golden-section refinement
/// when the grid samples are not unimodal. The returned bound is never below
/// any grid sample; ties go to the smaller eps1.
BoundResult optimize_eps1(const ProblemParams& params, const DomainGeometry& geom, double phi0,
                          LedgerVariant variant);

BoundResult global_ceiling(const ProblemParams& params, const DomainGeometry& geom, double psi0);

} // namespace pmeb
