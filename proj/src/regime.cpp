#include "pmeb/regime.hpp"

#include "pmeb/errors.hpp"

namespace pmeb {

double blowup_flux_exponent(const ProblemParams& params)
{
    return params.m * (params.p - 1.0) / 4.0 - params.m + 2.0;
}

double global_flux_exponent(const ProblemParams& params)
{
    return params.p - params.m + 1.0;
}

namespace {

void require_positive_coefficients(const ProblemParams& pp, std::vector<std::string>& failed)
{
    if (!(pp.a > 0.0))
        failed.emplace_back("a > 0");
    if (!(pp.b > 0.0))
        failed.emplace_back("b > 0");
    if (!(pp.c > 0.0))
        failed.emplace_back("c > 0");
    if (!(pp.k > 0.0))
        failed.emplace_back("k > 0");
}

std::vector<std::string> blowup_failures(const ProblemParams& pp, int dimension)
{
    std::vector<std::string> failed;
    if (dimension != 2 && dimension != 3)
        failed.emplace_back("dimension in {2, 3}");
    require_positive_coefficients(pp, failed);
    if (!(pp.q > 1.5))
        failed.emplace_back("q > 3/2");
    if (!(pp.p > pp.q))
        failed.emplace_back("p > q");
    if (pp.p >= 5.0) {
        if (!(pp.m > 2.0))
            failed.emplace_back("m in (2, inf) for p >= 5");
    } else if (pp.p > 1.5) {
        if (!(pp.m > 2.0 && pp.m < 8.0 / (5.0 - pp.p)))
            failed.emplace_back("m in (2, 8/(5-p)) for 3/2 < p < 5");
    } else {
        failed.emplace_back("p > 3/2");
    }
    if (!(blowup_flux_exponent(pp) > 0.0))
        failed.emplace_back("beta = m(p-1)/4 - m + 2 > 0");
    return failed;
}

std::vector<std::string> global_failures(const ProblemParams& pp)
{
    std::vector<std::string> failed;
    require_positive_coefficients(pp, failed);
    if (!(pp.q > pp.p))
        failed.emplace_back("q > p");
    if (!(pp.p > pp.m))
        failed.emplace_back("p > m");
    if (!(pp.m > 1.0))
        failed.emplace_back("m > 1");
    if (!(2.0 * pp.p < pp.m + pp.q))
        failed.emplace_back("2p < m + q");
    return failed;
}

} // namespace

RegimeVerdict classify(const ProblemParams& params, int dimension)
{
    RegimeVerdict verdict;
    const auto blow = blowup_failures(params, dimension);
    const auto glob = global_failures(params);
    verdict.blowup_bound_3d = blow.empty() && dimension == 3;
    verdict.blowup_bound_2d = blow.empty() && dimension == 2;
    verdict.global_existence = glob.empty() && dimension >= 1;
    if (verdict.covered())
        return verdict;

    if (params.p > params.q)
        verdict.violated_conditions = blow;
    else if (params.p < params.q)
        verdict.violated_conditions = glob;
    else
        verdict.violated_conditions = {"p != q"};
    if (verdict.violated_conditions.empty())
        verdict.violated_conditions = {"dimension >= 1"};
    return verdict;
}

double flux_exponent(const ProblemParams& params, const RegimeVerdict& verdict)
{
    if (verdict.blowup())
        return blowup_flux_exponent(params);
    if (verdict.global_existence)
        return global_flux_exponent(params);
    throw UsageError("flux_exponent: no regime applies (" + describe(verdict) + ")");
}

std::string describe(const RegimeVerdict& verdict)
{
    if (verdict.blowup_bound_3d)
        return "blow-up lower bound (N = 3)";
    if (verdict.blowup_bound_2d)
        return "blow-up lower bound (N = 2)";
    if (verdict.global_existence)
        return "global existence";
    std::string out = "not covered; violated:";
    for (const auto& v : verdict.violated_conditions)
        out += " [" + v + "]";
    return out;
}

} // namespace pmeb
