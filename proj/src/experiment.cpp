#include "pmeb/experiment.hpp"

#include "pmeb/errors.hpp"

#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

namespace pmeb {

namespace {

namespace fs = std::filesystem;

std::string opt(const std::optional<double>& x)
{
    return x ? format_number(*x) : "";
}

void write_text(const fs::path& file, const std::string& text)
{
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw ConfigurationError("cannot write " + file.string());
    out << text;
}

struct Datum0 {
    double phi0;
    double psi0;
    double h;
};

Datum0 initial_functionals(const ExperimentConfig& c)
{
    const auto geom = c.geometry();
    const double beta = resolve_beta(c.params, geom.dimension, c.solver);
    const SpatialGrid grid = build_grid(geom, c.solver.resolution);
    const auto u0 = sample_initial_field(c.datum, grid, FluxLaw{c.params.k, beta});
    return {integrate(grid, u0, c.params.ms()), integrate(grid, u0, 2.0), grid.min_spacing()};
}

const BoundResult* find_bound(const std::vector<BoundResult>& bounds, BoundFormula f)
{
    for (const auto& b : bounds)
        if (b.formula == f)
            return &b;
    return nullptr;
}

const BoundResult* primary_bound(const std::vector<BoundResult>& bounds)
{
    for (BoundFormula f : {BoundFormula::closed_3d, BoundFormula::closed_2d, BoundFormula::global_ceiling})
        if (const auto* b = find_bound(bounds, f))
            return b;
    return nullptr;
}

void describe_bounds(std::ostream& os, const std::vector<BoundResult>& bounds)
{
    for (const auto& b : bounds) {
        os << "bound " << to_string(b.formula) << " (" << to_string(b.ledger.variant) << "): "
           << format_number(b.value) << "  at " << (b.formula == BoundFormula::global_ceiling ? "psi0" : "phi0")
           << " = " << format_number(b.phi0) << '\n';
        if (const auto& e = b.ledger.epsilons)
            os << "  eps1 = " << format_number(e->eps1) << ", eps2 = " << format_number(e->eps2)
               << ", eps3 = " << format_number(e->eps3) << ", eps1_max = " << format_number(e->eps1_max) << '\n';
        if (b.ledger.variant != LedgerVariant::global)
            os << "  c1 = " << format_number(b.ledger.c1) << ", c2 = " << format_number(b.ledger.c2)
               << ", c3 = " << format_number(b.ledger.c3) << ", c4 = " << format_number(b.ledger.c4)
               << ", c5 = " << format_number(b.ledger.c5) << '\n';
        if (const auto& g = b.ledger.global)
            os << "  sigma = " << format_number(g->sigma) << ", alpha = " << format_number(g->alpha)
               << ", eps = " << format_number(g->epsilon) << ", M1 = " << format_number(g->M1)
               << ", M2 = " << format_number(g->M2) << '\n';
    }
}

void set_parameter(ExperimentConfig& c, const std::string& name, double value)
{
    auto& pp = c.params;
    if (name == "a")
        pp.a = value;
    else if (name == "b")
        pp.b = value;
    else if (name == "c")
        pp.c = value;
    else if (name == "k")
        pp.k = value;
    else if (name == "m")
        pp.m = value;
    else if (name == "p")
        pp.p = value;
    else if (name == "q")
        pp.q = value;
    else if (name == "amplitude")
        c.datum.amplitude = value;
    else
        throw ConfigurationError("unknown sweep parameter '" + name + "'");
}

bool needs_regime(Mode mode)
{
    return mode == Mode::bound_only || mode == Mode::validate;
}

void run_validation(const ExperimentConfig& c, ExperimentOutcome& out, std::ostream& os, double h,
                    const fs::path& dir)
{
    const auto& series = *out.series;
    const BoundResult* bound = primary_bound(out.bounds);
    if (!bound)
        return;
    if (bound->formula == BoundFormula::global_ceiling) {
        out.ceiling = check_psi_ceiling(series, *bound);
        out.bound_holds = out.ceiling->holds ? "yes" : "no";
        os << "psi ceiling C = " << format_number(out.ceiling->ceiling)
           << ", max sampled psi = " << format_number(out.ceiling->worst_psi) << '\n';
    } else if (series.verdict != Verdict::blowup) {
        out.bound_holds = "untestable";
        os << "no blow-up observed (" << to_string(series.verdict) << "); bound untestable\n";
    } else {
        out.envelope = check_phi_envelope(series, bound->ledger, h);
        const bool ordered = series.t_star_est >= bound->value;
        out.bound_holds = (ordered && out.envelope->holds) ? "yes" : "no";
        os << "T = " << format_number(bound->value) << ", t_star_est = " << format_number(series.t_star_est)
           << " +/- " << format_number(series.uncertainty) << '\n';
        os << "t_star_est >= T: " << (ordered ? "yes" : "no") << '\n';
        os << "phi envelope: " << (out.envelope->holds ? "holds" : "violated")
           << ", worst ratio = " << format_number(out.envelope->worst_ratio)
           << ", tolerance = " << format_number(out.envelope->tolerance) << '\n';
        std::ostringstream csv;
        csv << "holds,worst_ratio,tolerance,pairs\n"
            << (out.envelope->holds ? "true" : "false") << ',' << format_number(out.envelope->worst_ratio) << ','
            << format_number(out.envelope->tolerance) << ',' << out.envelope->pairs << '\n';
        write_text(dir / "envelope.csv", csv.str());
    }
    os << "bound holds: " << out.bound_holds << '\n';
    (void)c;
    if (out.bound_holds == "no")
        out.status = exit_bound_violated;
}

ExperimentOutcome run_sweep(const ExperimentConfig& c, const fs::path& dir, std::ostream& os)
{
    ExperimentOutcome out;
    const int n = c.sweep.samples;
    std::vector<ExperimentConfig> subs;
    std::vector<double> values;
    for (int i = 0; i < n; ++i) {
        const double v = n == 1 ? c.sweep.from : c.sweep.from + (c.sweep.to - c.sweep.from) * i / (n - 1);
        ExperimentConfig sub = c;
        sub.mode = c.sweep.mode;
        set_parameter(sub, c.sweep.parameter, v);
        subs.push_back(std::move(sub));
        values.push_back(v);
    }
    std::vector<std::future<ExperimentOutcome>> jobs;
    for (int i = 0; i < n; ++i) {
        std::ostringstream name;
        name << "sample_" << std::setw(3) << std::setfill('0') << i;
        jobs.push_back(std::async(std::launch::async, [&sub = subs[static_cast<std::size_t>(i)], d = dir / name.str()] {
            return run_experiment(sub, d);
        }));
    }

    std::ostringstream csv;
    csv << "index,parameter,value,status,regime,formula,bound,t_star_est,verdict,bound_holds\n";
    std::vector<double> Ts;
    for (int i = 0; i < n; ++i) {
        const ExperimentOutcome sub = jobs[static_cast<std::size_t>(i)].get();
        const BoundResult* b = primary_bound(sub.bounds);
        csv << i << ',' << c.sweep.parameter << ',' << format_number(values[static_cast<std::size_t>(i)]) << ','
            << sub.status << ",\"" << describe(sub.verdict) << "\"," << (b ? to_string(b->formula) : "") << ','
            << (b ? format_number(b->value) : "") << ','
            << (sub.series && sub.series->verdict == Verdict::blowup ? format_number(sub.series->t_star_est) : "")
            << ',' << (sub.series ? to_string(sub.series->verdict) : "") << ',' << sub.bound_holds << '\n';
        if (b)
            Ts.push_back(b->value);
        if (sub.status == exit_bound_violated)
            out.status = exit_bound_violated;
        else if (sub.status != exit_ok && out.status == exit_ok)
            out.status = sub.status;
    }
    write_text(dir / "sweep.csv", csv.str());

    bool nondecreasing = true;
    for (std::size_t i = 1; i < Ts.size(); ++i)
        nondecreasing = nondecreasing && Ts[i] >= Ts[i - 1];
    os << "sweep over " << c.sweep.parameter << " in [" << format_number(c.sweep.from) << ", "
       << format_number(c.sweep.to) << "], " << n << " samples, mode " << to_string(c.sweep.mode) << '\n';
    os << "bound column nondecreasing in " << c.sweep.parameter << ": " << (nondecreasing ? "yes" : "no")
       << " (reported, not enforced)\n";
    return out;
}

} // namespace

std::vector<BoundResult> compute_bounds(const ExperimentConfig& c)
{
    const auto geom = c.geometry();
    const auto verdict = classify(c.params, geom.dimension);
    if (!verdict.covered())
        throw UsageError("no bound applies: " + describe(verdict));
    const Datum0 d0 = initial_functionals(c);

    std::vector<BoundResult> out;
    if (verdict.blowup_bound_3d) {
        const BoundResult closed = c.eps1 ? lower_bound_3d(constants_3d(c.params, geom, *c.eps1), d0.phi0)
                                          : optimize_eps1(c.params, geom, d0.phi0, LedgerVariant::blowup_3d);
        out.push_back(closed);
        out.push_back(lower_bound_3d_quadrature(closed.ledger, d0.phi0));
    } else if (verdict.blowup_bound_2d) {
        const BoundResult closed = c.eps1 ? lower_bound_2d(constants_2d(c.params, geom, *c.eps1), d0.phi0)
                                          : optimize_eps1(c.params, geom, d0.phi0, LedgerVariant::blowup_2d);
        out.push_back(closed);
        out.push_back(lower_bound_2d_quadrature(closed.ledger, d0.phi0));
    } else {
        out.push_back(global_ceiling(c.params, geom, d0.psi0));
    }
    return out;
}

void write_bounds_csv(const fs::path& file, const std::vector<BoundResult>& bounds)
{
    std::ostringstream os;
    os << "variant,formula,phi0,value,error_estimate,c1,c2,c3,c4,c5,upsilon,eps1,eps2,eps3,eps1_max,"
          "sigma,alpha,eps_global,M1,M2\n";
    for (const auto& b : bounds) {
        const auto& L = b.ledger;
        const bool blow = L.variant != LedgerVariant::global;
        auto blowup_field = [&](double x) { return blow ? format_number(x) : std::string(); };
        os << to_string(L.variant) << ',' << to_string(b.formula) << ',' << format_number(b.phi0) << ','
           << format_number(b.value) << ',' << format_number(b.error_estimate) << ',' << blowup_field(L.c1) << ','
           << blowup_field(L.c2) << ',' << blowup_field(L.c3) << ',' << blowup_field(L.c4) << ','
           << blowup_field(L.c5) << ',' << opt(L.upsilon) << ',';
        if (const auto& e = L.epsilons)
            os << format_number(e->eps1) << ',' << format_number(e->eps2) << ',' << format_number(e->eps3) << ','
               << format_number(e->eps1_max) << ',';
        else
            os << ",,,,";
        if (const auto& g = L.global)
            os << format_number(g->sigma) << ',' << format_number(g->alpha) << ',' << format_number(g->epsilon)
               << ',' << format_number(g->M1) << ',' << format_number(g->M2);
        else
            os << ",,,,";
        os << '\n';
    }
    write_text(file, os.str());
}

void write_series_csv(const fs::path& file, const SimulationSeries& series)
{
    std::ostringstream os;
    os << "t,sup_u,phi,psi,dt\n";
    for (const auto& s : series.samples)
        os << format_number(s.t) << ',' << format_number(s.sup_u) << ',' << format_number(s.phi) << ','
           << format_number(s.psi) << ',' << format_number(s.dt) << '\n';
    write_text(file, os.str());
}

void write_inequalities_csv(const fs::path& file, const SuiteSummary& suite)
{
    std::ostringstream os;
    os << "inequality,shape,lambda,epsilon,function,seed,resolution,lhs,rhs,margin,margin_2x,margin_4x,"
          "tolerance,passed\n";
    for (const auto& e : suite.entries) {
        const auto& r = e.report;
        os << to_string(e.c.inequality) << ',' << to_string(e.geometry.shape.kind()) << ','
           << format_number(e.c.lambda) << ',' << opt(e.c.epsilon) << ',' << to_string(e.c.test_function.kind)
           << ',' << e.c.test_function.seed << ',' << e.c.resolution << ',' << format_number(r.lhs) << ','
           << format_number(r.rhs) << ',' << format_number(r.margin) << ',' << format_number(r.margin_refined[0])
           << ',' << format_number(r.margin_refined[1]) << ',' << format_number(r.tolerance) << ','
           << (e.passed ? "true" : "false") << '\n';
    }
    write_text(file, os.str());
}

ExperimentOutcome run_experiment(const ExperimentConfig& c, const fs::path& dir)
{
    fs::create_directories(dir);
    write_text(dir / "config.ini", render_config(c));

    std::ostringstream os;
    os << "mode: " << to_string(c.mode) << '\n';
    const auto geom = c.geometry();
    os << "domain: " << to_string(geom.shape.kind()) << ", N = " << geom.dimension
       << ", rho0 = " << format_number(geom.rho0) << ", d = " << format_number(geom.d)
       << ", |Omega| = " << format_number(geom.volume) << ", |dOmega| = " << format_number(geom.surface) << '\n';

    ExperimentOutcome out;
    if (c.mode == Mode::sweep) {
        out = run_sweep(c, dir, os);
        out.report = os.str();
        write_text(dir / "report.txt", out.report);
        return out;
    }

    out.verdict = classify(c.params, geom.dimension);
    os << "regime: " << describe(out.verdict) << '\n';
    try {
        if (needs_regime(c.mode) && !out.verdict.covered()) {
            out.status = exit_configuration;
            os << "error: no bound applies to these parameters\n";
            out.report = os.str();
            write_text(dir / "report.txt", out.report);
            return out;
        }

        if (needs_regime(c.mode)) {
            out.bounds = compute_bounds(c);
            describe_bounds(os, out.bounds);
            write_bounds_csv(dir / "bounds.csv", out.bounds);
        }

        if (c.mode == Mode::simulate || c.mode == Mode::validate) {
            out.series = run(c.datum, c.params, geom, c.solver);
            const auto& s = *out.series;
            os << "simulation: " << to_string(s.verdict) << " after " << s.steps << " steps (" << s.rejected_steps
               << " rejected), t = " << format_number(s.samples.back().t) << ", beta = " << format_number(s.beta)
               << '\n';
            if (!s.message.empty())
                os << "  " << s.message << '\n';
            if (s.verdict == Verdict::blowup)
                os << "t_star_est = " << format_number(s.t_star_est) << " +/- " << format_number(s.uncertainty)
                   << (s.estimate_fallback ? " (last sample time)" : "") << '\n';
            write_series_csv(dir / "series.csv", s);
            if (c.mode == Mode::validate) {
                const SpatialGrid grid = build_grid(geom, c.solver.resolution);
                run_validation(c, out, os, grid.min_spacing(), dir);
            }
        }

        if (c.mode == Mode::inequality_suite) {
            out.suite = run_inequality_suite(c.seed, c.suite.per_combo, c.suite.resolution);
            write_inequalities_csv(dir / "inequalities.csv", *out.suite);
            os << "inequality cases: " << out.suite->entries.size() << ", failed: " << out.suite->failures()
               << '\n';
        }
    } catch (const ConfigurationError& e) {
        out.status = exit_configuration;
        os << "configuration error: " << e.what() << '\n';
    } catch (const UsageError& e) {
        out.status = exit_configuration;
        os << "usage error: " << e.what() << '\n';
    } catch (const InfeasibilityError& e) {
        out.status = exit_configuration;
        os << "infeasible: " << e.what() << '\n';
    } catch (const PreconditionError& e) {
        out.status = exit_configuration;
        os << "precondition failed: " << e.what() << '\n';
    }

    out.report = os.str();
    write_text(dir / "report.txt", out.report);
    return out;
}

} // namespace pmeb
