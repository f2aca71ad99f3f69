#include "pmeb/config.hpp"

#include "pmeb/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace pmeb {

std::string_view to_string(Mode mode)
{
    switch (mode) {
    case Mode::bound_only: return "bound-only";
    case Mode::simulate: return "simulate";
    case Mode::validate: return "validate";
    case Mode::inequality_suite: return "inequality-suite";
    case Mode::sweep: return "sweep";
    }
    return "?";
}

Mode parse_mode(std::string_view name)
{
    for (Mode m : {Mode::bound_only, Mode::simulate, Mode::validate, Mode::inequality_suite, Mode::sweep})
        if (name == to_string(m))
            return m;
    throw ConfigurationError("unknown mode '" + std::string(name) + "'");
}

DomainGeometry ExperimentConfig::geometry() const
{
    return compute_geometry(DomainShape::make(shape, extent_x, extent_y));
}

std::string format_number(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

class Reader {
public:
    Reader(std::string_view source, std::string section, std::string key, std::string value)
        : source_(source), section_(std::move(section)), key_(std::move(key)), value_(std::move(value))
    {
    }

    [[noreturn]] void fail(const std::string& why) const
    {
        throw ConfigurationError(std::string(source_) + ": [" + section_ + "] " + key_ + ": " + why);
    }

    double real() const { return parse_real(value_); }

    double parse_real(const std::string& text) const
    {
        if (text == "inf")
            return std::numeric_limits<double>::infinity();
        errno = 0;
        char* end = nullptr;
        const double x = std::strtod(text.c_str(), &end);
        if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(x))
            fail("expected a finite real, got '" + text + "'");
        return x;
    }

    long integer() const
    {
        errno = 0;
        char* end = nullptr;
        const long x = std::strtol(value_.c_str(), &end, 10);
        if (value_.empty() || end != value_.c_str() + value_.size() || errno == ERANGE)
            fail("expected an integer, got '" + value_ + "'");
        return x;
    }

    bool boolean() const
    {
        if (value_ == "true" || value_ == "yes" || value_ == "1")
            return true;
        if (value_ == "false" || value_ == "no" || value_ == "0")
            return false;
        fail("expected true or false, got '" + value_ + "'");
    }

    std::vector<double> list() const
    {
        std::vector<double> out;
        std::stringstream ss(value_);
        std::string item;
        while (std::getline(ss, item, ','))
            if (auto t = trim(item); !t.empty())
                out.push_back(parse_real(t));
        return out;
    }

    std::vector<std::pair<double, double>> pairs() const
    {
        std::vector<std::pair<double, double>> out;
        std::stringstream ss(value_);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto t = trim(item);
            if (t.empty())
                continue;
            const auto colon = t.find(':');
            if (colon == std::string::npos)
                fail("table entries are r:u pairs, got '" + t + "'");
            out.emplace_back(parse_real(trim(t.substr(0, colon))), parse_real(trim(t.substr(colon + 1))));
        }
        return out;
    }

    template <class F>
    auto guarded(F&& f) const
    {
        try {
            return f(value_);
        } catch (const ConfigurationError& e) {
            fail(e.what());
        }
    }

    const std::string& text() const { return value_; }

private:
    std::string_view source_;
    std::string section_, key_, value_;
};

void assign(ExperimentConfig& c, const std::string& section, const std::string& key, const Reader& r)
{
    auto& pp = c.params;
    auto& d = c.datum;
    auto& s = c.solver;
    if (section == "domain") {
        if (key == "shape")
            c.shape = r.guarded([](const std::string& v) { return parse_shape_kind(v); });
        else if (key == "extent" || key == "extent_x")
            c.extent_x = r.real();
        else if (key == "extent_y")
            c.extent_y = r.real();
        else
            r.fail("unknown key");
    } else if (section == "params") {
        double* slot = key == "a"   ? &pp.a
                       : key == "b" ? &pp.b
                       : key == "c" ? &pp.c
                       : key == "k" ? &pp.k
                       : key == "m" ? &pp.m
                       : key == "p" ? &pp.p
                       : key == "q" ? &pp.q
                                    : nullptr;
        if (!slot)
            r.fail("unknown key");
        *slot = r.real();
    } else if (section == "datum") {
        if (key == "kind")
            d.kind = r.guarded([](const std::string& v) { return parse_datum_kind(v); });
        else if (key == "amplitude")
            d.amplitude = r.real();
        else if (key == "width")
            d.width = r.real();
        else if (key == "offset")
            d.offset = r.real();
        else if (key == "table")
            d.table = r.pairs();
        else if (key == "project")
            d.project = r.boolean();
        else if (key == "compatibility_tolerance")
            d.compatibility_tolerance = r.real();
        else
            r.fail("unknown key");
    } else if (section == "solver") {
        if (key == "resolution")
            s.resolution = static_cast<int>(r.integer());
        else if (key == "cfl_safety")
            s.cfl_safety = r.real();
        else if (key == "t_horizon")
            s.t_horizon = r.real();
        else if (key == "blowup_sup_threshold")
            s.blowup_sup_threshold = r.real();
        else if (key == "blowup_phi_threshold")
            s.blowup_phi_threshold = r.real();
        else if (key == "dt_floor")
            s.dt_floor = r.real();
        else if (key == "output_stride")
            s.output_stride = static_cast<int>(r.integer());
        else if (key == "scheme")
            s.scheme = r.guarded([](const std::string& v) { return parse_time_scheme(v); });
        else if (key == "max_relative_change")
            s.max_relative_change = r.real();
        else if (key == "rtol")
            s.rtol = r.real();
        else if (key == "atol")
            s.atol = r.real();
        else if (key == "dt_max")
            s.dt_max = r.real();
        else if (key == "max_steps")
            s.max_steps = r.integer();
        else if (key == "checkpoints")
            s.checkpoints = r.list();
        else if (key == "beta_override")
            s.beta_override = r.text() == "none" ? std::nullopt : std::optional<double>(r.real());
        else
            r.fail("unknown key");
    } else if (section == "experiment") {
        if (key == "mode")
            c.mode = r.guarded([](const std::string& v) { return parse_mode(v); });
        else if (key == "seed")
            c.seed = static_cast<std::uint64_t>(r.integer());
        else if (key == "eps1")
            c.eps1 = r.text() == "optimize" ? std::nullopt : std::optional<double>(r.real());
        else
            r.fail("unknown key");
    } else if (section == "sweep") {
        if (key == "parameter") {
            static const char* allowed[] = {"a", "b", "c", "k", "m", "p", "q", "amplitude"};
            if (std::find(std::begin(allowed), std::end(allowed), r.text()) == std::end(allowed))
                r.fail("sweepable parameters are a, b, c, k, m, p, q, amplitude");
            c.sweep.parameter = r.text();
        } else if (key == "from")
            c.sweep.from = r.real();
        else if (key == "to")
            c.sweep.to = r.real();
        else if (key == "samples")
            c.sweep.samples = static_cast<int>(r.integer());
        else if (key == "mode")
            c.sweep.mode = r.guarded([](const std::string& v) { return parse_mode(v); });
        else
            r.fail("unknown key");
    } else if (section == "inequality") {
        if (key == "per_combo")
            c.suite.per_combo = static_cast<int>(r.integer());
        else if (key == "resolution")
            c.suite.resolution = static_cast<int>(r.integer());
        else
            r.fail("unknown key");
    } else {
        r.fail("unknown section");
    }
}

} // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view source)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigurationError(std::string(source) + ":" + std::to_string(e.line()) + ": " + e.message());
    }

    ExperimentConfig c;
    for (const auto& [section, body] : tree) {
        if (body.empty())
            throw ConfigurationError(std::string(source) + ": key '" + section + "' outside any section");
        for (const auto& [key, value] : body)
            assign(c, section, key, Reader(source, section, key, trim(value.data())));
    }

    try {
        (void)c.geometry();
        c.solver.validate();
    } catch (const ConfigurationError& e) {
        throw ConfigurationError(std::string(source) + ": " + e.what());
    }
    if (c.sweep.samples < 1)
        throw ConfigurationError(std::string(source) + ": [sweep] samples must be positive");
    if (c.sweep.mode == Mode::sweep)
        throw ConfigurationError(std::string(source) + ": [sweep] mode cannot itself be sweep");
    if (c.suite.per_combo < 1)
        throw ConfigurationError(std::string(source) + ": [inequality] per_combo must be positive");
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigurationError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

std::string render_config(const ExperimentConfig& c)
{
    std::ostringstream os;
    auto kv = [&](const char* k, const std::string& v) { os << k << " = " << v << '\n'; };
    auto num = [&](const char* k, double v) { kv(k, format_number(v)); };

    os << "[domain]\n";
    kv("shape", std::string(to_string(c.shape)));
    num("extent", c.extent_x);
    num("extent_y", c.extent_y);

    os << "\n[params]\n";
    num("a", c.params.a);
    num("b", c.params.b);
    num("c", c.params.c);
    num("k", c.params.k);
    num("m", c.params.m);
    num("p", c.params.p);
    num("q", c.params.q);

    os << "\n[datum]\n";
    kv("kind", std::string(to_string(c.datum.kind)));
    num("amplitude", c.datum.amplitude);
    num("width", c.datum.width);
    num("offset", c.datum.offset);
    std::string table;
    for (const auto& [r, u] : c.datum.table)
        table += (table.empty() ? "" : ", ") + format_number(r) + ":" + format_number(u);
    kv("table", table);
    kv("project", c.datum.project ? "true" : "false");
    num("compatibility_tolerance", c.datum.compatibility_tolerance);

    const auto& s = c.solver;
    os << "\n[solver]\n";
    kv("resolution", std::to_string(s.resolution));
    num("cfl_safety", s.cfl_safety);
    num("t_horizon", s.t_horizon);
    num("blowup_sup_threshold", s.blowup_sup_threshold);
    num("blowup_phi_threshold", s.blowup_phi_threshold);
    num("dt_floor", s.dt_floor);
    kv("output_stride", std::to_string(s.output_stride));
    kv("scheme", std::string(to_string(s.scheme)));
    num("max_relative_change", s.max_relative_change);
    num("rtol", s.rtol);
    num("atol", s.atol);
    num("dt_max", s.dt_max);
    kv("max_steps", std::to_string(s.max_steps));
    std::string cps;
    for (double t : s.checkpoints)
        cps += (cps.empty() ? "" : ", ") + format_number(t);
    kv("checkpoints", cps);
    kv("beta_override", s.beta_override ? format_number(*s.beta_override) : "none");

    os << "\n[experiment]\n";
    kv("mode", std::string(to_string(c.mode)));
    kv("seed", std::to_string(c.seed));
    kv("eps1", c.eps1 ? format_number(*c.eps1) : "optimize");

    os << "\n[sweep]\n";
    kv("parameter", c.sweep.parameter);
    num("from", c.sweep.from);
    num("to", c.sweep.to);
    kv("samples", std::to_string(c.sweep.samples));
    kv("mode", std::string(to_string(c.sweep.mode)));

    os << "\n[inequality]\n";
    kv("per_combo", std::to_string(c.suite.per_combo));
    kv("resolution", std::to_string(c.suite.resolution));
    return os.str();
}

} // namespace pmeb
