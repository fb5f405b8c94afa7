#include "plapcert/problem.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "plapcert/numerics.hpp"

namespace plapcert {

namespace pt = boost::property_tree;

const char* to_string(SingularEnd end) {
    switch (end) {
        case SingularEnd::None: return "none";
        case SingularEnd::Left: return "left";
        case SingularEnd::Right: return "right";
        case SingularEnd::Both: return "both";
    }
    return "none";
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::SampledPass: return "sampled-pass";
    }
    return "fail";
}

namespace {

Expr parse_field(const std::string& key, const std::string& text, std::initializer_list<Var> allowed) {
    Expr e;
    try {
        e = parse_expression(text);
    } catch (const ParseError& err) {
        throw ConfigError(key + ": " + err.what());
    }
    for (Var var : e.free_variables()) {
        if (std::find(allowed.begin(), allowed.end(), var) == allowed.end()) {
            throw ConfigError(key + ": variable '" + var_name(var) + "' is not allowed here");
        }
    }
    return e;
}

void require(bool condition, const std::string& message) {
    if (!condition) {
        throw ConfigError(message);
    }
}

}  // namespace

ProblemSpec::ProblemSpec(const Terms& terms) : terms_(terms) {
    require(std::isfinite(terms.p1) && terms.p1 > 1.0, "problem.p1 must be > 1");
    require(std::isfinite(terms.p2) && terms.p2 > 1.0, "problem.p2 must be > 1");
    require(terms.b1 > 0.0 && terms.b1 < 1.0, "cone.b1 must lie in (0,1)");
    require(terms.a2 > 0.0 && terms.a2 < terms.b2 && terms.b2 < 1.0,
            "cone: requires 0 < a2 < b2 < 1");
    for (auto [name, h] : {std::pair{"robin.h11", terms.h11}, std::pair{"robin.h12", terms.h12},
                           std::pair{"robin.h21", terms.h21}, std::pair{"robin.h22", terms.h22}}) {
        require(std::isfinite(h) && h >= 0.0, std::string(name) + " must be >= 0");
    }
    require(terms.h11 <= terms.h12, "robin: requires h11 <= h12");
    require(terms.h21 <= terms.h22, "robin: requires h21 <= h22");
    g1_ = parse_field("problem.g1", terms.g1, {Var::T});
    g2_ = parse_field("problem.g2", terms.g2, {Var::T});
    f1_ = parse_field("problem.f1", terms.f1, {Var::T, Var::U, Var::V});
    f2_ = parse_field("problem.f2", terms.f2, {Var::T, Var::U, Var::V});
    B1_ = parse_field("problem.B1", terms.B1, {Var::W});
    B2_ = parse_field("problem.B2", terms.B2, {Var::W});
}

double ProblemSpec::c(int i) const {
    return i == 1 ? 1.0 - terms_.b1 : std::min(terms_.a2, 1.0 - terms_.b2);
}

// ---------------------------------------------------------------------------

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"problem", {"p1", "p2", "g1", "g2", "f1", "f2", "B1", "B2"}},
        {"cone", {"b1", "a2", "b2"}},
        {"robin", {"h11", "h12", "h21", "h22"}},
        {"numerics",
         {"n", "quad_tol", "root_tol", "min_tol", "scan_points", "samples", "sample_radius",
          "sandwich_samples", "growth_resolution", "g1_singular", "g2_singular"}},
    };
    return keys;
}

class ConfigReader {
public:
    explicit ConfigReader(const pt::ptree& tree) : tree_(tree) {}

    std::string text(const std::string& section, const std::string& key) const {
        const auto value = tree_.get_optional<std::string>(pt::ptree::path_type(section + "." + key, '.'));
        if (!value) {
            throw ConfigError("missing key " + section + "." + key);
        }
        std::string s = *value;
        if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
            s = s.substr(1, s.size() - 2);
        }
        return s;
    }

    bool has(const std::string& section, const std::string& key) const {
        return static_cast<bool>(
            tree_.get_optional<std::string>(pt::ptree::path_type(section + "." + key, '.')));
    }

    double real(const std::string& section, const std::string& key) const {
        try {
            return parse_constant(text(section, key));
        } catch (const ParseError& err) {
            throw ConfigError(section + "." + key + ": " + err.what());
        } catch (const EvalError& err) {
            throw ConfigError(section + "." + key + ": " + err.what());
        }
    }

    std::size_t count(const std::string& section, const std::string& key) const {
        const double x = real(section, key);
        if (!(x >= 1.0) || x != std::floor(x) || x > 1e9) {
            throw ConfigError(section + "." + key + ": expected a positive integer");
        }
        return static_cast<std::size_t>(x);
    }

    SingularEnd singular(const std::string& section, const std::string& key) const {
        const std::string s = text(section, key);
        if (s == "none") return SingularEnd::None;
        if (s == "left") return SingularEnd::Left;
        if (s == "right") return SingularEnd::Right;
        if (s == "both") return SingularEnd::Both;
        throw ConfigError(section + "." + key + ": expected none|left|right|both");
    }

private:
    const pt::ptree& tree_;
};

}  // namespace

ProblemConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& err) {
        throw ConfigError("config syntax error at line " + std::to_string(err.line()) + ": " +
                          err.message());
    }
    const auto& known = known_keys();
    for (const auto& [section, child] : tree) {
        const auto it = known.find(section);
        if (child.empty() || it == known.end()) {
            throw ConfigError("unknown section or top-level key '" + section + "'");
        }
        for (const auto& entry : child) {
            if (!it->second.count(entry.first)) {
                throw ConfigError("unknown key " + section + "." + entry.first);
            }
        }
    }

    const ConfigReader cfg(tree);
    ProblemSpec::Terms terms{};
    terms.p1 = cfg.real("problem", "p1");
    terms.p2 = cfg.real("problem", "p2");
    terms.g1 = cfg.text("problem", "g1");
    terms.g2 = cfg.text("problem", "g2");
    terms.f1 = cfg.text("problem", "f1");
    terms.f2 = cfg.text("problem", "f2");
    terms.B1 = cfg.text("problem", "B1");
    terms.B2 = cfg.text("problem", "B2");
    terms.b1 = cfg.real("cone", "b1");
    terms.a2 = cfg.real("cone", "a2");
    terms.b2 = cfg.real("cone", "b2");
    terms.h11 = cfg.real("robin", "h11");
    terms.h12 = cfg.real("robin", "h12");
    terms.h21 = cfg.real("robin", "h21");
    terms.h22 = cfg.real("robin", "h22");

    NumericsSettings numerics;
    const std::string sec = "numerics";
    if (cfg.has(sec, "n")) numerics.n = cfg.count(sec, "n");
    if (cfg.has(sec, "quad_tol")) numerics.quad_tol = cfg.real(sec, "quad_tol");
    if (cfg.has(sec, "root_tol")) numerics.root_tol = cfg.real(sec, "root_tol");
    if (cfg.has(sec, "min_tol")) numerics.min_tol = cfg.real(sec, "min_tol");
    if (cfg.has(sec, "scan_points")) numerics.scan_points = cfg.count(sec, "scan_points");
    if (cfg.has(sec, "samples")) numerics.samples = cfg.count(sec, "samples");
    if (cfg.has(sec, "sample_radius")) numerics.sample_radius = cfg.real(sec, "sample_radius");
    if (cfg.has(sec, "sandwich_samples")) numerics.sandwich_samples = cfg.count(sec, "sandwich_samples");
    if (cfg.has(sec, "growth_resolution")) numerics.growth_resolution = cfg.count(sec, "growth_resolution");
    if (cfg.has(sec, "g1_singular")) numerics.g1_singular = cfg.singular(sec, "g1_singular");
    if (cfg.has(sec, "g2_singular")) numerics.g2_singular = cfg.singular(sec, "g2_singular");
    for (double tol : {numerics.quad_tol, numerics.root_tol, numerics.min_tol}) {
        require(tol > 0.0, "numerics: tolerances must be positive");
    }
    require(numerics.sample_radius > 0.0, "numerics.sample_radius must be positive");
    require(numerics.samples >= 2 && numerics.growth_resolution >= 2,
            "numerics: lattice sizes must be at least 2");

    return ProblemConfig{ProblemSpec(terms), numerics};
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

const std::string& builtin_example_config() {
    static const std::string text = R"([problem]
p1 = 3/2
p2 = 3
g1 = 1
g2 = 1
f1 = u^4/16 + t^3*v^3/16 + 27/50
f2 = sqrt(t*u) + 10*v^9
B1 = piecewise((w <= 0, w), (w <= 1, w/2), (else, w/6 + 1/3))
B2 = piecewise((w <= 1, w/3), (else, w/9 + 2/9))

[cone]
b1 = 2/3
a2 = 1/4
b2 = 3/4

[robin]
h11 = 1/6
h12 = 1/2
h21 = 1/9
h22 = 1/3
)";
    return text;
}

// ---------------------------------------------------------------------------

bool ValidationReport::ok() const {
    return std::none_of(conditions.begin(), conditions.end(),
                        [](const ConditionCheck& c) { return c.verdict == Verdict::Fail; });
}

namespace {

void fail(ConditionCheck& check, std::string detail, Witness witness) {
    check.verdict = Verdict::Fail;
    check.detail = std::move(detail);
    check.witness = witness;
}

ConditionCheck check_nonnegative_f(const ProblemSpec& spec, std::size_t samples, double radius) {
    ConditionCheck check{"C1", Verdict::SampledPass, "", std::nullopt, samples, {}};
    const double denom = static_cast<double>(samples - 1);
    for (int i = 1; i <= 2; ++i) {
        for (std::size_t a = 0; a < samples; ++a) {
            const double t = static_cast<double>(a) / denom;
            for (std::size_t b = 0; b < samples; ++b) {
                const double u = radius * static_cast<double>(b) / denom;
                for (std::size_t c = 0; c < samples; ++c) {
                    const double v = radius * static_cast<double>(c) / denom;
                    const std::string which = "f" + std::to_string(i);
                    double value;
                    try {
                        value = spec.f(i, t, u, v);
                    } catch (const EvalError& err) {
                        fail(check, which + " evaluation failed: " + err.what(), Witness{t, u, v, {}});
                        return check;
                    }
                    if (!std::isfinite(value) || value < 0.0) {
                        fail(check, which + " is negative or not finite", Witness{t, u, v, {}});
                        return check;
                    }
                }
            }
        }
    }
    check.detail = "f1, f2 finite and nonnegative on the sampled lattice";
    return check;
}

/// Sign and finiteness of g_i at interior sample points; endpoint values may
/// be singular.
bool check_g_sign(const ProblemSpec& spec, int i, std::size_t points, ConditionCheck& check) {
    for (std::size_t k = 0; k <= points; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(points);
        double value;
        try {
            value = spec.g(i, t);
        } catch (const EvalError& err) {
            if (k == 0 || k == points) continue;
            fail(check, "g" + std::to_string(i) + " evaluation failed: " + err.what(), Witness{t, {}, {}, {}});
            return false;
        }
        if ((k == 0 || k == points) && !std::isfinite(value)) continue;
        if (!std::isfinite(value) || value < 0.0) {
            fail(check, "g" + std::to_string(i) + " is negative or not finite", Witness{t, {}, {}, {}});
            return false;
        }
    }
    return true;
}

double outer_integral(const std::function<double(double)>& integrand, double a, double b, double tol,
                      bool cluster_left, bool cluster_right) {
    QuadratureOptions options;
    options.tol = tol;
    options.cluster_left = cluster_left;
    options.cluster_right = cluster_right;
    return integrate_adaptive(integrand, a, b, options).value;
}

ConditionCheck check_c2(const ProblemSpec& spec, const NumericsSettings& numerics) {
    ConditionCheck check{"C2", Verdict::Pass, "", std::nullopt, numerics.samples * 16, {}};
    if (!check_g_sign(spec, 1, check.resolution, check)) {
        return check;
    }
    try {
        const Primitive G([&spec](double t) { return spec.g(1, t); }, 0.0, 1.0, 256,
                          numerics.quad_tol * 1e-2);
        const SignedPower inv(1.0 / (spec.p(1) - 1.0));
        const double value = outer_integral([&](double s) { return inv(G(s)); }, 0.0, 1.0,
                                            numerics.quad_tol, true, false);
        check.integrals.emplace_back("C2.integral", value);
        if (!(value > 0.0) || !std::isfinite(value)) {
            fail(check, "defining integral is not positive", Witness{});
            return check;
        }
        check.detail = "0 < integral < infinity";
    } catch (const QuadratureError& err) {
        fail(check, std::string("defining integral did not converge: ") + err.what(), Witness{});
    }
    return check;
}

ConditionCheck check_c3(const ProblemSpec& spec, const NumericsSettings& numerics) {
    ConditionCheck check{"C3", Verdict::Pass, "", std::nullopt, numerics.samples * 16, {}};
    if (!check_g_sign(spec, 2, check.resolution, check)) {
        return check;
    }
    std::optional<Primitive> G;
    try {
        G.emplace([&spec](double t) { return spec.g(2, t); }, 0.0, 1.0, 256, numerics.quad_tol * 1e-2);
    } catch (const QuadratureError& err) {
        fail(check, std::string("g2 is not integrable: ") + err.what(), Witness{});
        return check;
    }
    const SignedPower inv(1.0 / (spec.p(2) - 1.0));
    const double g_half = (*G)(0.5);
    try {
        const double left = outer_integral([&](double s) { return inv(g_half - (*G)(s)); }, 0.0, 0.5,
                                           numerics.quad_tol, false, true);
        const double right = outer_integral([&](double s) { return inv((*G)(s) - g_half); }, 0.5, 1.0,
                                            numerics.quad_tol, true, false);
        const double value = left + right;
        check.integrals.emplace_back("C3.split_integral", value);
        if (!(value > 0.0) || !std::isfinite(value)) {
            fail(check, "split defining integral is not positive", Witness{});
            return check;
        }
        check.detail = "0 < split integral < infinity";
    } catch (const QuadratureError& err) {
        fail(check, std::string("split defining integral did not converge: ") + err.what(), Witness{});
        return check;
    }
    const double g_one = G->total();
    try {
        const double full = outer_integral([&](double s) { return inv(g_one - (*G)(s)); }, 0.0, 1.0,
                                           numerics.quad_tol, false, true);
        check.integrals.emplace_back("C3.full_integral", full);
        check.detail += "; full-interval integral finite";
    } catch (const QuadratureError&) {
        check.detail += "; full-interval integral diverges";
    }
    return check;
}

ConditionCheck check_sandwich(const ProblemSpec& spec, const NumericsSettings& numerics) {
    const std::size_t total = std::max<std::size_t>(numerics.sandwich_samples, 4);
    ConditionCheck check{"C4", Verdict::SampledPass, "", std::nullopt, total, {}};
    const double radius = numerics.sample_radius;
    std::vector<double> ws{0.0};
    const std::size_t half = total / 2;
    for (std::size_t k = 0; k < half; ++k) {
        ws.push_back(radius * std::pow(10.0, -9.0 * (1.0 - static_cast<double>(k) / static_cast<double>(half - 1))));
    }
    for (std::size_t k = 1; k <= total - half; ++k) {
        ws.push_back(radius * static_cast<double>(k) / static_cast<double>(total - half));
    }
    for (int i = 1; i <= 2; ++i) {
        const double lo = spec.h_lower(i);
        const double hi = spec.h_upper(i);
        for (double w : ws) {
            double value;
            const std::string which = "B" + std::to_string(i);
            try {
                value = spec.B(i, w);
            } catch (const EvalError& err) {
                fail(check, which + " evaluation failed: " + err.what(), Witness{{}, {}, {}, w});
                return check;
            }
            const double slack = 1e-12 * std::max(w, 1e-300);
            if (!std::isfinite(value) || value < lo * w - slack || value > hi * w + slack) {
                fail(check, which + "(w) outside [h" + std::to_string(i) + "1 w, h" + std::to_string(i) + "2 w]",
                     Witness{{}, {}, {}, w});
                return check;
            }
        }
    }
    check.detail = "h_i1 w <= B_i(w) <= h_i2 w on sampled w in [0, R]";
    return check;
}

}  // namespace

ValidationReport validate_spec(const ProblemSpec& spec, const NumericsSettings& numerics) {
    ValidationReport report;
    report.sample_radius = numerics.sample_radius;
    report.samples = numerics.samples;
    report.sandwich_samples = numerics.sandwich_samples;
    report.conditions[0] = check_nonnegative_f(spec, numerics.samples, numerics.sample_radius);
    report.conditions[1] = check_c2(spec, numerics);
    report.conditions[2] = check_c3(spec, numerics);
    report.conditions[3] = check_sandwich(spec, numerics);
    return report;
}

}  // namespace plapcert
