#include "plapcert/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace plapcert {

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

namespace {

Json point(const Point3& p) { return {{"t", p.t}, {"u", p.u}, {"v", p.v}}; }

Json box(const RadiusBox& b) { return Json::array({b.rho1, b.rho2}); }

Json witness(const Witness& w) {
    Json j = Json::object();
    if (w.t) j["t"] = *w.t;
    if (w.u) j["u"] = *w.u;
    if (w.v) j["v"] = *w.v;
    if (w.w) j["w"] = *w.w;
    return j;
}

Json cone_check(const ConeCheck& c) {
    Json j{{"pass", c.pass}, {"worst_violation", c.worst_violation}};
    j["witness_t"] = c.witness_t ? Json(*c.witness_t) : Json(nullptr);
    return j;
}

}  // namespace

Json json_of(const ProblemSpec& spec) {
    const auto& t = spec.terms();
    return {{"p1", t.p1}, {"p2", t.p2}, {"g1", t.g1}, {"g2", t.g2}, {"f1", t.f1}, {"f2", t.f2},
            {"B1", t.B1}, {"B2", t.B2}, {"b1", t.b1}, {"a2", t.a2}, {"b2", t.b2}, {"h11", t.h11},
            {"h12", t.h12}, {"h21", t.h21}, {"h22", t.h22}};
}

Json json_of(const NumericsSettings& n) {
    return {{"n", n.n},
            {"quad_tol", n.quad_tol},
            {"root_tol", n.root_tol},
            {"min_tol", n.min_tol},
            {"scan_points", n.scan_points},
            {"samples", n.samples},
            {"sample_radius", n.sample_radius},
            {"sandwich_samples", n.sandwich_samples},
            {"growth_resolution", n.growth_resolution},
            {"g1_singular", to_string(n.g1_singular)},
            {"g2_singular", to_string(n.g2_singular)}};
}

Json json_of(const ValidationReport& report) {
    Json conditions = Json::array();
    for (const auto& c : report.conditions) {
        Json j{{"name", c.name}, {"verdict", to_string(c.verdict)}, {"detail", c.detail}, {"resolution", c.resolution}};
        j["witness"] = c.witness ? witness(*c.witness) : Json(nullptr);
        Json integrals = Json::object();
        for (const auto& [label, value] : c.integrals) {
            integrals[label] = value;
        }
        j["integrals"] = integrals;
        conditions.push_back(j);
    }
    return {{"ok", report.ok()},
            {"sample_radius", report.sample_radius},
            {"samples", report.samples},
            {"sandwich_samples", report.sandwich_samples},
            {"conditions", conditions}};
}

Json json_of(const ConeConstants& k) {
    return {{"c1", k.c1}, {"c2", k.c2}, {"m1", k.m1},           {"m2", k.m2},
            {"M1", k.M1}, {"M2", k.M2}, {"Mt1", k.Mt1},         {"Mt2", k.Mt2},
            {"nu_star", k.nu_star},     {"nu_star_tilde", k.nu_star_tilde}};
}

Json json_of(const GrowthEstimate& e) {
    return {{"kind", to_string(e.kind)},
            {"box", box(e.box)},
            {"value", e.value},
            {"raw_value", e.raw_value},
            {"witness", point(e.witness)},
            {"domain", {{"lo", point(e.lo)}, {"hi", point(e.hi)}}},
            {"resolution", e.resolution},
            {"refined", e.refined},
            {"refinement_depth", e.refinement_depth}};
}

Json json_of(const Comparison& c) {
    return {{"estimate", json_of(c.estimate)},
            {"relation", is_sup(c.estimate.kind) ? "<" : ">"},
            {"threshold", c.threshold},
            {"raw_threshold", c.raw_threshold},
            {"margin", c.margin},
            {"status", to_string(c.status)}};
}

Json json_of(const ConditionResult& r) {
    Json comparisons = Json::array();
    for (const auto& c : r.comparisons) {
        comparisons.push_back(json_of(c));
    }
    Json j{{"status", to_string(r.status)}, {"comparisons", comparisons}};
    if (r.tilde_holds) {
        j["tilde_holds"] = *r.tilde_holds;
    }
    return j;
}

Json json_of(const IndexConditions& c) {
    return {{"box", box(c.box)}, {"I1", json_of(c.I1)}, {"I0", json_of(c.I0)}, {"I0star", json_of(c.I0star)}};
}

std::string solutions_phrase(int count) {
    static const char* words[] = {"zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine"};
    const std::string n = count >= 0 && count < 10 ? words[count] : std::to_string(count);
    return n + (count == 1 ? " solution" : " solutions");
}

Json json_of(const Certificate& cert) {
    Json ladder = Json::array();
    for (std::size_t j = 0; j < cert.ladder.size(); ++j) {
        ladder.push_back({{"box", box(cert.ladder[j].box)},
                          {"tag", to_string(cert.ladder[j].tag)},
                          {"result", json_of(cert.rung_results[j])}});
    }
    Json localization = Json::array();
    for (const auto& loc : cert.localization) {
        localization.push_back({{"interval", Json::array({loc.display.lo, loc.display.hi})},
                                {"bounds", Json::array({loc.bounds.lo, loc.bounds.hi})},
                                {"set", "closure(" + loc.outer_set + ") minus " + loc.inner_set},
                                {"outer_set", loc.outer_set},
                                {"inner_set", loc.inner_set}});
    }
    return {{"conclusion", cert.conclusive() ? solutions_phrase(cert.solutions) : "inconclusive"},
            {"pattern", cert.pattern.empty() ? Json(nullptr) : Json(cert.pattern)},
            {"solutions", cert.solutions},
            {"resolution", cert.resolution},
            {"margin_floor", kMarginFloor},
            {"ladder", ladder},
            {"localization", localization},
            {"reasons", cert.reasons}};
}

Json json_of(const NonexistenceVerdict& v) {
    Json checks = Json::array();
    for (const auto& c : v.checks) {
        Json j{{"component", c.component}, {"condition", c.condition}, {"holds", c.holds},
               {"worst_ratio", c.worst_ratio}};
        j["counterexample"] = c.counterexample ? Json{{"t", c.counterexample->t},
                                                      {"u1", c.counterexample->u},
                                                      {"u2", c.counterexample->v}}
                                               : Json(nullptr);
        checks.push_back(j);
    }
    return {{"verdict", v.summary},
            {"established", v.established},
            {"case", v.nonexistence_case},
            {"cap", v.cap},
            {"resolution", v.resolution},
            {"checks", checks}};
}

Json json_of(const ConeReport& r) {
    Json j{{"pass", r.pass()},
           {"tol", r.tol},
           {"nonneg_u", cone_check(r.nonneg_u)},
           {"nonneg_v", cone_check(r.nonneg_v)},
           {"nonincreasing_u", cone_check(r.nonincreasing_u)},
           {"concave_u", cone_check(r.concave_u)},
           {"concave_v", cone_check(r.concave_v)},
           {"lower_bound_u", cone_check(r.lower_bound_u)},
           {"lower_bound_v", cone_check(r.lower_bound_v)}};
    if (r.window_u) j["window_u"] = cone_check(*r.window_u);
    if (r.window_v) j["window_v"] = cone_check(*r.window_v);
    return j;
}

Json json_of(const SolutionRecord& r, const std::optional<std::string>& interval) {
    Json j{{"norm", r.norm},
           {"norm_u", r.norm_u},
           {"norm_v", r.norm_v},
           {"residual", r.residual},
           {"sigma", r.sigma},
           {"iterations", r.iterations},
           {"start", Json::array({r.start_used.first, r.start_used.second})},
           {"trivial", r.trivial},
           {"cone", json_of(r.cone_report)}};
    if (interval) {
        j["interval"] = *interval;
    }
    return j;
}

Json rounded(const Json& value) {
    if (value.is_number_float()) {
        const double x = value.get<double>();
        if (!std::isfinite(x)) {
            return nullptr;
        }
        return std::strtod(format_number(x).c_str(), nullptr);
    }
    if (value.is_array()) {
        Json out = Json::array();
        for (const auto& item : value) {
            out.push_back(rounded(item));
        }
        return out;
    }
    if (value.is_object()) {
        Json out = Json::object();
        for (auto it = value.begin(); it != value.end(); ++it) {
            out[it.key()] = rounded(it.value());
        }
        return out;
    }
    return value;
}

std::string solution_csv(const SolutionRecord& record) {
    std::ostringstream out;
    out << "t,u,v\r\n";
    const Grid& grid = record.state.grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << format_number(grid.node(i)) << ',' << format_number(record.state.u()[i]) << ','
            << format_number(record.state.v()[i]) << "\r\n";
    }
    return out.str();
}

std::string summary_csv(const std::vector<SolutionRecord>& records) {
    std::ostringstream out;
    out << "solution,norm,residual,sigma,norm_u,norm_v,iterations,alpha1,alpha2\r\n";
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        out << k + 1 << ',' << format_number(r.norm) << ',' << format_number(r.residual) << ','
            << format_number(r.sigma) << ',' << format_number(r.norm_u) << ',' << format_number(r.norm_v) << ','
            << r.iterations << ',' << format_number(r.start_used.first) << ','
            << format_number(r.start_used.second) << "\r\n";
    }
    return out.str();
}

}  // namespace plapcert
