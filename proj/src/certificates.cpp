#include "plapcert/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

#include "plapcert/numerics.hpp"

namespace plapcert {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

double outer_integral(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) {
        return 0.0;
    }
    QuadratureOptions options;
    options.tol = tol;
    options.cluster_left = true;
    options.cluster_right = true;
    return integrate_adaptive(f, a, b, options).value;
}

constexpr std::size_t kPrimitivePanels = 256;

}  // namespace

double m2_minimand(const ProblemSpec& spec, const Primitive& G, double nu, bool with_robin, double tol) {
    const double p = spec.p(2);
    const double a = spec.a2();
    const double b = spec.b2();
    const double Gnu = G(nu);
    double total = outer_integral([&](double s) { return phi_p_inv(Gnu - G(s), p); }, a, nu, tol);
    total += outer_integral([&](double s) { return phi_p_inv(G(s) - Gnu, p); }, nu, b, tol);
    if (with_robin) {
        total += spec.h_lower(2) * phi_p_inv(Gnu - G(a), p);
    }
    return 0.5 * total;
}

ConeConstants compute_constants(const ProblemSpec& spec, const NumericsSettings& numerics) {
    const double tol = numerics.quad_tol;
    const double p1 = spec.p(1);
    const double p2 = spec.p(2);
    const Primitive G1([&spec](double t) { return spec.g(1, t); }, 0.0, 1.0, kPrimitivePanels, tol);
    const Primitive G2([&spec](double t) { return spec.g(2, t); }, 0.0, 1.0, kPrimitivePanels, tol);

    ConeConstants k;
    k.c1 = spec.c(1);
    k.c2 = spec.c(2);

    auto inv1_G1 = [&](double s) { return phi_p_inv(G1(s), p1); };
    const double I1_full = outer_integral(inv1_G1, 0.0, 1.0, tol);
    const double I1_window = outer_integral(inv1_G1, 0.0, spec.b1(), tol);
    k.m1 = 1.0 / (I1_full + spec.h_upper(1) * phi_p_inv(G1.total(), p1));
    k.M1 = 1.0 / (I1_window + spec.h_lower(1) * phi_p_inv(G1(spec.b1()), p1));
    k.Mt1 = 1.0 / I1_window;

    const double G_half = G2(0.5);
    const double left = outer_integral([&](double s) { return phi_p_inv(G_half - G2(s), p2); }, 0.0, 0.5, tol) +
                        spec.h_upper(2) * phi_p_inv(G_half, p2);
    const double right = outer_integral([&](double s) { return phi_p_inv(G2(s) - G_half, p2); }, 0.5, 1.0, tol);
    k.m2 = 1.0 / std::max(left, right);

    const MinimumResult with = minimize_1d([&](double nu) { return m2_minimand(spec, G2, nu, true, tol); },
                                           spec.a2(), spec.b2(), numerics.min_tol);
    const MinimumResult without = minimize_1d([&](double nu) { return m2_minimand(spec, G2, nu, false, tol); },
                                              spec.a2(), spec.b2(), numerics.min_tol);
    k.M2 = 1.0 / with.min;
    k.nu_star = with.argmin;
    k.Mt2 = 1.0 / without.min;
    k.nu_star_tilde = without.argmin;
    return k;
}

// ---------------------------------------------------------------------------
// Growth bounds

const char* to_string(GrowthKind kind) {
    switch (kind) {
        case GrowthKind::SupI1F1: return "sup-I1-f1";
        case GrowthKind::SupI1F2: return "sup-I1-f2";
        case GrowthKind::InfI0F1: return "inf-I0-f1";
        case GrowthKind::InfI0F2: return "inf-I0-f2";
        case GrowthKind::InfI0StarF1: return "inf-I0star-f1";
        case GrowthKind::InfI0StarF2: return "inf-I0star-f2";
    }
    return "?";
}

int component_of(GrowthKind kind) {
    switch (kind) {
        case GrowthKind::SupI1F1:
        case GrowthKind::InfI0F1:
        case GrowthKind::InfI0StarF1: return 1;
        default: return 2;
    }
}

bool is_sup(GrowthKind kind) { return kind == GrowthKind::SupI1F1 || kind == GrowthKind::SupI1F2; }

namespace {

struct Box3 {
    Point3 lo, hi;
};

Box3 defining_box(const ProblemSpec& spec, GrowthKind kind, RadiusBox box) {
    const double r1 = box.rho1;
    const double r2 = box.rho2;
    switch (kind) {
        case GrowthKind::SupI1F1:
        case GrowthKind::SupI1F2: return {{0.0, 0.0, 0.0}, {1.0, r1, r2}};
        case GrowthKind::InfI0F1: return {{0.0, spec.c(1) * r1, 0.0}, {spec.b1(), r1, r2}};
        case GrowthKind::InfI0F2: return {{spec.a2(), 0.0, spec.c(2) * r2}, {spec.b2(), r1, r2}};
        case GrowthKind::InfI0StarF1: return {{0.0, 0.0, 0.0}, {spec.b1(), r1, r2}};
        case GrowthKind::InfI0StarF2: return {{spec.a2(), 0.0, 0.0}, {spec.b2(), r1, r2}};
    }
    throw std::logic_error("unknown growth kind");
}

double lattice(double lo, double hi, std::size_t k, std::size_t points) {
    if (points <= 1 || k == 0) return lo;
    if (k + 1 == points) return hi;
    return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
}

struct Incumbent {
    double value;
    Point3 at;
    bool found = false;
};

class LatticeSearch {
public:
    LatticeSearch(const ProblemSpec& spec, int component, bool sup)
        : spec_(spec), component_(component), sup_(sup) {}

    double eval(const Point3& x) const {
        double value;
        try {
            value = spec_.f(component_, x.t, x.u, x.v);
        } catch (const EvalError& err) {
            throw EvalError(where(x) + ": " + err.what());
        }
        if (std::isnan(value)) {
            throw EvalError(where(x) + ": value is NaN");
        }
        return value;
    }

    bool better(double candidate, double incumbent) const {
        return sup_ ? candidate > incumbent : candidate < incumbent;
    }

    /// Best lattice point of a box, leftmost in (t, u, v) lattice order on ties.
    Incumbent scan(const Box3& box, std::size_t points, bool parallel) const {
        const std::size_t nt = box.hi.t > box.lo.t ? points : 1;
        auto slab = [&](std::size_t i0, std::size_t i1) {
            Incumbent best{0.0, {}, false};
            const std::size_t nu = box.hi.u > box.lo.u ? points : 1;
            const std::size_t nv = box.hi.v > box.lo.v ? points : 1;
            for (std::size_t i = i0; i < i1; ++i) {
                const double t = lattice(box.lo.t, box.hi.t, i, nt);
                for (std::size_t j = 0; j < nu; ++j) {
                    const double u = lattice(box.lo.u, box.hi.u, j, nu);
                    for (std::size_t l = 0; l < nv; ++l) {
                        const Point3 x{t, u, lattice(box.lo.v, box.hi.v, l, nv)};
                        const double value = eval(x);
                        if (!best.found || better(value, best.value)) {
                            best = {value, x, true};
                        }
                    }
                }
            }
            return best;
        };

        const std::size_t workers =
            parallel ? std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), nt) : 1;
        if (workers <= 1) {
            return slab(0, nt);
        }
        std::vector<std::future<Incumbent>> parts;
        for (std::size_t w = 0; w < workers; ++w) {
            parts.push_back(std::async(std::launch::async, slab, nt * w / workers, nt * (w + 1) / workers));
        }
        Incumbent best{0.0, {}, false};
        for (auto& part : parts) {
            const Incumbent candidate = part.get();
            if (candidate.found && (!best.found || better(candidate.value, best.value))) {
                best = candidate;
            }
        }
        return best;
    }

private:
    std::string where(const Point3& x) const {
        return "f" + std::to_string(component_) + " at (t, u, v) = (" + fmt(x.t) + ", " + fmt(x.u) + ", " +
               fmt(x.v) + ")";
    }

    const ProblemSpec& spec_;
    int component_;
    bool sup_;
};

constexpr double kRefineTol = 1e-6;
constexpr int kMaxRefineDepth = 60;
constexpr std::size_t kSubLattice = 5;

}  // namespace

GrowthEstimate growth_bound(const ProblemSpec& spec, GrowthKind kind, RadiusBox box, std::size_t resolution) {
    if (!(box.rho1 > 0.0) || !(box.rho2 > 0.0)) {
        throw std::invalid_argument("growth_bound: radii must be positive");
    }
    resolution = std::max<std::size_t>(resolution, 2);
    const int i = component_of(kind);
    const Box3 region = defining_box(spec, kind, box);
    const LatticeSearch search(spec, i, is_sup(kind));

    Incumbent best = search.scan(region, resolution, true);

    const double steps = static_cast<double>(resolution - 1);
    Point3 half{(region.hi.t - region.lo.t) / steps, (region.hi.u - region.lo.u) / steps,
                (region.hi.v - region.lo.v) / steps};
    const Point3 start = best.at;
    int depth = 0;
    while (depth < kMaxRefineDepth) {
        const Point3& w = best.at;
        const Box3 local{{std::max(region.lo.t, w.t - half.t), std::max(region.lo.u, w.u - half.u),
                          std::max(region.lo.v, w.v - half.v)},
                         {std::min(region.hi.t, w.t + half.t), std::min(region.hi.u, w.u + half.u),
                          std::min(region.hi.v, w.v + half.v)}};
        ++depth;
        const Incumbent candidate = search.scan(local, kSubLattice, false);
        double improvement = 0.0;
        if (candidate.found && search.better(candidate.value, best.value)) {
            improvement = std::fabs(candidate.value - best.value) /
                          std::max(std::fabs(best.value), std::numeric_limits<double>::min());
            best = candidate;
        }
        if (improvement < kRefineTol) {
            break;
        }
        half = {0.5 * half.t, 0.5 * half.u, 0.5 * half.v};
    }

    GrowthEstimate estimate;
    estimate.kind = kind;
    estimate.box = box;
    estimate.raw_value = best.value;
    estimate.value = best.value / std::pow(box.rho(i), spec.p(i) - 1.0);
    estimate.witness = best.at;
    estimate.resolution = resolution;
    estimate.refined = best.at.t != start.t || best.at.u != start.u || best.at.v != start.v;
    estimate.refinement_depth = depth;
    estimate.lo = region.lo;
    estimate.hi = region.hi;
    return estimate;
}

// ---------------------------------------------------------------------------
// Index conditions

const char* to_string(Status status) {
    switch (status) {
        case Status::Holds: return "holds";
        case Status::Fails: return "fails";
        case Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(ConditionTag tag) {
    switch (tag) {
        case ConditionTag::I1: return "I1";
        case ConditionTag::I0: return "I0";
        case ConditionTag::I0star: return "I0star";
    }
    return "?";
}

namespace {

Comparison compare(const ProblemSpec& spec, const GrowthEstimate& estimate, double constant) {
    const int i = component_of(estimate.kind);
    const double p = spec.p(i);
    Comparison c;
    c.estimate = estimate;
    c.threshold = phi_p(constant, p);
    c.raw_threshold = phi_p(constant * estimate.box.rho(i), p);
    c.margin = std::fabs(estimate.value - c.threshold);
    const double floor = kMarginFloor * std::max(std::fabs(c.threshold), std::fabs(estimate.value));
    // sup bounds must sit strictly below the threshold, inf bounds strictly above
    const double signed_margin = is_sup(estimate.kind) ? c.threshold - estimate.value : estimate.value - c.threshold;
    if (c.margin <= floor) {
        c.status = Status::Inconclusive;
    } else {
        c.status = signed_margin > 0.0 ? Status::Holds : Status::Fails;
    }
    return c;
}

Status all_of(const std::vector<Comparison>& cs) {
    Status s = Status::Holds;
    for (const auto& c : cs) {
        if (c.status == Status::Fails) return Status::Fails;
        if (c.status == Status::Inconclusive) s = Status::Inconclusive;
    }
    return s;
}

Status any_of(const std::vector<Comparison>& cs) {
    Status s = Status::Fails;
    for (const auto& c : cs) {
        if (c.status == Status::Holds) return Status::Holds;
        if (c.status == Status::Inconclusive) s = Status::Inconclusive;
    }
    return s;
}

}  // namespace

ConditionResult check_condition(const ProblemSpec& spec, const ConeConstants& k, RadiusBox box, ConditionTag tag,
                                std::size_t resolution) {
    ConditionResult result;
    switch (tag) {
        case ConditionTag::I1:
            result.comparisons.push_back(compare(spec, growth_bound(spec, GrowthKind::SupI1F1, box, resolution), k.m1));
            result.comparisons.push_back(compare(spec, growth_bound(spec, GrowthKind::SupI1F2, box, resolution), k.m2));
            result.status = all_of(result.comparisons);
            break;
        case ConditionTag::I0: {
            result.comparisons.push_back(compare(spec, growth_bound(spec, GrowthKind::InfI0F1, box, resolution), k.M1));
            result.comparisons.push_back(compare(spec, growth_bound(spec, GrowthKind::InfI0F2, box, resolution), k.M2));
            result.status = all_of(result.comparisons);
            bool tilde = true;
            for (const auto& c : result.comparisons) {
                const int i = component_of(c.estimate.kind);
                tilde = tilde && c.estimate.value > phi_p(k.Mt(i), spec.p(i));
            }
            result.tilde_holds = tilde;
            break;
        }
        case ConditionTag::I0star:
            result.comparisons.push_back(
                compare(spec, growth_bound(spec, GrowthKind::InfI0StarF1, box, resolution), k.M1));
            result.comparisons.push_back(
                compare(spec, growth_bound(spec, GrowthKind::InfI0StarF2, box, resolution), k.M2));
            result.status = any_of(result.comparisons);
            break;
    }
    return result;
}

IndexConditions check_index_conditions(const ProblemSpec& spec, const ConeConstants& constants, RadiusBox box,
                                       std::size_t resolution) {
    IndexConditions out;
    out.box = box;
    out.I1 = check_condition(spec, constants, box, ConditionTag::I1, resolution);
    out.I0 = check_condition(spec, constants, box, ConditionTag::I0, resolution);
    out.I0star = check_condition(spec, constants, box, ConditionTag::I0star, resolution);
    return out;
}

// ---------------------------------------------------------------------------
// Ladders

namespace {

bool index_zero(ConditionTag tag) { return tag != ConditionTag::I1; }

std::string radius_name(std::size_t rung) {
    static const char* names[] = {"rho", "r", "s", "delta"};
    return rung < 4 ? names[rung] : "x" + std::to_string(rung + 1);
}

std::string set_name(const LadderRung& rung) {
    return std::string(index_zero(rung.tag) ? "V(" : "K(") + fmt(rung.box.rho1) + ", " + fmt(rung.box.rho2) + ")";
}

std::string pattern_name(bool starts_zero, std::size_t length) {
    if (length >= 2 && length <= 4) {
        static const char* zero[] = {"S1", "S3", "S5"};
        static const char* one[] = {"S2", "S4", "S6"};
        return (starts_zero ? zero : one)[length - 2];
    }
    return "alternating-" + std::to_string(length);
}

}  // namespace

Certificate certify(const ProblemSpec& spec, const ConeConstants& constants, const std::vector<LadderRung>& ladder,
                    std::size_t resolution) {
    for (const auto& rung : ladder) {
        if (!(rung.box.rho1 > 0.0) || !(rung.box.rho2 > 0.0)) {
            throw std::invalid_argument("ladder radii must be positive");
        }
    }
    Certificate cert;
    cert.constants = constants;
    cert.ladder = ladder;
    cert.resolution = resolution;

    for (const auto& rung : ladder) {
        cert.rung_results.push_back(check_condition(spec, constants, rung.box, rung.tag, resolution));
    }

    bool matched = ladder.size() >= 2;
    for (std::size_t j = 0; matched && j < ladder.size(); ++j) {
        if (ladder[j].tag == ConditionTag::I0star && j != 0) {
            matched = false;
        }
        if (j > 0 && index_zero(ladder[j].tag) == index_zero(ladder[j - 1].tag)) {
            matched = false;
        }
    }
    if (!matched) {
        std::string tags;
        for (const auto& rung : ladder) {
            tags += (tags.empty() ? "" : ", ") + std::string(to_string(rung.tag));
        }
        cert.reasons.push_back("no S-pattern matched (tags: " + (tags.empty() ? std::string("none") : tags) +
                               "); tags must alternate I0/I1, I0star only as the first rung");
        return cert;
    }
    cert.pattern = pattern_name(index_zero(ladder.front().tag), ladder.size());

    for (std::size_t j = 1; j < ladder.size(); ++j) {
        const bool gap = index_zero(ladder[j].tag);  // 1 -> 0 step needs the c_i-scaled gap
        for (int i = 1; i <= 2; ++i) {
            const double inner = ladder[j - 1].box.rho(i);
            const double outer = ladder[j].box.rho(i);
            const double bound = gap ? constants.c(i) * outer : outer;
            if (!(inner < bound)) {
                const std::string idx = std::to_string(i);
                const std::string rhs = gap ? "c" + idx + "*" + radius_name(j) + idx : radius_name(j) + idx;
                cert.reasons.push_back("ordering " + radius_name(j - 1) + idx + " < " + rhs + " violated: " +
                                       fmt(inner) + " >= " + fmt(bound));
            }
        }
    }

    for (std::size_t j = 0; j < ladder.size(); ++j) {
        const Status s = cert.rung_results[j].status;
        if (s != Status::Holds) {
            std::string detail = "(" + std::string(to_string(ladder[j].tag)) + ") at (" + fmt(ladder[j].box.rho1) +
                                 ", " + fmt(ladder[j].box.rho2) + ") " + to_string(s);
            for (const auto& c : cert.rung_results[j].comparisons) {
                if (c.status != Status::Holds) {
                    detail += "; " + std::string(to_string(c.estimate.kind)) + " " + fmt(c.estimate.value) +
                              (is_sup(c.estimate.kind) ? " vs < " : " vs > ") + fmt(c.threshold);
                }
            }
            cert.reasons.push_back(detail);
        }
    }
    if (!cert.reasons.empty()) {
        return cert;
    }

    cert.conclusion = Conclusion::Solutions;
    cert.solutions = static_cast<int>(ladder.size()) - 1;
    for (std::size_t j = 1; j < ladder.size(); ++j) {
        const LadderRung& in = ladder[j - 1];
        const LadderRung& out = ladder[j];
        Localization loc;
        loc.outer_set = set_name(out);
        loc.inner_set = set_name(in);
        loc.display = {std::max(in.box.rho1, in.box.rho2), std::max(out.box.rho1, out.box.rho2)};
        // outside V(rho) forces ||u|| >= c1 rho1 or ||v|| >= c2 rho2
        const double lo = index_zero(in.tag)
                              ? std::min(constants.c1 * in.box.rho1, constants.c2 * in.box.rho2)
                              : std::min(in.box.rho1, in.box.rho2);
        loc.bounds = {lo, std::max(out.box.rho1, out.box.rho2)};
        cert.localization.push_back(loc);
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Nonexistence

namespace {

/// Half uniform, half geometric points in (0, cap].
std::vector<double> radial_axis(double cap, std::size_t resolution) {
    std::vector<double> xs;
    const std::size_t half = std::max<std::size_t>(resolution / 2, 1);
    for (std::size_t k = 1; k <= half; ++k) {
        xs.push_back(cap * static_cast<double>(k) / static_cast<double>(half));
    }
    const std::size_t rest = std::max<std::size_t>(resolution - half, 1);
    const double lo = cap * 1e-6;
    for (std::size_t k = 0; k < rest; ++k) {
        xs.push_back(lo * std::pow(cap / lo, static_cast<double>(k) / static_cast<double>(rest)));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

NonexistenceCheck sample_condition(const ProblemSpec& spec, const ConeConstants& k, int i, int condition, double cap,
                                   std::size_t resolution) {
    NonexistenceCheck check;
    check.component = i;
    check.condition = condition;
    check.holds = true;
    check.worst_ratio = condition == 1 ? -std::numeric_limits<double>::infinity()
                                       : std::numeric_limits<double>::infinity();
    const double p = spec.p(i);
    const double scale = condition == 1 ? k.m(i) : k.M(i) / k.c(i);
    const double t_lo = condition == 1 ? 0.0 : spec.window_lo(i);
    const double t_hi = condition == 1 ? 1.0 : spec.window_hi(i);
    const std::vector<double> axis = radial_axis(cap, resolution);
    const std::size_t nt = std::max<std::size_t>(resolution, 2);
    for (std::size_t a = 0; a < nt; ++a) {
        const double t = lattice(t_lo, t_hi, a, nt);
        for (double u1 : axis) {
            for (double u2 : axis) {
                const double f = spec.f(i, t, u1, u2);
                const double bound = phi_p(scale * (i == 1 ? u1 : u2), p);
                const double ratio = f / bound;
                const bool ok = condition == 1 ? ratio < 1.0 - kMarginFloor : ratio > 1.0 + kMarginFloor;
                if (condition == 1 ? ratio > check.worst_ratio : ratio < check.worst_ratio) {
                    check.worst_ratio = ratio;
                }
                if (!ok && check.holds) {
                    check.holds = false;
                    check.counterexample = Point3{t, u1, u2};
                }
            }
        }
    }
    return check;
}

}  // namespace

NonexistenceVerdict check_nonexistence(const ProblemSpec& spec, const ConeConstants& constants, double cap,
                                       std::size_t resolution) {
    if (!(cap > 0.0)) {
        throw std::invalid_argument("check_nonexistence: cap must be positive");
    }
    NonexistenceVerdict verdict;
    verdict.cap = cap;
    verdict.resolution = resolution;
    for (int i = 1; i <= 2; ++i) {
        for (int condition = 1; condition <= 2; ++condition) {
            verdict.checks.push_back(sample_condition(spec, constants, i, condition, cap, resolution));
        }
    }
    auto holds = [&](int i, int condition) { return verdict.checks[(i - 1) * 2 + (condition - 1)].holds; };
    if (holds(1, 1) && holds(2, 1)) {
        verdict.nonexistence_case = 1;
    } else if (holds(1, 2) && holds(2, 2)) {
        verdict.nonexistence_case = 2;
    } else if ((holds(1, 1) && holds(2, 2)) || (holds(2, 1) && holds(1, 2))) {
        verdict.nonexistence_case = 3;
    }
    verdict.established = verdict.nonexistence_case != 0;
    const std::string box = " on u1, u2 in (0, " + fmt(cap) + "], " + std::to_string(resolution) + " points per axis";
    verdict.summary = verdict.established
                          ? "sampled-nonexistence (case " + std::to_string(verdict.nonexistence_case) + ")" + box
                          : "not established" + box;
    return verdict;
}

// ---------------------------------------------------------------------------
// Set inclusions

SetMembership set_membership(const ProblemSpec& spec, RadiusBox box, const StatePair& state, double boundary_tol) {
    SetMembership m;
    const double nu = state.u().sup_norm();
    const double nv = state.v().sup_norm();
    const double c1r = spec.c(1) * box.rho1;
    const double c2r = spec.c(2) * box.rho2;
    m.min_u = state.u().min_on(spec.window_lo(1), spec.window_hi(1));
    m.min_v = state.v().min_on(spec.window_lo(2), spec.window_hi(2));
    m.in_small_K = nu < c1r && nv < c2r;
    m.in_V = m.min_u < c1r && m.min_v < c2r;
    m.in_K = nu < box.rho1 && nv < box.rho2;
    const bool u_on = std::fabs(m.min_u - c1r) <= boundary_tol * std::max(1.0, c1r);
    const bool v_on = std::fabs(m.min_v - c2r) <= boundary_tol * std::max(1.0, c2r);
    m.on_V_boundary = (u_on && m.min_v <= c2r * (1.0 + boundary_tol)) || (v_on && m.min_u <= c1r * (1.0 + boundary_tol));
    return m;
}

InclusionVerdict set_inclusion_check(const ProblemSpec& spec, RadiusBox box, const std::vector<StatePair>& samples) {
    InclusionVerdict verdict;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const SetMembership m = set_membership(spec, box, samples[k]);
        verdict.memberships.push_back(m);
        if ((m.in_small_K && !m.in_V) || (m.in_V && !m.in_K)) {
            verdict.chain_holds = false;
            verdict.violations.push_back(k);
        }
    }
    return verdict;
}

}  // namespace plapcert
