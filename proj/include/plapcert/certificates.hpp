#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plapcert/operator.hpp"
#include "plapcert/problem.hpp"

namespace plapcert {

/// Strict inequalities must clear this relative margin to count.
inline constexpr double kMarginFloor = 1e-9;

struct ConeConstants {
    double c1 = 0, c2 = 0;
    double m1 = 0, m2 = 0;
    double M1 = 0, M2 = 0;
    double Mt1 = 0, Mt2 = 0;
    double nu_star = 0;        ///< minimiser for M2
    double nu_star_tilde = 0;  ///< minimiser for Mt2

    double m(int i) const { return i == 1 ? m1 : m2; }
    double M(int i) const { return i == 1 ? M1 : M2; }
    double Mt(int i) const { return i == 1 ? Mt1 : Mt2; }
    double c(int i) const { return i == 1 ? c1 : c2; }
};

ConeConstants compute_constants(const ProblemSpec& spec, const NumericsSettings& numerics = {});

/// The quantity minimised over nu in [a2, b2] to obtain 1/M2 (including the
/// factor 1/2). with_robin = false drops the h21 term (the M-tilde variant).
double m2_minimand(const ProblemSpec& spec, const Primitive& g2_primitive, double nu, bool with_robin,
                   double tol);

struct RadiusBox {
    double rho1;
    double rho2;
    double rho(int i) const { return i == 1 ? rho1 : rho2; }
};

enum class GrowthKind { SupI1F1, SupI1F2, InfI0F1, InfI0F2, InfI0StarF1, InfI0StarF2 };

const char* to_string(GrowthKind kind);
int component_of(GrowthKind kind);
bool is_sup(GrowthKind kind);

struct Point3 {
    double t, u, v;
};

struct GrowthEstimate {
    GrowthKind kind;
    RadiusBox box;
    double value = 0;      ///< f_i(witness) / rho_i^{p_i - 1}
    double raw_value = 0;  ///< f_i(witness)
    Point3 witness{};
    std::size_t resolution = 0;
    bool refined = false;  ///< local refinement moved the incumbent
    int refinement_depth = 0;
    /// The defining box [t_lo,t_hi] x [u_lo,u_hi] x [v_lo,v_hi].
    Point3 lo{}, hi{};
};

GrowthEstimate growth_bound(const ProblemSpec& spec, GrowthKind kind, RadiusBox box, std::size_t resolution);

enum class Status { Holds, Fails, Inconclusive };

const char* to_string(Status status);

/// One strict comparison of a growth bound against its threshold.
struct Comparison {
    GrowthEstimate estimate;
    double threshold = 0;      ///< phi_{p_i}(m_i) or phi_{p_i}(M_i)
    double raw_threshold = 0;  ///< threshold * rho_i^{p_i-1}, i.e. phi_{p_i}(m_i rho_i)
    double margin = 0;         ///< |value - threshold|
    Status status = Status::Fails;
};

struct ConditionResult {
    Status status = Status::Fails;
    std::vector<Comparison> comparisons;
    /// (I0) only: whether the stronger M-tilde thresholds also hold.
    std::optional<bool> tilde_holds;
};

struct IndexConditions {
    RadiusBox box;
    ConditionResult I1;
    ConditionResult I0;
    ConditionResult I0star;
};

enum class ConditionTag { I1, I0, I0star };

const char* to_string(ConditionTag tag);

IndexConditions check_index_conditions(const ProblemSpec& spec, const ConeConstants& constants, RadiusBox box,
                                       std::size_t resolution);
ConditionResult check_condition(const ProblemSpec& spec, const ConeConstants& constants, RadiusBox box,
                                ConditionTag tag, std::size_t resolution);

struct LadderRung {
    RadiusBox box;
    ConditionTag tag;
};

struct NormInterval {
    double lo;  ///< exclusive
    double hi;  ///< inclusive
};

/// Set-theoretic localisation between consecutive rungs: solutions lie in
/// the closure of the outer set minus the closure of the inner set.
struct Localization {
    std::string outer_set;  ///< e.g. "K(1, 0.666)" or "V(9, 9)"
    std::string inner_set;
    NormInterval display;   ///< presentational (max inner radius, max outer radius]
    NormInterval bounds;    ///< norm bounds implied by the set difference
};

enum class Conclusion { Solutions, Inconclusive };

struct Certificate {
    ConeConstants constants;
    std::vector<LadderRung> ladder;
    std::vector<ConditionResult> rung_results;
    std::size_t resolution = 0;
    Conclusion conclusion = Conclusion::Inconclusive;
    std::string pattern;  ///< "S1".."S6" or "alternating-<k>"
    int solutions = 0;
    std::vector<Localization> localization;
    std::vector<std::string> reasons;  ///< why inconclusive

    bool conclusive() const { return conclusion == Conclusion::Solutions; }
};

Certificate certify(const ProblemSpec& spec, const ConeConstants& constants, const std::vector<LadderRung>& ladder,
                    std::size_t resolution);

// ---------------------------------------------------------------------------
// Nonexistence

struct NonexistenceCheck {
    int component = 1;
    int condition = 1;  ///< 1: f_i < phi(m_i u_i) on [0,1]; 2: f_i > phi(M_i u_i / c_i) on [a_i,b_i]
    bool holds = false;
    std::optional<Point3> counterexample;  ///< (t, u1, u2)
    double worst_ratio = 0;  ///< max (cond 1) or min (cond 2) of f_i / bound
};

struct NonexistenceVerdict {
    bool established = false;
    int nonexistence_case = 0;  ///< 1, 2, 3; 0 when not established
    double cap = 0;
    std::size_t resolution = 0;
    std::vector<NonexistenceCheck> checks;  ///< (i, condition) for i, condition in {1,2}
    std::string summary;
};

NonexistenceVerdict check_nonexistence(const ProblemSpec& spec, const ConeConstants& constants, double cap,
                                       std::size_t resolution);

// ---------------------------------------------------------------------------
// Set inclusions K(c rho) in V(rho) in K(rho)

struct SetMembership {
    bool in_small_K = false;  ///< ||u|| < c1 rho1 and ||v|| < c2 rho2
    bool in_V = false;        ///< min_[0,b1] u < c1 rho1 and min_[a2,b2] v < c2 rho2
    bool in_K = false;        ///< ||u|| < rho1 and ||v|| < rho2
    bool on_V_boundary = false;
    double min_u = 0;
    double min_v = 0;
};

struct InclusionVerdict {
    bool chain_holds = true;
    std::vector<SetMembership> memberships;
    std::vector<std::size_t> violations;  ///< sample indices breaking the chain
};

SetMembership set_membership(const ProblemSpec& spec, RadiusBox box, const StatePair& state,
                             double boundary_tol = 1e-12);

InclusionVerdict set_inclusion_check(const ProblemSpec& spec, RadiusBox box, const std::vector<StatePair>& samples);

}  // namespace plapcert
