#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>

#include "plapcert/numerics.hpp"
#include "plapcert/problem.hpp"

namespace plapcert {

/// (u, v) on a shared grid; norm is the max of the two sup-norms.
class StatePair {
public:
    StatePair(GridFunction u, GridFunction v);

    const GridFunction& u() const { return u_; }
    const GridFunction& v() const { return v_; }
    const Grid& grid() const { return u_.grid(); }
    double norm() const { return std::max(u_.sup_norm(), v_.sup_norm()); }

    /// alpha1 (1 - t) and alpha2 min(t, 1 - t): the canonical cone profiles.
    static StatePair cone_profile(const Grid& grid, double alpha1, double alpha2);
    static StatePair zero(const Grid& grid) { return cone_profile(grid, 0.0, 0.0); }

    StatePair resampled(const Grid& target) const;

private:
    GridFunction u_;
    GridFunction v_;
};

double distance(const StatePair& a, const StatePair& b);

/// Expression failures during operator evaluation, tagged with the node.
struct OperatorError : std::runtime_error {
    OperatorError(const std::string& what, double t) : std::runtime_error(what), t(t) {}
    double t;
};

struct OperatorOutput {
    GridFunction Tu;
    GridFunction Tv;
    double sigma = 0.0;
    /// |left branch(sigma) - right branch(sigma)|.
    double quadrature_error_estimate = 0.0;
};

struct BranchValues {
    double left;   ///< int_0^x phi^-1(int_s^x g f) ds + B2(phi^-1(int_0^x g f))
    double right;  ///< int_x^1 phi^-1(int_x^s g f) ds
};

/// Evaluates T = (T1, T2). The inner integrals are trapezoid running sums of
/// the node samples of g_i f_i (adaptive quadrature on cells touching a
/// declared singular endpoint of g_i). The outer integrals integrate
/// phi^{-1} of the piecewise-linear inner integral exactly, cell by cell,
/// so sigma enters as an off-grid integration limit.
class Operator {
public:
    Operator(const ProblemSpec& spec, NumericsSettings numerics);

    GridFunction eval_T1(const StatePair& state) const;
    double sigma(const StatePair& state) const;
    OperatorOutput apply(const StatePair& state) const;
    BranchValues branches(const StatePair& state, double x) const;
    double residual(const StatePair& state) const;

    const ProblemSpec& spec() const { return spec_; }
    const NumericsSettings& numerics() const { return numerics_; }

private:
    struct Inner {
        std::vector<double> values;  // running integral of g_i f_i at nodes
    };
    Inner inner_integral(int i, const StatePair& state) const;
    BranchValues branches_from(const Inner& inner, const Grid& grid, double x) const;
    double sigma_from(const Inner& inner, const Grid& grid) const;

    ProblemSpec spec_;
    NumericsSettings numerics_;
    SignedPower inv1_;
    SignedPower inv2_;
};

GridFunction eval_T1(const ProblemSpec& spec, const StatePair& state, const NumericsSettings& numerics = {});
double sigma(const ProblemSpec& spec, const StatePair& state, const NumericsSettings& numerics = {});
OperatorOutput eval_T2(const ProblemSpec& spec, const StatePair& state, const NumericsSettings& numerics = {});
double residual(const ProblemSpec& spec, const StatePair& state, const NumericsSettings& numerics = {});

// ---------------------------------------------------------------------------

struct ConeCheck {
    bool pass = true;
    double worst_violation = 0.0;
    std::optional<double> witness_t;
};

/// Subintervals on which the lower-bound constants c1, c2 are checked.
struct ConeWindow {
    double b1;
    double a2;
    double b2;
    double c1() const { return 1.0 - b1; }
    double c2() const { return std::min(a2, 1.0 - b2); }
};

struct ConeReport {
    double tol = 0.0;
    ConeCheck nonneg_u, nonneg_v, nonincreasing_u, concave_u, concave_v;
    ConeCheck lower_bound_u;  ///< u(t) >= (1 - t) ||u||
    ConeCheck lower_bound_v;  ///< v(t) >= min{t, 1 - t} ||v||
    std::optional<ConeCheck> window_u;  ///< min over [0,b1] of u >= c1 ||u||
    std::optional<ConeCheck> window_v;  ///< min over [a2,b2] of v >= c2 ||v||

    bool pass() const;
};

ConeReport cone_membership(const StatePair& state, double tol,
                           const std::optional<ConeWindow>& window = std::nullopt);

ConeWindow cone_window(const ProblemSpec& spec);

}  // namespace plapcert
