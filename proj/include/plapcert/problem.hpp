#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plapcert/expr.hpp"

namespace plapcert {

/// Configuration problems: missing/unknown keys, malformed values, violated
/// structural invariants. Carries "section.key" context in the message.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SingularEnd { None, Left, Right, Both };

const char* to_string(SingularEnd end);

struct NumericsSettings {
    std::size_t n = 1024;
    double quad_tol = 1e-10;
    double root_tol = 1e-10;
    double min_tol = 1e-8;
    std::size_t scan_points = 512;
    std::size_t samples = 64;             ///< lattice points per axis for (C1)
    double sample_radius = 10.0;          ///< R: u, v, w sampled in [0, R]
    std::size_t sandwich_samples = 10000; ///< w samples for the Robin sandwich
    std::size_t growth_resolution = 64;   ///< lattice points per axis for growth bounds
    SingularEnd g1_singular = SingularEnd::None;
    SingularEnd g2_singular = SingularEnd::None;
};

/// A full problem instance. Immutable after construction; the component
/// accessors evaluate the user expressions.
class ProblemSpec {
public:
    struct Terms {
        double p1, p2;
        std::string g1, g2, f1, f2, B1, B2;
        double b1, a2, b2;
        double h11, h12, h21, h22;
    };

    explicit ProblemSpec(const Terms& terms);

    double p(int i) const { return i == 1 ? terms_.p1 : terms_.p2; }
    double b1() const { return terms_.b1; }
    double a2() const { return terms_.a2; }
    double b2() const { return terms_.b2; }
    /// Left end of the positivity window of component i (a1 = 0).
    double window_lo(int i) const { return i == 1 ? 0.0 : terms_.a2; }
    double window_hi(int i) const { return i == 1 ? terms_.b1 : terms_.b2; }
    double h_lower(int i) const { return i == 1 ? terms_.h11 : terms_.h21; }
    double h_upper(int i) const { return i == 1 ? terms_.h12 : terms_.h22; }
    double c(int i) const;

    const Expr& g_expr(int i) const { return i == 1 ? g1_ : g2_; }
    const Expr& f_expr(int i) const { return i == 1 ? f1_ : f2_; }
    const Expr& B_expr(int i) const { return i == 1 ? B1_ : B2_; }

    double g(int i, double t) const { return g_expr(i).evaluate(Bindings().set(Var::T, t)); }
    double f(int i, double t, double u, double v) const {
        return f_expr(i).evaluate(Bindings::tuv(t, u, v));
    }
    double B(int i, double w) const { return B_expr(i).evaluate(Bindings().set(Var::W, w)); }

    const Terms& terms() const { return terms_; }

private:
    Terms terms_;
    Expr g1_, g2_, f1_, f2_, B1_, B2_;
};

struct ProblemConfig {
    ProblemSpec spec;
    NumericsSettings numerics;
};

/// Parses the INI-style configuration document (sections [problem], [cone],
/// [robin], optional [numerics]). Unknown keys are errors.
ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config(const std::string& path);

/// Configuration text of the built-in two-solution example system.
const std::string& builtin_example_config();

// ---------------------------------------------------------------------------
// Structural validation

enum class Verdict { Pass, Fail, SampledPass };

const char* to_string(Verdict verdict);

struct Witness {
    std::optional<double> t, u, v, w;
};

struct ConditionCheck {
    std::string name;  ///< "C1" .. "C4"
    Verdict verdict = Verdict::Pass;
    std::string detail;
    std::optional<Witness> witness;
    std::size_t resolution = 0;
    /// Defining integrals (C2/C3) by label, e.g. "C3.split_integral".
    std::vector<std::pair<std::string, double>> integrals;
};

struct ValidationReport {
    std::array<ConditionCheck, 4> conditions;
    double sample_radius = 0.0;
    std::size_t samples = 0;
    std::size_t sandwich_samples = 0;

    bool ok() const;
    const ConditionCheck& condition(int k) const { return conditions[static_cast<std::size_t>(k - 1)]; }
};

ValidationReport validate_spec(const ProblemSpec& spec, const NumericsSettings& numerics);

}  // namespace plapcert
