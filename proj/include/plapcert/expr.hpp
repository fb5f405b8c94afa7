#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plapcert {

enum class Var { T = 0, U = 1, V = 2, W = 3 };

const char* var_name(Var var);

struct ParseError : std::runtime_error {
    ParseError(const std::string& message, std::size_t offset)
        : std::runtime_error(message + " at byte " + std::to_string(offset)), offset(offset) {}
    std::size_t offset;
};

/// Evaluation failures: unbound variable, division by zero, domain errors.
struct EvalError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Variable bindings for evaluation. Unset variables are unbound.
class Bindings {
public:
    Bindings() = default;
    Bindings& set(Var var, double value) {
        values_[static_cast<std::size_t>(var)] = value;
        bound_[static_cast<std::size_t>(var)] = true;
        return *this;
    }
    bool is_bound(Var var) const { return bound_[static_cast<std::size_t>(var)]; }
    double get(Var var) const { return values_[static_cast<std::size_t>(var)]; }

    static Bindings tuv(double t, double u, double v) {
        return Bindings().set(Var::T, t).set(Var::U, u).set(Var::V, v);
    }

private:
    std::array<double, 4> values_{};
    std::array<bool, 4> bound_{};
};

namespace detail {

enum class NodeKind { Literal, Variable, Negate, Add, Sub, Mul, Div, Pow, Call, Piecewise };
enum class Func { Sqrt, Abs, Sgn, Min, Max, Exp, Log };
enum class Compare { Le, Lt, Ge, Gt };

struct Clause {
    bool is_else = false;
    Var var = Var::T;
    Compare op = Compare::Le;
    double threshold = 0.0;
    int body = -1;
};

struct Node {
    NodeKind kind = NodeKind::Literal;
    double literal = 0.0;
    Var var = Var::T;
    Func func = Func::Sqrt;
    std::vector<int> args;
    std::vector<Clause> clauses;
};

}  // namespace detail

/// Immutable expression tree. Copies share the same node storage.
class Expr {
public:
    Expr();

    double evaluate(const Bindings& bindings) const;
    /// Fully parenthesised text that parses back to an equivalent tree.
    std::string to_string() const;
    /// Variables that appear anywhere in the expression.
    std::vector<Var> free_variables() const;
    bool is_constant() const { return free_variables().empty(); }

private:
    friend class ExprParser;
    Expr(std::shared_ptr<const std::vector<detail::Node>> nodes, int root);

    double eval_node(int index, const Bindings& bindings) const;
    void print_node(int index, std::string& out) const;

    std::shared_ptr<const std::vector<detail::Node>> nodes_;
    int root_ = 0;
};

Expr parse_expression(std::string_view text);

inline double evaluate(const Expr& e, const Bindings& bindings) { return e.evaluate(bindings); }

/// Parses and evaluates a variable-free expression such as "2/3".
double parse_constant(std::string_view text);

}  // namespace plapcert
