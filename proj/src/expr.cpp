#include "plapcert/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace plapcert {

using detail::Clause;
using detail::Compare;
using detail::Func;
using detail::Node;
using detail::NodeKind;

const char* var_name(Var var) {
    switch (var) {
        case Var::T: return "t";
        case Var::U: return "u";
        case Var::V: return "v";
        case Var::W: return "w";
    }
    return "?";
}

namespace {

struct FuncInfo {
    const char* name;
    Func func;
    std::size_t arity;
};

constexpr FuncInfo kFunctions[] = {
    {"sqrt", Func::Sqrt, 1}, {"abs", Func::Abs, 1}, {"sgn", Func::Sgn, 1}, {"min", Func::Min, 2},
    {"max", Func::Max, 2},   {"exp", Func::Exp, 1}, {"log", Func::Log, 1},
};

const char* func_name(Func func) {
    for (const auto& info : kFunctions) {
        if (info.func == func) {
            return info.name;
        }
    }
    return "?";
}

const char* compare_text(Compare op) {
    switch (op) {
        case Compare::Le: return "<=";
        case Compare::Lt: return "<";
        case Compare::Ge: return ">=";
        case Compare::Gt: return ">";
    }
    return "?";
}

std::string format_literal(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parser
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | var | func '(' expr [',' expr] ')' | '(' expr ')'
//            | 'piecewise' '(' clause (',' clause)* ')'
//   clause  := '(' (var cmp expr | 'else') ',' expr ')'

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    Expr parse() {
        const int root = parse_expr();
        skip_space();
        if (pos_ != text_.size()) {
            throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
        }
        return Expr(std::make_shared<const std::vector<Node>>(std::move(nodes_)), root);
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) {
                throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
            }
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    int push(Node node) {
        nodes_.push_back(std::move(node));
        return static_cast<int>(nodes_.size()) - 1;
    }

    int binary(NodeKind kind, int lhs, int rhs) {
        Node node;
        node.kind = kind;
        node.args = {lhs, rhs};
        return push(std::move(node));
    }

    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = binary(NodeKind::Add, lhs, parse_term());
            } else if (accept('-')) {
                lhs = binary(NodeKind::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    int parse_term() {
        int lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = binary(NodeKind::Mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = binary(NodeKind::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    int parse_unary() {
        if (accept('-')) {
            Node node;
            node.kind = NodeKind::Negate;
            node.args = {parse_unary()};
            return push(std::move(node));
        }
        if (accept('+')) {
            return parse_unary();
        }
        return parse_power();
    }

    int parse_power() {
        const int base = parse_primary();
        if (accept('^')) {
            return binary(NodeKind::Pow, base, parse_unary());
        }
        return base;
    }

    std::string read_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    static bool lookup_var(const std::string& name, Var& var) {
        if (name == "t") var = Var::T;
        else if (name == "u") var = Var::U;
        else if (name == "v") var = Var::V;
        else if (name == "w") var = Var::W;
        else return false;
        return true;
    }

    int parse_number() {
        const std::size_t start = pos_;
        const std::string rest(text_.substr(pos_));
        char* end = nullptr;
        const double value = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str()) {
            throw ParseError("malformed number", start);
        }
        pos_ += static_cast<std::size_t>(end - rest.c_str());
        Node node;
        node.kind = NodeKind::Literal;
        node.literal = value;
        return push(std::move(node));
    }

    int parse_primary() {
        skip_space();
        if (pos_ >= text_.size()) {
            throw ParseError("unexpected end of input", pos_);
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (accept('(')) {
            const int inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            const std::string name = read_identifier();
            Var var;
            if (lookup_var(name, var)) {
                Node node;
                node.kind = NodeKind::Variable;
                node.var = var;
                return push(std::move(node));
            }
            if (name == "piecewise") {
                return parse_piecewise();
            }
            for (const auto& info : kFunctions) {
                if (name == info.name) {
                    return parse_call(info, start);
                }
            }
            throw ParseError("unknown identifier '" + name + "'", start);
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    int parse_call(const FuncInfo& info, std::size_t start) {
        expect('(');
        Node node;
        node.kind = NodeKind::Call;
        node.func = info.func;
        node.args.push_back(parse_expr());
        while (accept(',')) {
            node.args.push_back(parse_expr());
        }
        expect(')');
        if (node.args.size() != info.arity) {
            throw ParseError(std::string(info.name) + " takes " + std::to_string(info.arity) +
                                 " argument(s)",
                             start);
        }
        return push(std::move(node));
    }

    Compare parse_compare() {
        skip_space();
        const std::size_t at = pos_;
        if (accept('<')) {
            return (pos_ < text_.size() && text_[pos_] == '=') ? (++pos_, Compare::Le) : Compare::Lt;
        }
        if (accept('>')) {
            return (pos_ < text_.size() && text_[pos_] == '=') ? (++pos_, Compare::Ge) : Compare::Gt;
        }
        throw ParseError("expected comparison operator", at);
    }

    int parse_piecewise() {
        expect('(');
        Node node;
        node.kind = NodeKind::Piecewise;
        do {
            expect('(');
            skip_space();
            const std::size_t clause_start = pos_;
            Clause clause;
            const std::string head = read_identifier();
            if (head == "else") {
                clause.is_else = true;
            } else if (lookup_var(head, clause.var)) {
                clause.op = parse_compare();
                skip_space();
                const std::size_t threshold_start = pos_;
                const int threshold = parse_expr();
                const Expr probe(std::make_shared<const std::vector<Node>>(nodes_), threshold);
                if (!probe.is_constant()) {
                    throw ParseError("piecewise threshold must be a constant", threshold_start);
                }
                clause.threshold = probe.evaluate(Bindings());
            } else {
                throw ParseError("piecewise condition must start with a variable or 'else'",
                                 clause_start);
            }
            expect(',');
            clause.body = parse_expr();
            expect(')');
            if (!node.clauses.empty() && node.clauses.back().is_else) {
                throw ParseError("'else' clause must be last", clause_start);
            }
            node.clauses.push_back(clause);
        } while (accept(','));
        expect(')');
        return push(std::move(node));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<Node> nodes_;
};

// ---------------------------------------------------------------------------

Expr::Expr() {
    Node zero;
    zero.kind = NodeKind::Literal;
    nodes_ = std::make_shared<const std::vector<Node>>(std::vector<Node>{zero});
}

Expr::Expr(std::shared_ptr<const std::vector<Node>> nodes, int root)
    : nodes_(std::move(nodes)), root_(root) {}

double Expr::evaluate(const Bindings& bindings) const { return eval_node(root_, bindings); }

double Expr::eval_node(int index, const Bindings& b) const {
    const Node& node = (*nodes_)[static_cast<std::size_t>(index)];
    auto arg = [&](std::size_t k) { return eval_node(node.args[k], b); };
    switch (node.kind) {
        case NodeKind::Literal:
            return node.literal;
        case NodeKind::Variable:
            if (!b.is_bound(node.var)) {
                throw EvalError(std::string("unbound variable '") + var_name(node.var) + "'");
            }
            return b.get(node.var);
        case NodeKind::Negate:
            return -arg(0);
        case NodeKind::Add:
            return arg(0) + arg(1);
        case NodeKind::Sub:
            return arg(0) - arg(1);
        case NodeKind::Mul:
            return arg(0) * arg(1);
        case NodeKind::Div: {
            const double num = arg(0);
            const double den = arg(1);
            if (den == 0.0) {
                throw EvalError("division by zero");
            }
            return num / den;
        }
        case NodeKind::Pow: {
            const double base = arg(0);
            const double exponent = arg(1);
            if (base == 0.0 && exponent < 0.0) {
                throw EvalError("division by zero (zero raised to a negative power)");
            }
            const double result = std::pow(base, exponent);
            if (std::isnan(result)) {
                throw EvalError("domain error in '^' (negative base with fractional exponent)");
            }
            return result;
        }
        case NodeKind::Call: {
            const double x = arg(0);
            switch (node.func) {
                case Func::Sqrt:
                    if (x < 0.0) throw EvalError("domain error: sqrt of negative value");
                    return std::sqrt(x);
                case Func::Abs: return std::fabs(x);
                case Func::Sgn: return static_cast<double>((x > 0.0) - (x < 0.0));
                case Func::Min: return std::min(x, arg(1));
                case Func::Max: return std::max(x, arg(1));
                case Func::Exp: return std::exp(x);
                case Func::Log:
                    if (x <= 0.0) throw EvalError("domain error: log of nonpositive value");
                    return std::log(x);
            }
            break;
        }
        case NodeKind::Piecewise:
            for (const Clause& clause : node.clauses) {
                if (clause.is_else) {
                    return eval_node(clause.body, b);
                }
                if (!b.is_bound(clause.var)) {
                    throw EvalError(std::string("unbound variable '") + var_name(clause.var) + "'");
                }
                const double x = b.get(clause.var);
                bool taken = false;
                switch (clause.op) {
                    case Compare::Le: taken = x <= clause.threshold; break;
                    case Compare::Lt: taken = x < clause.threshold; break;
                    case Compare::Ge: taken = x >= clause.threshold; break;
                    case Compare::Gt: taken = x > clause.threshold; break;
                }
                if (taken) {
                    return eval_node(clause.body, b);
                }
            }
            throw EvalError("piecewise: no clause matched");
    }
    throw EvalError("corrupt expression node");
}

void Expr::print_node(int index, std::string& out) const {
    const Node& node = (*nodes_)[static_cast<std::size_t>(index)];
    auto infix = [&](const char* op) {
        out += '(';
        print_node(node.args[0], out);
        out += op;
        print_node(node.args[1], out);
        out += ')';
    };
    switch (node.kind) {
        case NodeKind::Literal:
            if (node.literal < 0.0) {
                out += "(" + format_literal(node.literal) + ")";
            } else {
                out += format_literal(node.literal);
            }
            return;
        case NodeKind::Variable: out += var_name(node.var); return;
        case NodeKind::Negate:
            out += "(-";
            print_node(node.args[0], out);
            out += ')';
            return;
        case NodeKind::Add: infix(" + "); return;
        case NodeKind::Sub: infix(" - "); return;
        case NodeKind::Mul: infix("*"); return;
        case NodeKind::Div: infix("/"); return;
        case NodeKind::Pow: infix("^"); return;
        case NodeKind::Call:
            out += func_name(node.func);
            out += '(';
            for (std::size_t k = 0; k < node.args.size(); ++k) {
                if (k > 0) out += ", ";
                print_node(node.args[k], out);
            }
            out += ')';
            return;
        case NodeKind::Piecewise:
            out += "piecewise(";
            for (std::size_t k = 0; k < node.clauses.size(); ++k) {
                const Clause& clause = node.clauses[k];
                if (k > 0) out += ", ";
                out += '(';
                if (clause.is_else) {
                    out += "else";
                } else {
                    out += var_name(clause.var);
                    out += ' ';
                    out += compare_text(clause.op);
                    out += ' ';
                    out += clause.threshold < 0.0 ? "(" + format_literal(clause.threshold) + ")"
                                                  : format_literal(clause.threshold);
                }
                out += ", ";
                print_node(clause.body, out);
                out += ')';
            }
            out += ')';
            return;
    }
}

std::string Expr::to_string() const {
    std::string out;
    print_node(root_, out);
    return out;
}

std::vector<Var> Expr::free_variables() const {
    std::array<bool, 4> seen{};
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        const Node& node = (*nodes_)[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        if (node.kind == NodeKind::Variable) {
            seen[static_cast<std::size_t>(node.var)] = true;
        }
        for (int child : node.args) stack.push_back(child);
        for (const Clause& clause : node.clauses) {
            if (!clause.is_else) seen[static_cast<std::size_t>(clause.var)] = true;
            stack.push_back(clause.body);
        }
    }
    std::vector<Var> vars;
    for (std::size_t k = 0; k < seen.size(); ++k) {
        if (seen[k]) vars.push_back(static_cast<Var>(k));
    }
    return vars;
}

Expr parse_expression(std::string_view text) { return ExprParser(text).parse(); }

double parse_constant(std::string_view text) {
    const Expr e = parse_expression(text);
    if (!e.is_constant()) {
        throw ParseError("expected a constant expression", 0);
    }
    return e.evaluate(Bindings());
}

}  // namespace plapcert
