#include "plapcert/operator.hpp"

#include <cmath>
#include <cstdio>

namespace plapcert {

StatePair::StatePair(GridFunction u, GridFunction v) : u_(std::move(u)), v_(std::move(v)) {
    if (!(u_.grid() == v_.grid())) {
        throw std::invalid_argument("StatePair: u and v live on different grids");
    }
}

StatePair StatePair::cone_profile(const Grid& grid, double alpha1, double alpha2) {
    return StatePair(GridFunction::sample(grid, [alpha1](double t) { return alpha1 * (1.0 - t); }),
                     GridFunction::sample(grid, [alpha2](double t) { return alpha2 * std::min(t, 1.0 - t); }));
}

StatePair StatePair::resampled(const Grid& target) const {
    return StatePair(u_.resampled(target), v_.resampled(target));
}

double distance(const StatePair& a, const StatePair& b) {
    return std::max(sup_distance(a.u(), b.u()), sup_distance(a.v(), b.v()));
}

// ---------------------------------------------------------------------------

namespace {

std::string at_node(const std::string& what, double t, const char* message) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " at t = %.9g: ", t);
    return what + buf + message;
}

bool singular_left(SingularEnd end) { return end == SingularEnd::Left || end == SingularEnd::Both; }
bool singular_right(SingularEnd end) { return end == SingularEnd::Right || end == SingularEnd::Both; }

}  // namespace

Operator::Operator(const ProblemSpec& spec, NumericsSettings numerics)
    : spec_(spec), numerics_(numerics), inv1_(1.0 / (spec.p(1) - 1.0)), inv2_(1.0 / (spec.p(2) - 1.0)) {}

Operator::Inner Operator::inner_integral(int i, const StatePair& state) const {
    const Grid& grid = state.grid();
    const std::size_t n = grid.n_intervals();
    const double h = grid.spacing();
    const SingularEnd singular = i == 1 ? numerics_.g1_singular : numerics_.g2_singular;
    const bool skip_first = singular_left(singular);
    const bool skip_last = singular_right(singular);
    const std::string label = "g" + std::to_string(i) + "*f" + std::to_string(i);

    auto integrand = [&](double t, double u, double v) {
        try {
            const double value = spec_.g(i, t) * spec_.f(i, t, u, v);
            if (!std::isfinite(value)) {
                throw EvalError("value is not finite");
            }
            return value;
        } catch (const EvalError& err) {
            throw OperatorError(at_node(label, t, err.what()), t);
        }
    };

    std::vector<double> samples(grid.size(), 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
        if ((k == 0 && skip_first) || (k == n && skip_last)) {
            continue;
        }
        samples[k] = integrand(grid.node(k), state.u()[k], state.v()[k]);
    }

    Inner inner;
    inner.values.assign(grid.size(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double cell;
        if ((k == 0 && skip_first) || (k + 1 == n && skip_last)) {
            const double t0 = grid.node(k);
            const double t1 = grid.node(k + 1);
            auto f = [&](double t) {
                // the singular end itself is never sampled by the clustered rule
                return spec_.g(i, t) * spec_.f(i, t, state.u().at(t), state.v().at(t));
            };
            QuadratureOptions options;
            options.tol = numerics_.quad_tol;
            options.cluster_left = k == 0 && skip_first;
            options.cluster_right = k + 1 == n && skip_last;
            try {
                cell = integrate_adaptive(f, t0, t1, options).value;
            } catch (const EvalError& err) {
                throw OperatorError(at_node(label, t0, err.what()), t0);
            }
        } else {
            cell = 0.5 * h * (samples[k] + samples[k + 1]);
        }
        inner.values[k + 1] = inner.values[k] + cell;
    }
    return inner;
}

GridFunction Operator::eval_T1(const StatePair& state) const {
    const Grid& grid = state.grid();
    const std::size_t n = grid.n_intervals();
    const double h = grid.spacing();
    const Inner inner = inner_integral(1, state);
    const auto& G = inner.values;

    double boundary;
    try {
        boundary = spec_.B(1, inv1_(G[n]));
    } catch (const EvalError& err) {
        throw OperatorError(at_node("B1", 1.0, err.what()), 1.0);
    }
    std::vector<double> out(grid.size(), 0.0);
    double tail = 0.0;
    out[n] = boundary;
    for (std::size_t k = n; k-- > 0;) {
        tail += inv1_.linear_cell_integral(G[k], G[k + 1], h);
        out[k] = tail + boundary;
    }
    return GridFunction(grid, std::move(out));
}

BranchValues Operator::branches_from(const Inner& inner, const Grid& grid, double x) const {
    const auto& G = inner.values;
    const std::size_t n = grid.n_intervals();
    const double h = grid.spacing();
    const std::size_t k = grid.cell_of(x);
    const double t0 = grid.node(k);
    const double t1 = grid.node(k + 1);
    const double Gx = G[k] + (x - t0) / h * (G[k + 1] - G[k]);

    double left = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        left += inv2_.linear_cell_integral(Gx - G[j], Gx - G[j + 1], h);
    }
    left += inv2_.linear_cell_integral(Gx - G[k], 0.0, x - t0);
    try {
        left += spec_.B(2, inv2_(Gx));
    } catch (const EvalError& err) {
        throw OperatorError(at_node("B2", x, err.what()), x);
    }

    double right = inv2_.linear_cell_integral(0.0, G[k + 1] - Gx, t1 - x);
    for (std::size_t j = k + 1; j < n; ++j) {
        right += inv2_.linear_cell_integral(G[j] - Gx, G[j + 1] - Gx, h);
    }
    return {left, right};
}

double Operator::sigma_from(const Inner& inner, const Grid& grid) const {
    const auto& G = inner.values;
    const bool degenerate = std::all_of(G.begin(), G.end(), [](double x) { return x == 0.0; });
    if (degenerate) {
        return 0.0;
    }
    auto H = [&](double x) {
        const BranchValues b = branches_from(inner, grid, x);
        return b.left - b.right;
    };
    try {
        return find_smallest_root(H, numerics_.root_tol, numerics_.scan_points);
    } catch (const RootNotFound&) {
        return 0.0;
    }
}

double Operator::sigma(const StatePair& state) const {
    return sigma_from(inner_integral(2, state), state.grid());
}

BranchValues Operator::branches(const StatePair& state, double x) const {
    return branches_from(inner_integral(2, state), state.grid(), x);
}

OperatorOutput Operator::apply(const StatePair& state) const {
    const Grid& grid = state.grid();
    const std::size_t n = grid.n_intervals();
    const double h = grid.spacing();
    const Inner inner = inner_integral(2, state);
    const auto& G = inner.values;
    const double s = sigma_from(inner, grid);

    const std::size_t ks = grid.cell_of(s);
    const double ts = grid.node(ks);
    const double Gs = G[ks] + (s - ts) / h * (G[ks + 1] - G[ks]);
    double boundary;
    try {
        boundary = spec_.B(2, inv2_(Gs));
    } catch (const EvalError& err) {
        throw OperatorError(at_node("B2", s, err.what()), s);
    }

    std::vector<double> out(grid.size(), 0.0);
    // left branch on nodes t_k <= sigma
    double head = 0.0;
    std::size_t k = 0;
    for (; k <= n && grid.node(k) <= s; ++k) {
        out[k] = head + boundary;
        if (k < n) {
            head += inv2_.linear_cell_integral(Gs - G[k], Gs - G[k + 1], h);
        }
    }
    // right branch on nodes t_k > sigma
    double tail = 0.0;
    for (std::size_t j = n; j-- > k;) {
        tail += inv2_.linear_cell_integral(G[j] - Gs, G[j + 1] - Gs, h);
        out[j] = tail;
    }

    const BranchValues at_sigma = branches_from(inner, grid, s);
    OperatorOutput output{eval_T1(state), GridFunction(grid, std::move(out)), s,
                          std::fabs(at_sigma.left - at_sigma.right)};
    return output;
}

double Operator::residual(const StatePair& state) const {
    const OperatorOutput T = apply(state);
    return std::max(sup_distance(state.u(), T.Tu), sup_distance(state.v(), T.Tv));
}

GridFunction eval_T1(const ProblemSpec& spec, const StatePair& state, const NumericsSettings& numerics) {
    return Operator(spec, numerics).eval_T1(state);
}

double sigma(const ProblemSpec& spec, const StatePair& state, const NumericsSettings& numerics) {
    return Operator(spec, numerics).sigma(state);
}

OperatorOutput eval_T2(const ProblemSpec& spec, const StatePair& state, const NumericsSettings& numerics) {
    return Operator(spec, numerics).apply(state);
}

double residual(const ProblemSpec& spec, const StatePair& state, const NumericsSettings& numerics) {
    return Operator(spec, numerics).residual(state);
}

// ---------------------------------------------------------------------------

namespace {

void record(ConeCheck& check, double violation, double t, double tol) {
    if (violation > check.worst_violation) {
        check.worst_violation = violation;
        if (violation > tol) {
            check.pass = false;
            check.witness_t = t;
        }
    }
}

ConeCheck window_check(const GridFunction& w, double a, double b, double c, double tol) {
    ConeCheck check;
    const double lower = w.min_on(a, b);
    const double violation = c * w.sup_norm() - lower;
    if (violation > 0.0) {
        check.worst_violation = violation;
        if (violation > tol) {
            check.pass = false;
            check.witness_t = w.at(a) <= w.at(b) ? a : b;
        }
    }
    return check;
}

}  // namespace

bool ConeReport::pass() const {
    bool ok = nonneg_u.pass && nonneg_v.pass && nonincreasing_u.pass && concave_u.pass &&
              concave_v.pass && lower_bound_u.pass && lower_bound_v.pass;
    if (window_u) ok = ok && window_u->pass;
    if (window_v) ok = ok && window_v->pass;
    return ok;
}

ConeReport cone_membership(const StatePair& state, double tol, const std::optional<ConeWindow>& window) {
    ConeReport report;
    report.tol = tol;
    const Grid& grid = state.grid();
    const auto& u = state.u();
    const auto& v = state.v();
    const double u_norm = u.sup_norm();
    const double v_norm = v.sup_norm();
    const std::size_t n = grid.n_intervals();
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = grid.node(i);
        record(report.nonneg_u, -u[i], t, tol);
        record(report.nonneg_v, -v[i], t, tol);
        record(report.lower_bound_u, (1.0 - t) * u_norm - u[i], t, tol);
        record(report.lower_bound_v, std::min(t, 1.0 - t) * v_norm - v[i], t, tol);
        if (i < n) {
            record(report.nonincreasing_u, u[i + 1] - u[i], t, tol);
        }
        if (i > 0 && i < n) {
            record(report.concave_u, u[i - 1] - 2.0 * u[i] + u[i + 1], t, tol);
            record(report.concave_v, v[i - 1] - 2.0 * v[i] + v[i + 1], t, tol);
        }
    }
    if (window) {
        report.window_u = window_check(u, 0.0, window->b1, window->c1(), tol);
        report.window_v = window_check(v, window->a2, window->b2, window->c2(), tol);
    }
    return report;
}

ConeWindow cone_window(const ProblemSpec& spec) { return ConeWindow{spec.b1(), spec.a2(), spec.b2()}; }

}  // namespace plapcert
