#include "plapcert/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plapcert {

namespace {

void check_power_args(double w, double p) {
    if (!std::isfinite(w)) {
        throw std::domain_error("phi_p: argument is not finite");
    }
    if (!std::isfinite(p) || p <= 1.0) {
        throw std::domain_error("phi_p: exponent p must be a finite real > 1");
    }
}

}  // namespace

double phi_p(double w, double p) {
    check_power_args(w, p);
    if (w == 0.0) {
        return 0.0;
    }
    return std::pow(std::fabs(w), p - 2.0) * w;
}

double phi_p_inv(double w, double p) {
    check_power_args(w, p);
    if (w == 0.0) {
        return 0.0;
    }
    const double magnitude = std::pow(std::fabs(w), 1.0 / (p - 1.0));
    return w > 0.0 ? magnitude : -magnitude;
}

// ---------------------------------------------------------------------------

SignedPower::SignedPower(double exponent) : q_(exponent) {
    if (!std::isfinite(exponent) || exponent <= 0.0) {
        throw std::domain_error("SignedPower: exponent must be positive");
    }
    if (exponent == 1.0) {
        kind_ = Kind::Identity;
    } else if (exponent == 2.0) {
        kind_ = Kind::Square;
    } else if (exponent == 0.5) {
        kind_ = Kind::Sqrt;
    } else if (exponent == 3.0) {
        kind_ = Kind::Cube;
    } else {
        kind_ = Kind::General;
    }
}

double SignedPower::power_abs(double a) const {
    switch (kind_) {
        case Kind::Identity: return a;
        case Kind::Square: return a * a;
        case Kind::Sqrt: return std::sqrt(a);
        case Kind::Cube: return a * a * a;
        case Kind::General: break;
    }
    return a == 0.0 ? 0.0 : std::pow(a, q_);
}

double SignedPower::power_abs1(double a) const {
    switch (kind_) {
        case Kind::Identity: return a * a;
        case Kind::Square: return a * a * a;
        case Kind::Sqrt: return a * std::sqrt(a);
        case Kind::Cube: return a * a * a * a;
        case Kind::General: break;
    }
    return a == 0.0 ? 0.0 : std::pow(a, q_ + 1.0);
}

double SignedPower::operator()(double w) const {
    const double magnitude = power_abs(std::fabs(w));
    return w < 0.0 ? -magnitude : magnitude;
}

double SignedPower::linear_cell_integral(double w0, double w1, double width) const {
    if (width <= 0.0) {
        return 0.0;
    }
    if ((w0 < 0.0 && w1 > 0.0) || (w0 > 0.0 && w1 < 0.0)) {
        const double zero_at = width * w0 / (w0 - w1);
        return linear_cell_integral(w0, 0.0, zero_at) + linear_cell_integral(0.0, w1, width - zero_at);
    }
    const double sign = (w0 + w1) < 0.0 ? -1.0 : 1.0;
    const double a = std::fabs(w0);
    const double b = std::fabs(w1);
    const double top = std::max(a, b);
    if (top == 0.0) {
        return 0.0;
    }
    const double diff = b - a;
    if (std::fabs(diff) > 1e-4 * top) {
        return sign * width * (power_abs1(b) - power_abs1(a)) / ((q_ + 1.0) * diff);
    }
    // mean of (m+x)^q over |x| <= d, expanded in (d/m)
    const double m = 0.5 * (a + b);
    const double r = 0.5 * diff / m;
    const double r2 = r * r;
    const double series = 1.0 + q_ * (q_ - 1.0) / 6.0 * r2 +
                          q_ * (q_ - 1.0) * (q_ - 2.0) * (q_ - 3.0) / 120.0 * r2 * r2;
    return sign * width * power_abs(m) * series;
}

// ---------------------------------------------------------------------------

Grid::Grid(std::size_t n_intervals) : n_(n_intervals) {
    if (n_intervals == 0) {
        throw std::invalid_argument("Grid: n_intervals must be positive");
    }
}

std::size_t Grid::cell_of(double x) const {
    if (!(x > 0.0)) {
        return 0;
    }
    const auto k = static_cast<std::size_t>(std::floor(x * static_cast<double>(n_)));
    return std::min(k, n_ - 1);
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("GridFunction: value count does not match grid");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::domain_error("GridFunction: non-finite value");
        }
    }
}

GridFunction::GridFunction(Grid grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

GridFunction GridFunction::sample(Grid grid, const std::function<double(double)>& f) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = f(grid.node(i));
    }
    return GridFunction(grid, std::move(values));
}

double GridFunction::at(double x) const {
    x = std::clamp(x, 0.0, 1.0);
    const std::size_t k = grid_.cell_of(x);
    const double t0 = grid_.node(k);
    const double lambda = (x - t0) / grid_.spacing();
    return values_[k] + lambda * (values_[k + 1] - values_[k]);
}

double GridFunction::sup_norm() const {
    double best = 0.0;
    for (double v : values_) {
        best = std::max(best, std::fabs(v));
    }
    return best;
}

double GridFunction::min_on(double a, double b) const {
    double best = std::min(at(a), at(b));
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double t = grid_.node(i);
        if (t > a && t < b) {
            best = std::min(best, values_[i]);
        }
    }
    return best;
}

GridFunction GridFunction::resampled(const Grid& target) const {
    return sample(target, [this](double t) { return at(t); });
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid() == b.grid())) {
        throw std::invalid_argument("sup_distance: grids differ");
    }
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        best = std::max(best, std::fabs(a[i] - b[i]));
    }
    return best;
}

// ---------------------------------------------------------------------------

namespace {

struct SimpsonRun {
    const std::function<double(double)>& f;
    int max_depth;
    int min_depth;
    std::size_t evaluations = 0;
    double error_sum = 0.0;
    bool exhausted = false;

    double eval(double x) {
        ++evaluations;
        const double y = f(x);
        if (!std::isfinite(y)) {
            throw QuadratureError("integrand is not finite at x = " + std::to_string(x), 0.0,
                                  std::numeric_limits<double>::infinity());
        }
        return y;
    }

    double refine(double a, double fa, double m, double fm, double b, double fb, double whole,
                  double tol, int depth) {
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double sum = left + right;
        const double delta = sum - whole;
        const bool resolved = !(lm > a && m > lm && rm > m && b > rm);
        const bool roundoff = std::fabs(delta) <= 64.0 * std::numeric_limits<double>::epsilon() *
                                                      (std::fabs(left) + std::fabs(right));
        if (resolved || (depth >= min_depth && (std::fabs(delta) <= 15.0 * tol || roundoff))) {
            error_sum += std::fabs(delta) / 15.0;
            return sum + delta / 15.0;
        }
        if (depth >= max_depth) {
            exhausted = true;
            error_sum += std::fabs(delta) / 15.0;
            return sum + delta / 15.0;
        }
        return refine(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
               refine(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
    }

    double run(double a, double b, double tol) {
        const double fa = eval(a);
        const double fb = eval(b);
        const double m = 0.5 * (a + b);
        const double fm = eval(m);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return refine(a, fa, m, fm, b, fb, whole, tol, 0);
    }
};

bool finite_at(const std::function<double(double)>& f, double x) {
    try {
        return std::isfinite(f(x));
    } catch (const std::domain_error&) {
        return false;
    }
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options) {
    if (!(a <= b)) {
        throw std::invalid_argument("integrate: requires a <= b");
    }
    if (!(options.tol > 0.0)) {
        throw std::invalid_argument("integrate: tolerance must be positive");
    }
    QuadratureResult result;
    if (a == b) {
        return result;
    }
    const bool left = options.cluster_left || !finite_at(f, a);
    const bool right = options.cluster_right || !finite_at(f, b);
    result.evaluations = (left ? 0 : 1) + (right ? 0 : 1);

    auto accumulate = [&](const std::function<double(double)>& g, double lo, double hi, double tol) {
        SimpsonRun run{g, options.max_depth, options.min_depth};
        const double value = run.run(lo, hi, tol);
        result.value += value;
        result.error_estimate += run.error_sum;
        result.evaluations += run.evaluations;
        if (run.exhausted) {
            throw QuadratureError("integrate: maximum refinement depth reached", result.value,
                                  result.error_estimate);
        }
    };

    if (!left && !right) {
        accumulate(f, a, b, options.tol);
        return result;
    }
    // x = end -/+ L s^4 maps s in [0,1] onto a half with nodes clustered at end
    auto clustered = [&f](double end, double length) {
        return std::function<double(double)>([&f, end, length](double s) {
            if (s == 0.0) {
                return 0.0;
            }
            const double s3 = s * s * s;
            return f(end + length * s3 * s) * 4.0 * std::fabs(length) * s3;
        });
    };
    if (left && right) {
        const double m = 0.5 * (a + b);
        accumulate(clustered(a, m - a), 0.0, 1.0, 0.5 * options.tol);
        accumulate(clustered(b, m - b), 0.0, 1.0, 0.5 * options.tol);
    } else if (left) {
        accumulate(clustered(a, b - a), 0.0, 1.0, options.tol);
    } else {
        accumulate(clustered(b, a - b), 0.0, 1.0, options.tol);
    }
    return result;
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    QuadratureOptions options;
    options.tol = tol;
    return integrate_adaptive(f, a, b, options).value;
}

Primitive::Primitive(std::function<double(double)> g, double lo, double hi, std::size_t panels,
                     double tol)
    : g_(std::move(g)), lo_(lo), hi_(hi), width_((hi - lo) / static_cast<double>(panels)),
      tol_(tol / static_cast<double>(panels)), cumulative_(panels + 1, 0.0) {
    if (!(hi > lo) || panels == 0) {
        throw std::invalid_argument("Primitive: requires lo < hi and panels > 0");
    }
    QuadratureOptions options;
    options.tol = tol_;
    for (std::size_t k = 0; k < panels; ++k) {
        const double x0 = lo_ + width_ * static_cast<double>(k);
        const double x1 = k + 1 == panels ? hi_ : x0 + width_;
        cumulative_[k + 1] = cumulative_[k] + integrate_adaptive(g_, x0, x1, options).value;
    }
}

double Primitive::operator()(double x) const {
    x = std::clamp(x, lo_, hi_);
    const std::size_t panels = cumulative_.size() - 1;
    auto k = static_cast<std::size_t>(std::floor((x - lo_) / width_));
    k = std::min(k, panels - 1);
    const double x0 = lo_ + width_ * static_cast<double>(k);
    if (x <= x0) {
        return cumulative_[k];
    }
    QuadratureOptions options;
    options.tol = tol_;
    options.min_depth = 0;
    return cumulative_[k] + integrate_adaptive(g_, x0, x, options).value;
}

GridFunction cumulative_integral(const GridFunction& w) {
    const Grid& grid = w.grid();
    std::vector<double> out(grid.size(), 0.0);
    const double half_h = 0.5 * grid.spacing();
    for (std::size_t i = 1; i < out.size(); ++i) {
        out[i] = out[i - 1] + half_h * (w[i - 1] + w[i]);
    }
    return GridFunction(grid, std::move(out));
}

// ---------------------------------------------------------------------------

namespace {

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

double find_smallest_root(const std::function<double(double)>& h, double tol,
                          std::size_t scan_points, double lo, double hi) {
    if (scan_points == 0 || !(hi > lo) || !(tol > 0.0)) {
        throw std::invalid_argument("find_smallest_root: invalid arguments");
    }
    double x_prev = lo;
    double h_prev = h(lo);
    if (h_prev == 0.0) {
        return lo;
    }
    const double step = (hi - lo) / static_cast<double>(scan_points);
    for (std::size_t k = 1; k <= scan_points; ++k) {
        const double x = k == scan_points ? hi : lo + step * static_cast<double>(k);
        const double hx = h(x);
        if (hx == 0.0) {
            return x;
        }
        if (sign_of(hx) != sign_of(h_prev)) {
            double left = x_prev;
            double right = x;
            const int left_sign = sign_of(h_prev);
            while (right - left > tol) {
                const double mid = 0.5 * (left + right);
                if (mid <= left || mid >= right) {
                    break;
                }
                const double hm = h(mid);
                if (hm == 0.0) {
                    return mid;
                }
                if (sign_of(hm) == left_sign) {
                    left = mid;
                } else {
                    right = mid;
                }
            }
            return 0.5 * (left + right);
        }
        x_prev = x;
        h_prev = hx;
    }
    throw RootNotFound("find_smallest_root: no sign change on the scan grid");
}

MinimumResult minimize_1d(const std::function<double(double)>& phi, double a, double b, double tol,
                          std::size_t seed_points) {
    if (!(b > a) || seed_points == 0) {
        throw std::invalid_argument("minimize_1d: requires a < b");
    }
    const double step = (b - a) / static_cast<double>(seed_points);
    auto node = [&](std::size_t k) { return k == seed_points ? b : a + step * static_cast<double>(k); };

    std::size_t best_k = 0;
    double best = phi(a);
    for (std::size_t k = 1; k <= seed_points; ++k) {
        const double value = phi(node(k));
        if (value < best) {
            best = value;
            best_k = k;
        }
    }
    double lo = node(best_k == 0 ? 0 : best_k - 1);
    double hi = node(std::min(best_k + 1, seed_points));

    constexpr double inv_golden = 0.6180339887498949;
    double c = hi - inv_golden * (hi - lo);
    double d = lo + inv_golden * (hi - lo);
    double fc = phi(c);
    double fd = phi(d);
    while (hi - lo > tol) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_golden * (hi - lo);
            fc = phi(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_golden * (hi - lo);
            fd = phi(d);
        }
    }
    MinimumResult result{node(best_k), best};
    const double candidate = fc <= fd ? c : d;
    const double candidate_value = std::min(fc, fd);
    if (candidate_value < result.min) {
        result = {candidate, candidate_value};
    }
    return result;
}

}  // namespace plapcert
