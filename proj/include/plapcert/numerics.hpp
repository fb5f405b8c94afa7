#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace plapcert {

/// phi_p(w) = |w|^{p-2} w, the scalar map of the p-Laplacian.
double phi_p(double w, double p);

/// Inverse of phi_p: |w|^{1/(p-1)} sgn(w).
double phi_p_inv(double w, double p);

/// Fast evaluation of sgn(w)|w|^q for a fixed exponent. Used on hot paths
/// where the exponent is known to be valid (q = 1/(p-1) for phi_p_inv).
class SignedPower {
public:
    explicit SignedPower(double exponent);

    double exponent() const { return q_; }
    double operator()(double w) const;

    /// Exact integral over [0, width] of sgn(w)|w|^q where w varies linearly
    /// from w0 to w1. Zero crossings inside the cell are handled.
    double linear_cell_integral(double w0, double w1, double width) const;

private:
    enum class Kind { Identity, Square, Sqrt, Cube, General };
    double power_abs(double a) const;   // |a|^q
    double power_abs1(double a) const;  // |a|^{q+1}
    double q_;
    Kind kind_;
};

// ---------------------------------------------------------------------------
// Grids

class Grid {
public:
    explicit Grid(std::size_t n_intervals);

    std::size_t n_intervals() const { return n_; }
    std::size_t size() const { return n_ + 1; }
    double spacing() const { return 1.0 / static_cast<double>(n_); }
    double node(std::size_t i) const {
        return i == n_ ? 1.0 : static_cast<double>(i) / static_cast<double>(n_);
    }
    /// Index of the cell [node(k), node(k+1)] containing x (clamped).
    std::size_t cell_of(double x) const;

    bool operator==(const Grid& other) const = default;

private:
    std::size_t n_;
};

class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values);
    explicit GridFunction(Grid grid, double fill = 0.0);
    static GridFunction sample(Grid grid, const std::function<double(double)>& f);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    /// Piecewise-linear interpolation at x in [0,1].
    double at(double x) const;
    double sup_norm() const;
    /// Minimum of the piecewise-linear interpolant over [a,b].
    double min_on(double a, double b) const;
    /// Resample by linear interpolation onto another grid.
    GridFunction resampled(const Grid& target) const;

private:
    Grid grid_;
    std::vector<double> values_;
};

double sup_distance(const GridFunction& a, const GridFunction& b);

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& what, double estimate, double error)
        : std::runtime_error(what), best_estimate(estimate), error_estimate(error) {}
    double best_estimate;
    double error_estimate;
};

struct QuadratureOptions {
    double tol = 1e-10;
    int max_depth = 50;
    int min_depth = 2;
    /// Cluster nodes toward an endpoint through the substitution
    /// x = a + L s^4. Switched on automatically when the integrand is not
    /// finite at that endpoint; callers set it when they know the integrand
    /// has an algebraic derivative singularity there.
    bool cluster_left = false;
    bool cluster_right = false;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

/// Adaptive Simpson quadrature with interval bisection and absolute error
/// budget splitting. Throws QuadratureError if the maximum depth is hit
/// before the budget is met.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options);

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

/// Tabulated antiderivative x -> int_lo^x g, built panel by panel with
/// adaptive quadrature. Queries inside a panel integrate the remainder.
class Primitive {
public:
    Primitive(std::function<double(double)> g, double lo, double hi, std::size_t panels, double tol);

    double operator()(double x) const;
    double between(double x, double y) const { return (*this)(y) - (*this)(x); }
    double total() const { return cumulative_.back(); }

private:
    std::function<double(double)> g_;
    double lo_;
    double hi_;
    double width_;
    double tol_;
    std::vector<double> cumulative_;
};

/// Composite trapezoid running integral from 0; output[0] = 0.
GridFunction cumulative_integral(const GridFunction& w);

// ---------------------------------------------------------------------------
// Root finding and minimization

struct RootNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Leftmost root of h on [lo,hi]: scans scan_points equal cells left to
/// right, stops at the first sign change and bisects it to width <= tol.
double find_smallest_root(const std::function<double(double)>& h, double tol = 1e-10,
                          std::size_t scan_points = 512, double lo = 0.0, double hi = 1.0);

struct MinimumResult {
    double argmin;
    double min;
};

/// Seeded golden-section search. The seed grid picks the leftmost best node;
/// golden section refines inside its neighbouring cells.
MinimumResult minimize_1d(const std::function<double(double)>& phi, double a, double b,
                          double tol = 1e-8, std::size_t seed_points = 64);

}  // namespace plapcert
