#include <cmath>
#include <random>

#include "doctest.h"
#include "plapcert/numerics.hpp"

using namespace plapcert;

TEST_CASE("phi_p examples") {
    CHECK(phi_p(0.0, 1.5) == 0.0);
    for (double x : {-3.0, -0.25, 0.0, 1.0, 17.5}) {
        CHECK(phi_p(x, 2.0) == x);
    }
    CHECK(phi_p(4.0, 1.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(phi_p(-4.0, 1.5) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(phi_p(3.0, 3.0) == doctest::Approx(9.0));
}

TEST_CASE("phi_p_inv examples") {
    CHECK(phi_p_inv(0.0, 3.0) == 0.0);
    CHECK(phi_p_inv(4.0, 3.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(phi_p_inv(-4.0, 3.0) == doctest::Approx(-2.0).epsilon(1e-15));
    for (double p : {1.5, 2.0, 3.0}) {
        for (double x : {-2.0, 0.5, 7.0}) {
            CHECK(phi_p_inv(phi_p(x, p), p) == doctest::Approx(x).epsilon(1e-14));
        }
    }
}

TEST_CASE("phi_p domain errors") {
    CHECK_THROWS_AS(phi_p(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(phi_p(1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(phi_p(NAN, 2.0), std::domain_error);
    CHECK_THROWS_AS(phi_p(INFINITY, 2.0), std::domain_error);
    CHECK_THROWS_AS(phi_p_inv(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(phi_p_inv(NAN, 3.0), std::domain_error);
}

TEST_CASE("property: inverse identity and strict monotonicity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> w(-10.0, 10.0);
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        for (int k = 0; k < 500; ++k) {
            const double x = w(rng);
            const double back = phi_p_inv(phi_p(x, p), p);
            CHECK(std::fabs(back - x) <= 1e-12 * std::max(std::fabs(x), 1e-300));
            const double y = w(rng);
            if (x < y) CHECK(phi_p(x, p) < phi_p(y, p));
            if (y < x) CHECK(phi_p(y, p) < phi_p(x, p));
        }
    }
}

TEST_CASE("SignedPower matches phi_p_inv and integrates linear cells exactly") {
    for (double p : {1.5, 2.0, 3.0, 4.0, 1.7}) {
        const SignedPower inv(1.0 / (p - 1.0));
        for (double x : {-5.0, -0.3, 0.0, 0.01, 2.0, 9.0}) {
            CHECK(inv(x) == doctest::Approx(phi_p_inv(x, p)).epsilon(1e-14));
        }
        const double q = 1.0 / (p - 1.0);
        // w runs linearly from 0.5 to 2 over width 0.1
        const double exact = 0.1 * (std::pow(2.0, q + 1) - std::pow(0.5, q + 1)) / ((q + 1) * 1.5);
        CHECK(inv.linear_cell_integral(0.5, 2.0, 0.1) == doctest::Approx(exact).epsilon(1e-13));
        CHECK(inv.linear_cell_integral(2.0, 0.5, 0.1) == doctest::Approx(exact).epsilon(1e-13));
        // symmetric zero crossing cancels
        CHECK(std::fabs(inv.linear_cell_integral(-1.0, 1.0, 0.3)) < 1e-15);
        // nearly constant cell
        CHECK(inv.linear_cell_integral(1.0, 1.0 + 1e-9, 0.2) == doctest::Approx(0.2).epsilon(1e-8));
        // crossing with quadrature as oracle
        const double w0 = -0.4, w1 = 1.3, width = 0.7;
        auto lin = [&](double s) { return phi_p_inv(w0 + (w1 - w0) * s / width, p); };
        const double zero = -w0 * width / (w1 - w0);
        QuadratureOptions options;
        options.tol = 1e-13;
        options.cluster_left = options.cluster_right = true;
        const double oracle = integrate_adaptive(lin, 0.0, zero, options).value +
                              integrate_adaptive(lin, zero, width, options).value;
        CHECK(inv.linear_cell_integral(w0, w1, width) == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("Grid nodes") {
    const Grid g(4);
    CHECK(g.size() == 5);
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(4) == 1.0);
    CHECK(g.spacing() == 0.25);
    CHECK(g.cell_of(0.0) == 0);
    CHECK(g.cell_of(0.3) == 1);
    CHECK(g.cell_of(1.0) == 3);
    CHECK_THROWS_AS(Grid(0), std::invalid_argument);
    const Grid big(1000);
    for (std::size_t i = 1; i <= 1000; ++i) {
        CHECK(big.node(i) > big.node(i - 1));
    }
}

TEST_CASE("GridFunction interpolation, minima and resampling") {
    const Grid g(4);
    const GridFunction w = GridFunction::sample(g, [](double t) { return 1.0 - t; });
    CHECK(w.at(0.125) == doctest::Approx(0.875));
    CHECK(w.sup_norm() == 1.0);
    CHECK(w.min_on(0.0, 0.6) == doctest::Approx(0.4));
    const GridFunction fine = w.resampled(Grid(8));
    CHECK(fine[3] == doctest::Approx(1.0 - 3.0 / 8.0));
    CHECK_THROWS_AS(GridFunction(g, std::vector<double>{1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(GridFunction(g, std::vector<double>{0, 0, NAN, 0, 0}), std::domain_error);
}

TEST_CASE("integrate examples") {
    CHECK(integrate([](double t) { return t; }, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(integrate([](double t) { return 1.0 / ((t - 1.0) * (t - 1.0)); }, 0.0, 0.5) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(integrate([](double) { return 0.0; }, 0.0, 1.0) == 0.0);
    CHECK(integrate([](double t) { return t; }, 0.3, 0.3) == 0.0);
}

TEST_CASE("integrate handles integrable endpoint singularities") {
    // not finite at 0: clustering switches on by itself
    CHECK(integrate([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0, 1e-10) ==
          doctest::Approx(2.0).epsilon(1e-9));
    // finite but with an infinite derivative, clustering requested
    QuadratureOptions options;
    options.tol = 1e-11;
    options.cluster_right = true;
    const auto r = integrate_adaptive([](double t) { return std::sqrt(1.0 - t); }, 0.0, 1.0, options);
    CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("integrate reports non-convergence with the best estimate") {
    QuadratureOptions options;
    options.tol = 1e-10;
    options.max_depth = 20;
    try {
        integrate_adaptive([](double t) { return 1.0 / t; }, 0.0, 1.0, options);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& err) {
        CHECK(std::isfinite(err.best_estimate));
        CHECK(err.error_estimate > 0.0);
    }
    CHECK_THROWS_AS(integrate([](double t) { return t; }, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("property: observed error stays below the reported bound") {
    struct Case {
        double (*f)(double);
        double a, b, exact;
    };
    const Case cases[] = {
        {[](double x) { return std::exp(x); }, 0.0, 1.0, std::exp(1.0) - 1.0},
        {[](double x) { return std::cos(x); }, 0.0, 2.0, std::sin(2.0)},
        {[](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0, std::atan(1.0)},
    };
    for (const auto& c : cases) {
        double previous = 1.0;
        for (double tol : {1e-4, 1e-6, 1e-8, 1e-10}) {
            QuadratureOptions options;
            options.tol = tol;
            const auto r = integrate_adaptive(c.f, c.a, c.b, options);
            const double err = std::fabs(r.value - c.exact);
            CHECK(err <= tol);
            CHECK(r.error_estimate <= previous);
            previous = std::max(r.error_estimate, 1e-300);
        }
    }
}

TEST_CASE("Primitive tabulates antiderivatives") {
    const Primitive P([](double t) { return std::cos(t); }, 0.0, 1.0, 64, 1e-12);
    for (double x : {0.0, 0.013, 0.5, 0.77, 1.0}) {
        CHECK(P(x) == doctest::Approx(std::sin(x)).epsilon(1e-11));
    }
    CHECK(P.between(0.2, 0.9) == doctest::Approx(std::sin(0.9) - std::sin(0.2)).epsilon(1e-11));
    const Primitive S([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0, 16, 1e-12);
    CHECK(S(0.25) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(S.total() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("cumulative_integral examples") {
    const GridFunction one(Grid(4), 1.0);
    const GridFunction c = cumulative_integral(one);
    const double expected[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(c[i] == doctest::Approx(expected[i]));
    }
    const GridFunction zero = cumulative_integral(GridFunction(Grid(16), 0.0));
    for (std::size_t i = 0; i < zero.size(); ++i) {
        CHECK(zero[i] == 0.0);
    }
    const GridFunction t = GridFunction::sample(Grid(1024), [](double x) { return x; });
    CHECK(cumulative_integral(t)[1024] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("property: cumulative integral of a nonnegative function is nondecreasing") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> d(0.0, 5.0);
    std::vector<double> values(257);
    for (auto& v : values) v = d(rng);
    const GridFunction c = cumulative_integral(GridFunction(Grid(256), values));
    CHECK(c[0] == 0.0);
    for (std::size_t i = 1; i < c.size(); ++i) {
        CHECK(c[i] >= c[i - 1]);
    }
}

TEST_CASE("find_smallest_root examples") {
    CHECK(find_smallest_root([](double x) { return x - 0.5; }, 1e-10) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(find_smallest_root([](double x) { return (x - 0.25) * (x - 0.75); }, 1e-10) ==
          doctest::Approx(0.25).epsilon(1e-9));
    CHECK_THROWS_AS(find_smallest_root([](double) { return 1.0; }), RootNotFound);
    CHECK(find_smallest_root([](double x) { return x; }) == 0.0);
}

TEST_CASE("property: returned root is bracketed by a sign change within tol") {
    for (double r : {0.1, 0.33, 0.5001, 0.9}) {
        auto h = [r](double x) { return std::tanh(5.0 * (x - r)) + 0.1 * (x - r) * (x - r) * (x - r); };
        const double tol = 1e-10;
        const double root = find_smallest_root(h, tol);
        CHECK(std::fabs(root - r) <= 2 * tol);
        const double lo = std::max(0.0, root - tol), hi = std::min(1.0, root + tol);
        CHECK(h(lo) * h(hi) <= 0.0);
        CHECK(std::fabs(h(root)) <= std::max(std::fabs(h(lo)), std::fabs(h(hi))));
    }
}

TEST_CASE("minimize_1d examples") {
    const auto q = minimize_1d([](double x) { return (x - 0.5) * (x - 0.5); }, 0.0, 1.0, 1e-8);
    CHECK(q.argmin == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(q.min == doctest::Approx(0.0).epsilon(1e-12));

    const auto flat = minimize_1d([](double) { return 3.0; }, 0.2, 0.9, 1e-8);
    CHECK(flat.argmin == 0.2);
    CHECK(flat.min == 3.0);

    // closed form of the M2 minimand for g2 = 1, p2 = 3, [1/4, 3/4], h21 = 1/9
    auto minimand = [](double nu) {
        const double a = 0.25, b = 0.75, h = 1.0 / 9.0;
        return 0.5 * ((2.0 / 3.0) * (std::pow(nu - a, 1.5) + std::pow(b - nu, 1.5)) + h * std::sqrt(nu - a));
    };
    const auto m = minimize_1d(minimand, 0.25, 0.75, 1e-8);
    CHECK(m.min == doctest::Approx(1.0 / 9.14497).epsilon(1e-4));
    double brute = 1e300;
    for (int k = 0; k <= 200000; ++k) {
        brute = std::min(brute, minimand(0.25 + 0.5 * k / 200000.0));
    }
    CHECK(std::fabs(m.min - brute) < 1e-10);
}
