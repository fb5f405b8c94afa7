#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "plapcert/operator.hpp"

using namespace plapcert;

namespace {

NumericsSettings with_n(std::size_t n) {
    NumericsSettings numerics;
    numerics.n = n;
    return numerics;
}

StatePair constant_state(const Grid& grid, double u, double v) {
    return StatePair(GridFunction(grid, u), GridFunction(grid, v));
}

double sup_error(const GridFunction& w, double (*exact)(double)) {
    double worst = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        worst = std::max(worst, std::fabs(w[i] - exact(w.grid().node(i))));
    }
    return worst;
}

// -u'' = e^t, u'(0) = 0, u(1) = 0 and -v'' = e^t, v(0) = v(1) = 0
double u_exp(double t) { return std::exp(1.0) - std::exp(t) - (1.0 - t); }
double v_exp(double t) { return -std::exp(t) + 1.0 + (std::exp(1.0) - 1.0) * t; }

}  // namespace

TEST_CASE("T1 examples") {
    const Grid grid(1024);
    SUBCASE("zero forcing") {
        const ProblemSpec spec(testing::linear_terms("0", "1"));
        const GridFunction T1 = eval_T1(spec, constant_state(grid, 0.3, 0.3), with_n(1024));
        CHECK(T1.sup_norm() == 0.0);
    }
    SUBCASE("closed-form double integral") {
        const ProblemSpec spec(testing::linear_terms());
        const GridFunction T1 = eval_T1(spec, StatePair::zero(grid), with_n(1024));
        CHECK(T1[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(sup_error(T1, [](double t) { return (1.0 - t * t) / 2.0; }) < 1e-12);
    }
    SUBCASE("example system at the zero state") {
        const auto cfg = testing::example();
        const GridFunction T1 = eval_T1(cfg.spec, StatePair::zero(grid), cfg.numerics);
        // 0.54^2/3 + B1(0.54^2) with B1(w) = w/2 on [0,1]
        const double expected = 0.54 * 0.54 / 3.0 + 0.54 * 0.54 / 2.0;
        CHECK(std::fabs(T1[0] - expected) <= 1e-6);
        CHECK(std::fabs(T1[0] - 0.243) <= 1e-6);
    }
}

TEST_CASE("operator errors carry the node") {
    const ProblemSpec spec(testing::linear_terms("1/(t - 0.5)", "1"));
    const Grid grid(8);
    try {
        eval_T1(spec, StatePair::zero(grid), with_n(8));
        FAIL("expected OperatorError");
    } catch (const OperatorError& e) {
        CHECK(e.t == 0.5);
        CHECK(std::string(e.what()).find("t = 0.5") != std::string::npos);
    }
}

TEST_CASE("sigma examples") {
    const Grid grid(1024);
    for (double p : {1.5, 2.0, 3.0}) {
        auto terms = testing::linear_terms("1", "2.5");
        terms.p2 = p;
        const ProblemSpec spec(terms);
        CHECK(std::fabs(sigma(spec, StatePair::zero(grid), with_n(1024)) - 0.5) <= 1e-8);
    }
    SUBCASE("degenerate forcing") {
        const ProblemSpec spec(testing::linear_terms("1", "0"));
        CHECK(sigma(spec, StatePair::zero(grid), with_n(1024)) == 0.0);
        CHECK(eval_T2(spec, StatePair::zero(grid), with_n(1024)).Tv.sup_norm() == 0.0);
    }
    SUBCASE("positive B2 shifts sigma left") {
        auto terms = testing::linear_terms();
        terms.B2 = "w/3";
        terms.h22 = 0.5;
        const ProblemSpec spec(terms);
        const NumericsSettings numerics = with_n(1024);
        const Operator op(spec, numerics);
        const StatePair zero = StatePair::zero(grid);
        const double s = op.sigma(zero);
        CHECK(s < 0.5);
        // brute-force scan of H = left - right
        const int scan = 20000;
        double first = -1.0;
        double previous = op.branches(zero, 0.0).left - op.branches(zero, 0.0).right;
        for (int k = 1; k <= scan; ++k) {
            const double x = static_cast<double>(k) / scan;
            const BranchValues b = op.branches(zero, x);
            const double h = b.left - b.right;
            if (previous < 0.0 && h >= 0.0) {
                first = x;
                break;
            }
            previous = h;
        }
        REQUIRE(first > 0.0);
        CHECK(std::fabs(s - first) <= 1.0 / scan);
    }
}

TEST_CASE("T2 examples") {
    const Grid grid(1024);
    SUBCASE("closed form t(1-t)/2") {
        const ProblemSpec spec(testing::linear_terms());
        const OperatorOutput out = eval_T2(spec, StatePair::zero(grid), with_n(1024));
        CHECK(out.sigma == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(sup_error(out.Tv, [](double t) { return t * (1.0 - t) / 2.0; }) < 1e-10);
        CHECK(out.Tv.sup_norm() == doctest::Approx(0.125).epsilon(1e-10));
    }
    SUBCASE("zero forcing") {
        const ProblemSpec spec(testing::linear_terms("1", "0"));
        CHECK(eval_T2(spec, constant_state(grid, 1.0, 1.0), with_n(1024)).Tv.sup_norm() == 0.0);
    }
    SUBCASE("branch agreement on the example") {
        const auto cfg = testing::example();
        const Operator op(cfg.spec, cfg.numerics);
        const StatePair ones = constant_state(Grid(cfg.numerics.n), 1.0, 1.0);
        const double s = op.sigma(ones);
        const BranchValues b = op.branches(ones, s);
        CHECK(std::fabs(b.left - b.right) <= 1e-6);
        CHECK(op.apply(ones).quadrature_error_estimate <= 1e-6);
    }
}

TEST_CASE("residual examples") {
    const Grid grid(1024);
    SUBCASE("closed-form fixed point") {
        const ProblemSpec spec(testing::linear_terms());
        const StatePair fixed(GridFunction::sample(grid, [](double t) { return (1.0 - t * t) / 2.0; }),
                              GridFunction::sample(grid, [](double t) { return t * (1.0 - t) / 2.0; }));
        const Operator op(spec, with_n(1024));
        const OperatorOutput T = op.apply(fixed);
        CHECK(op.residual(StatePair(T.Tu, T.Tv)) <= 2e-4);
        CHECK(op.residual(fixed) <= 2e-4);
    }
    SUBCASE("zero is not a solution") {
        const auto cfg = testing::example();
        const Operator op(cfg.spec, cfg.numerics);
        const StatePair zero = StatePair::zero(Grid(cfg.numerics.n));
        const OperatorOutput T = op.apply(zero);
        const double expected = std::max(T.Tu.sup_norm(), T.Tv.sup_norm());
        CHECK(expected > 0.0);
        CHECK(op.residual(zero) == doctest::Approx(expected));
    }
    SUBCASE("second-order convergence under refinement") {
        const ProblemSpec spec(testing::linear_terms("exp(t)", "exp(t)"));
        std::vector<double> residuals;
        for (std::size_t n : {64, 128, 256, 512}) {
            const Grid g(n);
            const StatePair exact(GridFunction::sample(g, u_exp), GridFunction::sample(g, v_exp));
            residuals.push_back(residual(spec, exact, with_n(n)));
        }
        for (std::size_t k = 1; k < residuals.size(); ++k) {
            const double order = std::log2(residuals[k - 1] / residuals[k]);
            CHECK(order >= 1.9);
            CHECK(order <= 2.1);
        }
    }
}

TEST_CASE("cone membership examples") {
    const Grid grid(256);
    const StatePair canonical(GridFunction::sample(grid, [](double t) { return 1.0 - t; }),
                              GridFunction::sample(grid, [](double t) { return t * (1.0 - t); }));
    const ConeReport ok = cone_membership(canonical, 1e-12, ConeWindow{2.0 / 3.0, 0.25, 0.75});
    CHECK(ok.pass());
    REQUIRE(ok.window_u.has_value());
    CHECK(ok.window_u->pass);

    const StatePair rising(GridFunction::sample(grid, [](double t) { return t; }), canonical.v());
    const ConeReport bad = cone_membership(rising, 1e-12);
    CHECK_FALSE(bad.pass());
    CHECK_FALSE(bad.nonincreasing_u.pass);
    REQUIRE(bad.nonincreasing_u.witness_t.has_value());
    CHECK(bad.nonincreasing_u.worst_violation == doctest::Approx(1.0 / 256));

    const StatePair convex(canonical.u(), GridFunction::sample(grid, [](double t) { return (t - 0.5) * (t - 0.5); }));
    const ConeReport c = cone_membership(convex, 1e-12);
    CHECK_FALSE(c.concave_v.pass);
    CHECK_FALSE(c.lower_bound_v.pass);
}

TEST_CASE("property: T maps random cone states into the cone") {
    const auto cfg = testing::example();
    NumericsSettings numerics = cfg.numerics;
    numerics.n = 256;
    const Operator op(cfg.spec, numerics);
    const Grid grid(numerics.n);
    const ConeWindow window = cone_window(cfg.spec);
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> coef(0.0, 0.6);
    const double pi = std::acos(-1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = coef(rng), b = coef(rng), c = coef(rng);
        const double d = coef(rng), e = coef(rng), f = coef(rng);
        const StatePair state(
            GridFunction::sample(grid, [&](double t) { return a * (1 - t) + b * (1 - t * t) + c * (1 - t * t * t); }),
            GridFunction::sample(grid,
                                 [&](double t) { return d * std::min(t, 1 - t) + e * t * (1 - t) + f * std::sin(pi * t); }));
        const OperatorOutput T = op.apply(state);
        const StatePair image(T.Tu, T.Tv);
        const double tol = 1e-8 * image.norm();
        CHECK(cone_membership(image, tol, window).pass());

        // the maximum of Tv sits within one cell of sigma
        std::size_t argmax = 0;
        for (std::size_t i = 0; i < T.Tv.size(); ++i) {
            if (T.Tv[i] > T.Tv[argmax]) argmax = i;
        }
        CHECK(std::fabs(grid.node(argmax) - T.sigma) <= grid.spacing() + 1e-12);
    }
}

TEST_CASE("property: scaling f2 up does not shrink T2") {
    const auto cfg = testing::example();
    NumericsSettings numerics = cfg.numerics;
    numerics.n = 256;
    const Grid grid(numerics.n);
    const StatePair state = StatePair::cone_profile(grid, 0.7, 0.4);
    const double base = eval_T2(cfg.spec, state, numerics).Tv.sup_norm();
    for (double lambda : {1.1, 2.0, 5.0}) {
        const ProblemSpec scaled =
            testing::example_with(cfg.spec.terms().f1, testing::num(lambda) + "*(" + cfg.spec.terms().f2 + ")");
        CHECK(eval_T2(scaled, state, numerics).Tv.sup_norm() >= base);
    }
}

TEST_CASE("grid convergence of T2") {
    SUBCASE("constant forcing is reproduced to roundoff") {
        const ProblemSpec spec(testing::linear_terms());
        for (std::size_t n : {16, 64, 256}) {
            const OperatorOutput out = eval_T2(spec, StatePair::zero(Grid(n)), with_n(n));
            CHECK(sup_error(out.Tv, [](double t) { return t * (1.0 - t) / 2.0; }) < 1e-12);
        }
    }
    SUBCASE("smooth forcing converges at second order") {
        const ProblemSpec spec(testing::linear_terms("exp(t)", "exp(t)"));
        double previous = 0.0;
        for (std::size_t n : {32, 64, 128, 256, 512}) {
            const double err = sup_error(eval_T2(spec, StatePair::zero(Grid(n)), with_n(n)).Tv, v_exp);
            if (previous > 0.0) {
                CHECK(std::log2(previous / err) >= 1.9);
            }
            previous = err;
        }
    }
}

TEST_CASE("state helpers") {
    const Grid grid(8);
    const StatePair p = StatePair::cone_profile(grid, 2.0, 4.0);
    CHECK(p.u()[0] == 2.0);
    CHECK(p.v()[4] == 2.0);
    CHECK(p.norm() == 2.0);
    CHECK(distance(p, StatePair::zero(grid)) == 2.0);
    CHECK(p.resampled(Grid(16)).v()[8] == 2.0);
    CHECK_THROWS(StatePair(GridFunction(Grid(4)), GridFunction(Grid(8))));
}
