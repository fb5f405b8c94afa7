#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "plapcert/solver.hpp"

using namespace plapcert;

namespace {

// n = 8192, tol 1e-10, start (0.3, 0.3)
constexpr double kFrozenNorm = 0.243166226625;

NumericsSettings with_n(std::size_t n) {
    NumericsSettings numerics;
    numerics.n = n;
    return numerics;
}

const ConeConstants& example_constants() {
    static const ConeConstants k = compute_constants(testing::example().spec);
    return k;
}

Certificate s1_certificate() {
    return certify(testing::example().spec, example_constants(),
                   {LadderRung{{0.05, 0.05}, ConditionTag::I0star}, LadderRung{{1.0, 2.0 / 3.0}, ConditionTag::I1}}, 33);
}

SolutionRecord record_with_norm(double norm) {
    SolutionRecord r(StatePair::zero(Grid(4)));
    r.norm = norm;
    return r;
}

ProblemSpec nonexistence_spec() {
    const ConeConstants& k = example_constants();
    return testing::example_with("sqrt(" + testing::num(k.m1 / 2.0) + "*u)", "(" + testing::num(k.m2 / 2.0) + "*v)^2");
}

}  // namespace

TEST_CASE("config validation") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.damping = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.damping = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.damping = 1.0;
    cfg.tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK(default_amplitudes().size() == 25);
    CHECK(default_amplitudes().front() == std::pair{0.03, 0.03});
    CHECK(default_amplitudes().back() == std::pair{8.0, 8.0});
}

TEST_CASE("constant forcing converges in one undamped step") {
    const ProblemSpec spec(testing::linear_terms());
    SolverConfig cfg;
    cfg.damping = 1.0;
    const Grid grid(1024);
    const SolutionRecord r = picard_solve(spec, with_n(1024), StatePair::zero(grid), cfg);
    CHECK(r.iterations == 1);
    CHECK(r.residual <= 1e-6);
    CHECK(r.sigma == doctest::Approx(0.5));
    for (std::size_t i = 0; i < grid.size(); i += 64) {
        const double t = grid.node(i);
        CHECK(r.state.u()[i] == doctest::Approx((1.0 - t * t) / 2.0).epsilon(1e-10));
        CHECK(r.state.v()[i] == doctest::Approx(t * (1.0 - t) / 2.0).epsilon(1e-10));
    }
    CHECK(r.cone_report.pass());
    CHECK_FALSE(r.trivial);
}

TEST_CASE("zero forcing stops at the zero state") {
    const ProblemSpec spec(testing::linear_terms("0", "0"));
    const SolutionRecord r = picard_solve(spec, with_n(64), StatePair::zero(Grid(64)), SolverConfig{});
    CHECK(r.iterations == 0);
    CHECK(r.norm == 0.0);
    CHECK(r.trivial);
}

TEST_CASE("example solution from (0.3, 0.3)") {
    const auto cfg = testing::example();
    const Grid grid(cfg.numerics.n);
    SolverConfig solver;
    const SolutionRecord r = picard_solve(cfg.spec, cfg.numerics, StatePair::cone_profile(grid, 0.3, 0.3), solver);
    CHECK(r.residual < 1e-6);
    CHECK(std::fabs(r.norm - kFrozenNorm) <= 1e-6);
    CHECK(r.norm > 0.05);
    CHECK(r.norm <= 1.0);
    CHECK(r.cone_report.pass());
    CHECK(r.norm == std::max(r.norm_u, r.norm_v));

    SUBCASE("damping does not move the fixed point") {
        SolverConfig tight;
        tight.tol = 1e-10;
        const SolutionRecord a = picard_solve(cfg.spec, cfg.numerics, StatePair::cone_profile(grid, 0.3, 0.3), tight);
        tight.damping = 0.25;
        const SolutionRecord b = picard_solve(cfg.spec, cfg.numerics, StatePair::cone_profile(grid, 0.3, 0.3), tight);
        CHECK(distance(a.state, b.state) <= 10.0 * tight.tol);
        CHECK(b.iterations > a.iterations);
    }
}

TEST_CASE("solver failure modes") {
    const auto cfg = testing::example();
    NumericsSettings numerics = cfg.numerics;
    numerics.n = 128;
    const Grid grid(numerics.n);
    SUBCASE("start outside the cone") {
        const StatePair bad(GridFunction::sample(grid, [](double t) { return t; }), GridFunction(grid, 0.0));
        CHECK_THROWS_AS(picard_solve(cfg.spec, numerics, bad, SolverConfig{}), std::invalid_argument);
    }
    SUBCASE("divergence past the ceiling") {
        try {
            picard_solve(cfg.spec, numerics, StatePair::cone_profile(grid, 8.0, 8.0), SolverConfig{});
            FAIL("expected NonConvergence");
        } catch (const NonConvergence& e) {
            CHECK(e.diverged);
            CHECK(e.trajectory_norms.size() == e.iterations + 1);
            CHECK(e.trajectory_norms.back() > SolverConfig{}.divergence_ceiling);
        }
    }
    SUBCASE("iteration limit") {
        SolverConfig tight;
        tight.max_iterations = 3;
        tight.tol = 1e-14;
        try {
            picard_solve(cfg.spec, numerics, StatePair::cone_profile(grid, 0.3, 0.3), tight);
            FAIL("expected NonConvergence");
        } catch (const NonConvergence& e) {
            CHECK_FALSE(e.diverged);
            CHECK(e.iterations == 3);
            CHECK(e.last_step > 0.0);
            CHECK(e.trajectory_norms.size() == 4);
        }
    }
}

TEST_CASE("property: damped steps stay in the cone") {
    const auto cfg = testing::example();
    NumericsSettings numerics = cfg.numerics;
    numerics.n = 256;
    const Operator op(cfg.spec, numerics);
    const Grid grid(numerics.n);
    for (auto [a1, a2] : {std::pair{0.03, 1.0}, std::pair{1.0, 0.3}, std::pair{3.0, 0.03}}) {
        StatePair x = StatePair::cone_profile(grid, a1, a2);
        for (int step = 0; step < 5; ++step) {
            const OperatorOutput T = op.apply(x);
            std::vector<double> u(grid.size()), v(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                u[i] = 0.5 * x.u()[i] + 0.5 * T.Tu[i];
                v[i] = 0.5 * x.v()[i] + 0.5 * T.Tv[i];
            }
            x = StatePair(GridFunction(grid, u), GridFunction(grid, v));
            CHECK(cone_membership(x, 1e-8 * std::max(x.norm(), 1e-12), cone_window(cfg.spec)).pass());
        }
    }
}

TEST_CASE("multi-start on the example") {
    const auto cfg = testing::example();
    NumericsSettings numerics = cfg.numerics;
    numerics.n = 256;
    SolverConfig solver;
    solver.amplitudes = default_amplitudes();
    const MultiStartReport report = multi_start_run(cfg.spec, numerics, solver);
    REQUIRE_FALSE(report.records.empty());
    CHECK(report.records.size() + report.failures.size() <= solver.amplitudes.size());
    for (std::size_t k = 1; k < report.records.size(); ++k) {
        CHECK(report.records[k - 1].norm <= report.records[k].norm);
        CHECK(distance(report.records[k - 1].state, report.records[k].state) >= solver.dedup_distance);
    }
    const Certificate cert = s1_certificate();
    REQUIRE(cert.conclusive());
    const auto tags = localize(report.records, cert);
    for (std::size_t k = 0; k < report.records.size(); ++k) {
        if (report.records[k].trivial) continue;
        CHECK(tags[k].interval.has_value());
        CHECK(report.records[k].residual <= 1e-6);
        CHECK(report.records[k].cone_report.pass());
    }

    SUBCASE("deterministic across thread counts") {
        SolverConfig one = solver;
        one.threads = 1;
        const MultiStartReport again = multi_start_run(cfg.spec, numerics, one);
        REQUIRE(again.records.size() == report.records.size());
        for (std::size_t k = 0; k < again.records.size(); ++k) {
            CHECK(again.records[k].norm == report.records[k].norm);
            CHECK(again.records[k].start_used == report.records[k].start_used);
        }
        CHECK(again.failures.size() == report.failures.size());
    }
    SUBCASE("grid refinement barely moves the solution") {
        for (const auto& r : report.records) {
            if (!r.trivial) CHECK(refinement_shift(cfg.spec, numerics, r, solver) <= 5e-4);
        }
    }
}

TEST_CASE("multi-start deduplicates nearby starts") {
    const auto cfg = testing::example();
    NumericsSettings numerics = cfg.numerics;
    numerics.n = 128;
    SolverConfig solver;
    solver.amplitudes = {{0.3, 0.3}, {0.31, 0.3}, {0.03, 0.03}};
    const auto records = multi_start_solve(cfg.spec, numerics, solver);
    REQUIRE(records.size() == 1);
    CHECK(records[0].start_used == std::pair{0.3, 0.3});
    solver.amplitudes.clear();
    CHECK_THROWS_AS(multi_start_solve(cfg.spec, numerics, solver), std::invalid_argument);
}

TEST_CASE("a system without positive solutions only yields the zero state") {
    SolverConfig solver;
    solver.amplitudes = {{0.3, 0.3}, {3.0, 1.0}, {8.0, 8.0}};
    const auto records = multi_start_solve(nonexistence_spec(), with_n(128), solver);
    REQUIRE(records.size() == 1);
    CHECK(records[0].trivial);
}

TEST_CASE("localize examples") {
    const Certificate cert = s1_certificate();
    const auto tags = localize({record_with_norm(0.4), record_with_norm(12.0), record_with_norm(0.05)}, cert);
    REQUIRE(tags.size() == 3);
    CHECK(tags[0].interval == std::optional<std::size_t>{0});
    CHECK(tags[0].label == "(0.05, 1]");
    CHECK_FALSE(tags[1].interval.has_value());
    CHECK(tags[1].label == "outside certified intervals");
    CHECK_FALSE(tags[2].interval.has_value());
    CHECK(localize({}, cert).empty());

    const Certificate failed = certify(testing::example().spec, example_constants(),
                                       {LadderRung{{1.0, 1.0}, ConditionTag::I1}}, 5);
    CHECK_THROWS_AS(localize({record_with_norm(0.4)}, failed), std::invalid_argument);
}
