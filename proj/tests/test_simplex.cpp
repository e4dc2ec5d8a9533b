#include <catch2/catch_amalgamated.hpp>

#include <peerpred/simplex.hpp>

using namespace peerpred::lp;

namespace {
constexpr double kTol = 1e-9;
}

TEST_CASE("two-variable minimum at an interior vertex") {
    // min x + y  s.t.  x + 2y >= 4,  3x + y >= 6.
    Solution s = solve({1.0, 1.0}, {{{1.0, 2.0}, Relation::greater_equal, 4.0},
                                    {{3.0, 1.0}, Relation::greater_equal, 6.0}});
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.objective == Catch::Approx(2.8).margin(kTol));
    CHECK(s.x[0] == Catch::Approx(1.6).margin(kTol));
    CHECK(s.x[1] == Catch::Approx(1.2).margin(kTol));
}

TEST_CASE("upper bounds flip the optimum to maximization") {
    // min -x - 2y  s.t.  x + y <= 3,  y <= 2.
    Solution s = solve({-1.0, -2.0}, {{{1.0, 1.0}, Relation::less_equal, 3.0},
                                      {{0.0, 1.0}, Relation::less_equal, 2.0}});
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.objective == Catch::Approx(-5.0).margin(kTol));
    CHECK(s.x[0] == Catch::Approx(1.0).margin(kTol));
    CHECK(s.x[1] == Catch::Approx(2.0).margin(kTol));
}

TEST_CASE("equality rows are honored") {
    Solution s = solve({1.0, 1.0}, {{{1.0, 1.0}, Relation::equal, 2.0},
                                    {{1.0, -1.0}, Relation::equal, 0.0}});
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.x[0] == Catch::Approx(1.0).margin(kTol));
    CHECK(s.x[1] == Catch::Approx(1.0).margin(kTol));
}

TEST_CASE("contradictory rows are infeasible") {
    Solution s = solve({1.0}, {{{1.0}, Relation::greater_equal, 1.0},
                               {{1.0}, Relation::less_equal, 0.5}});
    CHECK(s.status == SolveStatus::infeasible);
}

TEST_CASE("negative upper bound with nonnegative variables is infeasible") {
    Solution s = solve({1.0}, {{{1.0}, Relation::less_equal, -1.0}});
    CHECK(s.status == SolveStatus::infeasible);
}

TEST_CASE("unbounded objectives are reported") {
    SECTION("no rows at all") {
        Solution s = solve({-1.0}, {});
        CHECK(s.status == SolveStatus::unbounded);
    }
    SECTION("one lower bound cannot contain a negative cost") {
        Solution s = solve({-1.0}, {{{1.0}, Relation::greater_equal, 1.0}});
        CHECK(s.status == SolveStatus::unbounded);
    }
}

TEST_CASE("empty row set with nonnegative costs sits at the origin") {
    Solution s = solve({2.0, 0.0}, {});
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.objective == 0.0);
    CHECK(s.x == std::vector<double>{0.0, 0.0});
}

TEST_CASE("redundant duplicate rows do not disturb the optimum") {
    Solution s = solve({1.0, 1.0}, {{{1.0, 2.0}, Relation::greater_equal, 4.0},
                                    {{1.0, 2.0}, Relation::greater_equal, 4.0},
                                    {{1.0, 2.0}, Relation::equal, 4.0},
                                    {{3.0, 1.0}, Relation::greater_equal, 6.0}});
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.objective == Catch::Approx(2.8).margin(kTol));
}

TEST_CASE("nearly parallel rows with a tiny separation still solve") {
    // The kind of system the payment LP degenerates into: two rows that are
    // negations of each other up to a small gap, forcing a large solution.
    const double gap = 1e-7;
    Solution s = solve({1.0, 1.0}, {{{0.5 + gap, -0.5}, Relation::greater_equal, 1.0},
                                    {{-0.5, 0.5 + gap}, Relation::greater_equal, 1.0}});
    REQUIRE(s.status == SolveStatus::optimal);
    // By symmetry x = y with (0.5 + gap - 0.5) x = 1.
    CHECK(s.x[0] == Catch::Approx(1.0 / gap).epsilon(1e-6));
    CHECK(s.x[1] == Catch::Approx(1.0 / gap).epsilon(1e-6));
}

TEST_CASE("mismatched constraint arity is rejected") {
    CHECK_THROWS_AS(solve({1.0, 1.0}, {{{1.0}, Relation::greater_equal, 1.0}}),
                    std::invalid_argument);
}

TEST_CASE("degenerate vertices with many tight rows terminate") {
    // Several rows through the same point force ties in the ratio test.
    Solution s = solve({1.0, 1.0, 1.0}, {{{1.0, 1.0, 0.0}, Relation::greater_equal, 2.0},
                                         {{1.0, 0.0, 1.0}, Relation::greater_equal, 2.0},
                                         {{0.0, 1.0, 1.0}, Relation::greater_equal, 2.0},
                                         {{1.0, 1.0, 1.0}, Relation::greater_equal, 3.0}});
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.objective == Catch::Approx(3.0).margin(kTol));
}
