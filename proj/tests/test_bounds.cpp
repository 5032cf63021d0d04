#include "sunkcost/bounds.hpp"
#include "sunkcost/random_instances.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "corpus.hpp"

using namespace sunkcost;

TEST_CASE("decomposition of the motivating instance") {
    auto d = decompose_optimal(testing::scb_graph());
    CHECK(d.p_success == Rat(1, 2));
    CHECK(d.exp_cost_success == 4);
    CHECK(d.exp_cost_failure == 4);
    CHECK(d.payoff == 1);
}

TEST_CASE("decomposition when success is certain") {
    TaskGraph g;
    g.reward = 5;
    g.start = "s";
    g.target = "t";
    g.nodes = {{"s", 2, false}, {"t", 0, false}};
    g.edges = {{"s", "t", 1, 0}};
    auto d = decompose_optimal(g);
    CHECK(d.p_success == 1);
    CHECK(d.exp_cost_failure == 0);
    CHECK(d.payoff == 3);
}

TEST_CASE("decomposition DP matches the enumeration version") {
    InstanceRng rng(11);
    for (int i = 0; i < 80; ++i) {
        TaskGraph g = random_dag(rng);
        auto a = decompose_optimal(g);
        auto b = decompose_optimal_enum(g);
        REQUIRE(a.p_success == b.p_success);
        REQUIRE(a.exp_cost_success == b.exp_cost_success);
        REQUIRE(a.exp_cost_failure == b.exp_cost_failure);
        REQUIRE(a.payoff == b.payoff);
        REQUIRE(a.payoff == a.p_success * g.reward - a.p_success * a.exp_cost_success -
                                (1 - a.p_success) * a.exp_cost_failure);
        REQUIRE(a.payoff == eval_optimal(g).payoff);
    }
}

TEST_CASE("hybrid corollary is tight on the motivating instance") {
    auto rep = check_cor_hyb(testing::scb_graph(), Rat(1, 2));
    CHECK(rep.lhs == 0);
    CHECK(rep.rhs == 0);
    CHECK(rep.holds);
}

TEST_CASE("success-probability bound on the motivating instance") {
    auto rep = check_lambda_ps_r(testing::scb_graph(), Rat(1, 2));
    CHECK(rep.lhs == 0);
    CHECK(rep.rhs == Rat(-3, 2));
    CHECK(rep.holds);
}

TEST_CASE("closed-form bound on the motivating instance") {
    auto rep = check_closed_form(testing::scb_graph(), Rat(1, 2));
    CHECK(rep.lhs == 0);
    CHECK(rep.rhs == 1 - Rat(10, 3));
    CHECK(rep.holds);
}

TEST_CASE("all general bounds at lambda zero reduce to equalities or better") {
    InstanceRng rng(13);
    for (int i = 0; i < 30; ++i) {
        TaskGraph g = random_dag(rng);
        auto a = check_cor_hyb(g, 0);
        REQUIRE(a.lhs == a.rhs);
        REQUIRE(check_lambda_ps_r(g, 0).holds);
        REQUIRE(check_closed_form(g, 0).holds);
    }
}

TEST_CASE("general bounds hold on random instances") {
    InstanceRng rng(21);
    const std::vector<Rat> lambdas{{1, 4}, {1, 2}, 1, 2};
    for (int i = 0; i < 300; ++i) {
        TaskGraph g = random_dag(rng);
        for (const Rat& lambda : lambdas) {
            REQUIRE(check_cor_hyb(g, lambda).holds);
            REQUIRE(check_lambda_ps_r(g, lambda).holds);
            REQUIRE(check_closed_form(g, lambda).holds);
        }
    }
}

TEST_CASE("three-node tight construction") {
    const Rat precision(1, Int("1000000000000"));
    const Rat tol(1, Int("10000000000"));
    for (const Rat& lambda : {Rat(1, 4), Rat(1, 2), Rat(1), Rat(2), Rat(10)}) {
        TaskGraph g = build_three_node_tight(lambda, 1, precision);
        REQUIRE(validate(g).ok());
        Rat pi_s = eval_sophisticated(g, lambda).payoff;
        REQUIRE(rat_abs(pi_s) <= tol);
        auto rep = check_three_node_bound(g, lambda, precision);
        REQUIRE(rep.holds);
        // near-equality at the tight instance
        REQUIRE(rep.lhs - rep.rhs <= 10 * precision);
    }
}

TEST_CASE("three-node gap at lambda one is 3 - 2*sqrt(2)") {
    Rat precision(1, Int("1000000000000"));
    TaskGraph g = build_three_node_tight(1, 1, precision);
    Rat gap = eval_optimal(g).payoff - eval_sophisticated(g, 1).payoff;
    Rat reference = parse_rat("0.17157287525381");
    CHECK(rat_abs(gap - reference) < Rat(1, 1000000000));
    CHECK(gap <= Rat(172, 1000));
}

TEST_CASE("optimal agent stops at the interior node of the tight instance") {
    Rat precision(1, Int("1000000000000"));
    TaskGraph g = build_three_node_tight(1, 1, precision);
    auto trace = policy_trace(g, {Kind::Optimal, 0, TieBreak::ContinueOnTie});
    for (const auto& d : trace)
        if (d.node == "v") CHECK_FALSE(d.cont);
}

TEST_CASE("three-node bound holds on random three-node graphs") {
    InstanceRng rng(23);
    const std::vector<Rat> lambdas{{1, 4}, {1, 2}, 1, 2};
    for (int i = 0; i < 250; ++i) {
        TaskGraph g = random_three_node(rng);
        for (const Rat& lambda : lambdas) REQUIRE(check_three_node_bound(g, lambda).holds);
    }
}

TEST_CASE("degenerate three-node graph with certain success") {
    TaskGraph g;
    g.reward = 1;
    g.start = "s";
    g.target = "t";
    g.nodes = {{"s", Rat(1, 4), false}, {"t", 0, false}, {"v", 0, true}};
    g.edges = {{"s", "t", {9, 10}, 0}, {"s", "v", {1, 10}, 0}};
    REQUIRE(validate(g).ok());
    auto rep = check_three_node_bound(g, Rat(1, 2));
    CHECK(rep.holds);
    CHECK(eval_sophisticated(g, Rat(1, 2)).payoff == eval_optimal(g).payoff);
}

TEST_CASE("gap bound is below the closed-form bound") {
    Rat precision(1, Int("1000000000000"));
    for (const Rat& lambda : {Rat(1, 4), Rat(1, 2), Rat(1), Rat(2), Rat(10), Rat(100)}) {
        REQUIRE(three_node_gap_upper(lambda, 1, precision) < lambda / (1 + lambda));
    }
}

TEST_CASE("edge-cost tight construction is exact") {
    Rat lambda(1, 2), epsilon(1, 100);
    TaskGraph g = build_edge_cost_tight(lambda, epsilon);
    REQUIRE(validate(g).ok());
    CHECK(eval_sophisticated(g, lambda).payoff == 0);
    CHECK(eval_optimal(g).payoff == Rat(1, 3) - Rat(1, 100));
    auto rep = check_closed_form(g, lambda);
    CHECK(rep.holds);
    CHECK(rep.lhs - rep.rhs == epsilon);  // gap to the bound is exactly epsilon

    // optimal stops at v; sophisticated declines the lottery at the start,
    // where continuing would be worth exactly -epsilon
    auto trace = policy_trace(g, {Kind::Optimal, 0, TieBreak::ContinueOnTie});
    for (const auto& d : trace)
        if (d.node == "v") CHECK_FALSE(d.cont);
    auto soph = eval_sophisticated(g, lambda);
    CHECK_FALSE(soph.starts);
    CHECK(soph.reach_prob == 0);
    CHECK(soph.start_value == -epsilon);
}

TEST_CASE("edge-cost construction across parameters") {
    for (const Rat& lambda : {Rat(1, 4), Rat(1), Rat(3)}) {
        for (const Rat& epsilon : {Rat(1, 10), Rat(1, 1000)}) {
            TaskGraph g = build_edge_cost_tight(lambda, epsilon);
            REQUIRE(validate(g).ok());
            REQUIRE(eval_sophisticated(g, lambda).payoff == 0);
            REQUIRE(eval_optimal(g).payoff == lambda / (1 + lambda) - epsilon);
        }
    }
    CHECK_THROWS_AS(build_edge_cost_tight(0, Rat(1, 2)), std::domain_error);
    CHECK_THROWS_AS(build_edge_cost_tight(1, 1), std::domain_error);
}
