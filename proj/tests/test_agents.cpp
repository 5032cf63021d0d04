#include "sunkcost/agents.hpp"
#include "sunkcost/random_instances.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "corpus.hpp"

using namespace sunkcost;

TEST_CASE("motivating instance: all four agents") {
    TaskGraph g = testing::scb_graph();
    Rat lambda(1, 2);
    CHECK(eval_optimal(g).payoff == 1);
    CHECK(eval_sophisticated(g, lambda).payoff == 0);
    CHECK(eval_naive(g, lambda).payoff == 0);
    CHECK(eval_hybrid(g, lambda).payoff == 0);
    CHECK(eval_optimal(g).reach_prob == Rat(1, 2));
    CHECK(eval_sophisticated(g, lambda).reach_prob == Rat(3, 4));
}

TEST_CASE("one-step graph") {
    TaskGraph g;
    g.reward = 5;
    g.start = "s";
    g.target = "t";
    g.nodes = {{"s", 2, false}, {"t", 0, false}};
    g.edges = {{"s", "t", 1, 0}};
    auto ev = eval_optimal(g);
    CHECK(ev.payoff == 3);
    CHECK(ev.reach_prob == 1);
    CHECK(ev.starts);
}

TEST_CASE("optimal agent declines a losing graph") {
    TaskGraph g;
    g.reward = 1;
    g.start = "s";
    g.target = "t";
    g.nodes = {{"s", 2, false}, {"t", 0, false}};
    g.edges = {{"s", "t", 1, 0}};
    auto ev = eval_optimal(g);
    CHECK(ev.payoff == 0);
    CHECK(ev.start_value == -1);
    CHECK_FALSE(ev.starts);
    CHECK(ev.reach_prob == 0);
}

TEST_CASE("optimal policy trace") {
    auto trace = policy_trace(testing::scb_graph(), {Kind::Optimal, 0, TieBreak::ContinueOnTie});
    REQUIRE(trace.size() == 2);
    std::map<std::string, bool> by_node;
    for (const auto& d : trace) by_node[d.node] = d.cont;
    CHECK(by_node.at("s"));
    CHECK_FALSE(by_node.at("u"));
}

TEST_CASE("sophisticated policy trace lists exact sunk costs") {
    auto trace = policy_trace(testing::scb_graph(),
                              {Kind::Sophisticated, Rat(1, 2), TieBreak::ContinueOnTie});
    REQUIRE(trace.size() == 2);
    CHECK(trace[0].node == "s");
    CHECK(trace[0].sunk == 0);
    CHECK(trace[0].cont);
    CHECK(trace[1].node == "u");
    CHECK(trace[1].sunk == 4);
    CHECK(trace[1].cont);  // -2 >= -lambda*4 on the tie
}

TEST_CASE("stop-on-tie flips the exactly tied decision") {
    TaskGraph g = testing::scb_graph();
    auto cont = eval_sophisticated(g, Rat(1, 2), TieBreak::ContinueOnTie);
    auto stop = eval_sophisticated(g, Rat(1, 2), TieBreak::StopOnTie);
    CHECK(cont.payoff == 0);
    CHECK(stop.payoff == 1);  // stopping at u recovers the optimal payoff here
}

TEST_CASE("lambda zero collapses every agent to the optimal one") {
    InstanceRng rng(2024);
    for (int i = 0; i < 100; ++i) {
        TaskGraph g = random_dag(rng);
        auto opt = eval_optimal(g);
        for (auto kind : {Kind::Naive, Kind::Sophisticated, Kind::Hybrid}) {
            auto ev = eval_agent(g, {kind, 0, TieBreak::ContinueOnTie});
            REQUIRE(ev.payoff == opt.payoff);
            REQUIRE(ev.reach_prob == opt.reach_prob);
        }
    }
}

TEST_CASE("payoff ordering on random instances") {
    InstanceRng rng(7);
    const std::vector<Rat> lambdas{{1, 4}, {1, 2}, 1, 2};
    for (int i = 0; i < 500; ++i) {
        TaskGraph g = random_dag(rng);
        Rat pi_o = eval_optimal(g).payoff;
        REQUIRE(pi_o >= 0);
        for (const Rat& lambda : lambdas) {
            Rat pi_s = eval_sophisticated(g, lambda).payoff;
            Rat pi_h = eval_hybrid(g, lambda).payoff;
            REQUIRE(pi_s >= 0);
            REQUIRE(pi_o >= pi_s);
            REQUIRE(pi_s >= pi_h);
        }
    }
}

TEST_CASE("scale invariance") {
    InstanceRng rng(31);
    const Rat factor(7, 3);
    for (int i = 0; i < 50; ++i) {
        TaskGraph g = random_dag(rng);
        TaskGraph h = scale(g, factor);
        for (const Rat& lambda : {Rat(1, 2), Rat(2)}) {
            AgentKind agent{Kind::Sophisticated, lambda, TieBreak::ContinueOnTie};
            REQUIRE(eval_agent(h, agent).payoff == factor * eval_agent(g, agent).payoff);
            auto tg = policy_trace(g, agent);
            auto th = policy_trace(h, agent);
            REQUIRE(tg.size() == th.size());
            for (std::size_t j = 0; j < tg.size(); ++j) {
                REQUIRE(tg[j].node == th[j].node);
                REQUIRE(th[j].sunk == factor * tg[j].sunk);
                REQUIRE(tg[j].cont == th[j].cont);
            }
        }
        REQUIRE(eval_optimal(h).payoff == factor * eval_optimal(g).payoff);
        REQUIRE(eval_hybrid(h, 1).payoff == factor * eval_hybrid(g, 1).payoff);
        REQUIRE(eval_naive(h, 1).payoff == factor * eval_naive(g, 1).payoff);
    }
}

// Not asserted: no claim is made either way. Logged so a counterexample in
// the sampled grid would surface during development runs.
TEST_CASE("lambda monotonicity is exploratory only") {
    InstanceRng rng(55);
    int counterexamples = 0;
    const std::vector<Rat> grid{0, {1, 4}, {1, 2}, 1, 2, 4};
    for (int i = 0; i < 50; ++i) {
        TaskGraph g = random_dag(rng);
        Rat prev = eval_sophisticated(g, grid[0]).payoff;
        for (std::size_t j = 1; j < grid.size(); ++j) {
            Rat cur = eval_sophisticated(g, grid[j]).payoff;
            if (cur > prev) ++counterexamples;
            prev = cur;
        }
    }
    INFO("non-monotone steps observed: " << counterexamples);
    SUCCEED();
}

TEST_CASE("optimal ties do not affect the optimal payoff") {
    // cost(s) makes the continuation value at s exactly 0.
    TaskGraph g;
    g.reward = 2;
    g.start = "s";
    g.target = "t";
    g.nodes = {{"s", 1, false}, {"t", 0, false}, {"v", 0, true}};
    g.edges = {{"s", "t", {1, 2}, 0}, {"s", "v", {1, 2}, 0}};
    auto cont = eval_optimal(g, TieBreak::ContinueOnTie);
    auto stop = eval_optimal(g, TieBreak::StopOnTie);
    CHECK(cont.payoff == 0);
    CHECK(stop.payoff == 0);
    CHECK(cont.starts);
    CHECK_FALSE(stop.starts);
}

TEST_CASE("state cap aborts cleanly") {
    InstanceRng rng(3);
    TaskGraph g = random_dag(rng, 10);
    EvalOptions opts;
    opts.state_cap = 1;
    try {
        eval_sophisticated(g, Rat(1, 3), TieBreak::ContinueOnTie, opts);
    } catch (const StateCapExceeded& e) {
        CHECK(e.states_visited >= 1);
        return;
    }
    // Tiny graphs may legitimately fit in one state; accept either outcome.
    SUCCEED();
}

TEST_CASE("edge-cost model decisions use per-branch sunk costs") {
    TaskGraph g;
    g.reward = 1;
    g.start = "s";
    g.target = "t";
    g.cost_model = CostModel::EdgeCosts;
    g.nodes = {{"s", 0, false}, {"t", 0, false}, {"v", 0, false}};
    g.edges = {{"s", "v", {1, 2}, Rat(1, 4)}, {"s", "t", {1, 2}, 0}, {"v", "t", 1, Rat(1, 4)}};
    auto opt = eval_optimal(g);
    CHECK(opt.payoff == Rat(3, 4));
    CHECK(eval_sophisticated(g, 1).payoff == Rat(3, 4));
}
