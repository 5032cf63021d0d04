#include "sunkcost/hardness.hpp"
#include "sunkcost/oracle.hpp"
#include "sunkcost/random_instances.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

using namespace sunkcost;

TEST_CASE("brute-force subset counter") {
    CHECK(count_bruteforce({{1, 2}, 2}) == 3);
    CHECK(count_bruteforce({{}, 0}) == 1);
    CHECK(count_bruteforce({{1, 1, 1}, 2}) == 7);
    CHECK(count_bruteforce({{5}, 1}) == 1);
    CHECK(count_bruteforce({{3, 3, 3}, 2}) == 1);
    KnapsackInstance big;
    big.weights.assign(23, 1);
    big.capacity = 1;
    CHECK_THROWS_AS(count_bruteforce(big), std::domain_error);
}

TEST_CASE("gadget topology") {
    KnapsackInstance inst{{1, 2}, 2};
    KnapsackGadget gadget = build_gadget(inst, Rat(1, 2), 0);
    REQUIRE(validate(gadget.graph).ok());
    CHECK(gadget.graph.nodes.size() == 2 * inst.weights.size() + 4);
    CHECK(gadget.reward == 2 * 3 + 2 * Rat(1, 2) * 2);  // 2*sum(w) + 2*lambda*B
    CHECK_THROWS_AS(build_gadget({{}, 1}, 1, 0), std::domain_error);
    CHECK_THROWS_AS(build_gadget(inst, 0, 0), std::domain_error);
    CHECK_THROWS_AS(build_gadget(inst, 1, -1), std::domain_error);
}

TEST_CASE("count recovery on the worked instance") {
    KnapsackInstance inst{{1, 2}, 2};
    CHECK(reduction_count(inst, Rat(1, 2), 0) == 3);
    CHECK(reduction_count({{5}, 1}, Rat(1, 2), 0) == 1);
    // capacity at least the total weight: every subset fits
    CHECK(reduction_count({{1, 2, 3}, 6}, Rat(1, 2), 0) == 8);
}

TEST_CASE("recover_count rejects inconsistent parameters") {
    KnapsackInstance inst{{1, 2}, 2};
    CHECK_THROWS_AS(recover_count(Rat(1, 7), inst, Rat(1, 2), 0), std::runtime_error);
}

TEST_CASE("the agent reaches the junction on every realized path") {
    KnapsackInstance inst{{1, 2}, 2};
    for (const Rat& big_c : {Rat(0), Rat(1)}) {
        KnapsackGadget gadget = build_gadget(inst, Rat(1, 2), big_c);
        auto outcomes = enumerate_outcomes(
            gadget.graph, {Kind::Sophisticated, gadget.lambda, TieBreak::StopOnTie});
        for (const auto& o : outcomes) {
            REQUIRE(std::find(o.path.begin(), o.path.end(), "q") != o.path.end());
        }
    }
}

TEST_CASE("trace at the priced node: continue exactly when the subset overshoots") {
    KnapsackInstance inst{{1, 2}, 2};
    KnapsackGadget gadget = build_gadget(inst, Rat(1, 2), 0);
    auto outcomes = enumerate_outcomes(gadget.graph,
                                       {Kind::Sophisticated, gadget.lambda, TieBreak::StopOnTie});
    // subset sums 0,1,2,3; only 3 > B = 2 continues through qp to t
    for (const auto& o : outcomes) {
        bool through_qp = std::find(o.path.begin(), o.path.end(), "qp") != o.path.end();
        bool stopped_at_qp = !o.reached_target && o.path.back() == "qp";
        if (o.path.back() == "t" || stopped_at_qp) continue;
        CHECK_FALSE(through_qp);
    }
}

TEST_CASE("payoff formula in terms of the feasible fraction") {
    InstanceRng rng(5);
    for (int i = 0; i < 25; ++i) {
        KnapsackInstance inst = random_knapsack(rng, 8);
        for (const Rat& lambda : {Rat(1, 4), Rat(1)}) {
            for (const Rat& big_c : {Rat(0), Rat(2)}) {
                KnapsackGadget gadget = build_gadget(inst, lambda, big_c);
                Rat pi_s = gadget_traversal_payoff(gadget);
                int n = static_cast<int>(inst.weights.size());
                Rat p = Rat(count_bruteforce(inst), Int(1) << n);
                Rat expected = gadget.reward / 2 - Rat(weight_sum(inst), 2) - big_c -
                               lambda / 2 * (1 - p) * (inst.capacity + big_c);
                REQUIRE(pi_s == expected);
            }
        }
    }
}

TEST_CASE("end-to-end reduction on random instances") {
    InstanceRng rng(6);
    const std::vector<Rat> lambdas{{1, 4}, {1, 2}, 1};
    for (int i = 0; i < 30; ++i) {
        KnapsackInstance inst = random_knapsack(rng, 12);
        Int expect = count_bruteforce(inst);
        for (const Rat& lambda : lambdas) {
            for (const Rat& big_c : {Rat(0), Rat(1), Rat(weight_sum(inst))}) {
                REQUIRE(reduction_count(inst, lambda, big_c) == expect);
            }
        }
    }
}

TEST_CASE("threshold C pins the payoff to zero at the boundary fraction") {
    KnapsackInstance inst{{1, 2}, 2};  // count 3 of 4, fraction 3/4
    Rat lambda(1, 2);
    Rat c_exact = threshold_C(inst, lambda, Rat(3, 4));
    CHECK(gadget_traversal_payoff(build_gadget(inst, lambda, c_exact)) == 0);
    CHECK(gadget_starts(build_gadget(inst, lambda, c_exact)));

    Rat c_above = threshold_C(inst, lambda, parse_rat("0.76"));
    CHECK(gadget_traversal_payoff(build_gadget(inst, lambda, c_above)) < 0);
    CHECK_FALSE(gadget_starts(build_gadget(inst, lambda, c_above)));

    Rat c_below = threshold_C(inst, lambda, Rat(74, 100));
    CHECK(gadget_traversal_payoff(build_gadget(inst, lambda, c_below)) > 0);
    CHECK(gadget_starts(build_gadget(inst, lambda, c_below)));

    CHECK_THROWS_AS(threshold_C(inst, lambda, 1), std::domain_error);
}

TEST_CASE("binary search recovers the count from start decisions") {
    CHECK(binary_search_count({{1, 2}, 2}, Rat(1, 2)) == 3);
    CHECK(binary_search_count({{3, 3, 3}, 2}, Rat(1, 2)) == 1);
    CHECK(binary_search_count({{1, 2, 3}, 6}, Rat(1, 2)) == 8);
    KnapsackInstance big;
    big.weights.assign(17, 1);
    big.capacity = 1;
    CHECK_THROWS_AS(binary_search_count(big, Rat(1, 2)), std::domain_error);
}

TEST_CASE("binary search matches brute force on random instances") {
    InstanceRng rng(9);
    for (int i = 0; i < 10; ++i) {
        KnapsackInstance inst = random_knapsack(rng, 10);
        REQUIRE(binary_search_count(inst, Rat(1, 2)) == count_bruteforce(inst));
    }
}
