#pragma once

#include "sunkcost/agents.hpp"
#include "sunkcost/graph.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sunkcost {

struct KnapsackInstance {
    std::vector<long long> weights;  // all >= 1
    long long capacity = 0;          // B >= 0
};

struct KnapsackGadget {
    TaskGraph graph;
    Rat reward;   // fixed to 2*sum(w) + 2*lambda*B
    Rat big_c;    // start-node cost C
    Rat lambda;
};

inline long long weight_sum(const KnapsackInstance& inst) {
    long long s = 0;
    for (long long w : inst.weights) s += w;
    return s;
}

inline Rat gadget_reward(const KnapsackInstance& inst, const Rat& lambda) {
    return 2 * Rat(weight_sum(inst)) + 2 * lambda * inst.capacity;
}

/// Counting gadget: two parallel rails where the u-rail charges w_i and the
/// v-rail is free, so the sunk cost at q encodes one random subset; the
/// post-q node q' is priced so the agent continues there exactly when the
/// subset overshoots the capacity. Evaluate under StopOnTie.
inline KnapsackGadget build_gadget(const KnapsackInstance& inst, const Rat& lambda,
                                   const Rat& big_c) {
    if (lambda <= 0) throw std::domain_error("lambda must be positive");
    if (big_c < 0) throw std::domain_error("C must be non-negative");
    if (inst.weights.empty()) throw std::domain_error("gadget needs at least one weight");
    for (long long w : inst.weights)
        if (w < 1) throw std::domain_error("weights must be >= 1");

    const int n = static_cast<int>(inst.weights.size());
    const Rat reward = gadget_reward(inst, lambda);
    const Rat half(1, 2);

    TaskGraph g;
    g.reward = reward;
    g.start = "s";
    g.target = "t";
    g.cost_model = CostModel::NodeCosts;
    auto u = [](int i) { return "u" + std::to_string(i); };
    auto v = [](int i) { return "v" + std::to_string(i); };

    g.nodes.push_back({"s", big_c, false});
    for (int i = 1; i <= n; ++i) {
        g.nodes.push_back({u(i), Rat(inst.weights[i - 1]), false});
        g.nodes.push_back({v(i), 0, false});
    }
    g.nodes.push_back({"q", 0, false});
    g.nodes.push_back({"qp", reward + lambda * (inst.capacity + big_c), false});
    g.nodes.push_back({"t", 0, false});

    g.edges.push_back({"s", u(1), half, 0});
    g.edges.push_back({"s", v(1), half, 0});
    for (int i = 1; i < n; ++i)
        for (const auto& from : {u(i), v(i)}) {
            g.edges.push_back({from, u(i + 1), half, 0});
            g.edges.push_back({from, v(i + 1), half, 0});
        }
    g.edges.push_back({u(n), "q", 1, 0});
    g.edges.push_back({v(n), "q", 1, 0});
    g.edges.push_back({"q", "qp", half, 0});
    g.edges.push_back({"q", "t", half, 0});
    g.edges.push_back({"qp", "t", 1, 0});

    return {std::move(g), reward, big_c, lambda};
}

/// The sophisticated agent's payoff for traversing the gadget from s, under
/// the gadget's StopOnTie convention. This is the continuation value at the
/// start, which stays meaningful even when the agent would decline to start.
inline Rat gadget_traversal_payoff(const KnapsackGadget& gadget, EvalOptions opts = {}) {
    return eval_sophisticated(gadget.graph, gadget.lambda, TieBreak::StopOnTie, opts).start_value;
}

/// Start rule for the binary-search claim: traverse iff the traversal payoff
/// is non-negative (ties at s favour continuing, unlike the q' rule).
inline bool gadget_starts(const KnapsackGadget& gadget, EvalOptions opts = {}) {
    return gadget_traversal_payoff(gadget, opts) >= 0;
}

/// #Solutions = 2^n * ((2*pi_s + sum(w) - R + 2C) / (lambda(B+C)) + 1).
/// A non-integer or out-of-range result signals a parameter mismatch.
inline Int recover_count(const Rat& pi_s, const KnapsackInstance& inst, const Rat& lambda,
                         const Rat& big_c) {
    if (Rat(inst.capacity) + big_c <= 0) throw std::domain_error("needs B + C > 0");
    const int n = static_cast<int>(inst.weights.size());
    Rat reward = gadget_reward(inst, lambda);
    Rat fraction =
        (2 * pi_s + weight_sum(inst) - reward + 2 * big_c) / (lambda * (inst.capacity + big_c)) + 1;
    Rat count = (Int(1) << n) * fraction;
    if (denominator(count) != 1)
        throw std::runtime_error("recovered count is not an integer: " + rat_to_string(count));
    Int c = numerator(count);
    if (c < 0 || c > (Int(1) << n))
        throw std::runtime_error("recovered count out of [0, 2^n]: " + c.str());
    return c;
}

/// Full pipeline: build, evaluate, invert.
inline Int reduction_count(const KnapsackInstance& inst, const Rat& lambda, const Rat& big_c,
                           EvalOptions opts = {}) {
    return recover_count(gadget_traversal_payoff(build_gadget(inst, lambda, big_c), opts), inst,
                         lambda, big_c);
}

/// Subset enumeration oracle.
inline Int count_bruteforce(const KnapsackInstance& inst) {
    const int n = static_cast<int>(inst.weights.size());
    if (n > 22) throw std::domain_error("brute-force guard: n <= 22");
    Int count = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        long long total = 0;
        for (int i = 0; i < n; ++i)
            if (mask & (std::uint64_t(1) << i)) total += inst.weights[i];
        if (total <= inst.capacity) ++count;
    }
    return count;
}

/// C making the traversal payoff exactly 0 when the feasible fraction is
/// alpha: C = (R - sum(w) - lambda(1-alpha)B) / (2 + lambda(1-alpha)).
inline Rat threshold_C(const KnapsackInstance& inst, const Rat& lambda, const Rat& alpha) {
    if (alpha <= 0 || alpha >= 1) throw std::domain_error("alpha must be in (0, 1)");
    Rat reward = gadget_reward(inst, lambda);
    return (reward - weight_sum(inst) - lambda * (1 - alpha) * inst.capacity) /
           (2 + lambda * (1 - alpha));
}

/// Recovers the exact count using only start/not-start decisions, probing
/// dyadic alpha values so every C stays a small rational.
inline Int binary_search_count(const KnapsackInstance& inst, const Rat& lambda,
                               EvalOptions opts = {}) {
    const int n = static_cast<int>(inst.weights.size());
    if (n > 16) throw std::domain_error("binary search guard: n <= 16");
    const Int total = Int(1) << n;

    auto starts_at = [&](const Rat& alpha) {
        Rat c = threshold_C(inst, lambda, alpha);
        return gadget_starts(build_gadget(inst, lambda, c), opts);
    };

    // count >= 1 always (the empty subset fits any B >= 0); find the largest
    // m in [1, 2^n - 1] with starts(m / 2^n), i.e. count >= m.
    Int lo = 1, hi = total - 1;
    while (lo < hi) {
        Int mid = (lo + hi + 1) / 2;
        if (starts_at(Rat(mid, total)))
            lo = mid;
        else
            hi = mid - 1;
    }
    if (lo == total - 1 && starts_at(Rat(2 * total - 1, 2 * total)))
        return total;  // count >= 2^n - 1/2, hence exactly 2^n
    return lo;
}

}  // namespace sunkcost
