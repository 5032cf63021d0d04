#pragma once

#include "sunkcost/fan.hpp"
#include "sunkcost/graph.hpp"
#include "sunkcost/hardness.hpp"

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace sunkcost {

// Seeded generator for test corpora and CLI sweeps. Draws go through plain
// modulo reduction rather than std distributions, which are not specified
// bit-for-bit across standard libraries.
class InstanceRng {
  public:
    explicit InstanceRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t below(std::uint64_t bound) { return gen_() % bound; }
    long long range(long long lo, long long hi) {  // inclusive
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Rational strictly inside (0, 1) with denominator <= max_den.
    Rat prob(int max_den = 10) {
        long long den = range(2, max_den);
        long long num = range(1, den - 1);
        return Rat(num, den);
    }

    /// Rational in [0, hi] with denominator <= max_den.
    Rat cost(const Rat& hi, int max_den = 10) {
        long long den = range(1, max_den);
        long long num = range(0, den);
        return Rat(num, den) * hi;
    }

  private:
    std::mt19937_64 gen_;
};

/// Random valid node-cost DAG with `max_nodes` nodes at most: node 0 is the
/// start, the last node the target, every node reachable from the start and
/// the target reachable from every interior node.
inline TaskGraph random_dag(InstanceRng& rng, int max_nodes = 10) {
    int m = static_cast<int>(rng.range(3, max_nodes));
    auto id = [&](int i) { return i == m - 1 ? std::string("t") : "n" + std::to_string(i); };

    std::set<std::pair<int, int>> edges;
    for (int i = 1; i < m; ++i) edges.insert({static_cast<int>(rng.range(0, i - 1)), i});
    for (int i = 0; i < m - 1; ++i) {
        bool has_out = false;
        for (const auto& [a, b] : edges)
            if (a == i) { has_out = true; break; }
        if (!has_out) edges.insert({i, static_cast<int>(rng.range(i + 1, m - 1))});
    }
    int extras = static_cast<int>(rng.range(0, m));
    for (int e = 0; e < extras; ++e) {
        int a = static_cast<int>(rng.range(0, m - 2));
        int b = static_cast<int>(rng.range(a + 1, m - 1));
        edges.insert({a, b});
    }

    TaskGraph g;
    g.reward = 1;
    g.start = id(0);
    g.target = id(m - 1);
    g.cost_model = CostModel::NodeCosts;
    for (int i = 0; i < m; ++i)
        g.nodes.push_back({id(i), i == m - 1 ? Rat(0) : rng.cost(Rat(1, 2)), false});

    for (int i = 0; i < m - 1; ++i) {
        std::vector<int> targets;
        for (const auto& [a, b] : edges)
            if (a == i) targets.push_back(b);
        std::vector<long long> weights;
        long long total = 0;
        for (std::size_t j = 0; j < targets.size(); ++j) {
            weights.push_back(rng.range(1, 6));
            total += weights.back();
        }
        for (std::size_t j = 0; j < targets.size(); ++j)
            g.edges.push_back({id(i), id(targets[j]), Rat(weights[j], total), 0});
    }
    return g;
}

inline FanSpec random_fan(InstanceRng& rng, int max_n = 12) {
    FanSpec spec;
    spec.n = static_cast<int>(rng.range(2, max_n));
    spec.reward = 1;
    for (int i = 1; i < spec.n; ++i) spec.probs.push_back(rng.prob());
    for (int i = 1; i <= spec.n; ++i) spec.costs.push_back(rng.cost(Rat(1, 2)));
    return spec;
}

/// Random s -> {t, v}, v -> t instance with reward 1.
inline TaskGraph random_three_node(InstanceRng& rng) {
    Rat p = rng.prob();
    TaskGraph g;
    g.reward = 1;
    g.start = "s";
    g.target = "t";
    g.cost_model = CostModel::NodeCosts;
    g.nodes = {{"s", rng.cost(Rat(1)), false}, {"t", 0, false}, {"v", rng.cost(Rat(3)), false}};
    g.edges = {{"s", "t", p, 0}, {"s", "v", 1 - p, 0}, {"v", "t", 1, 0}};
    return g;
}

inline KnapsackInstance random_knapsack(InstanceRng& rng, int max_n, long long max_w = 50) {
    KnapsackInstance inst;
    int n = static_cast<int>(rng.range(1, max_n));
    for (int i = 0; i < n; ++i) inst.weights.push_back(rng.range(1, max_w));
    inst.capacity = rng.range(1, weight_sum(inst));
    return inst;
}

}  // namespace sunkcost
