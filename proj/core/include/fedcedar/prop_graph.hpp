#pragma once

#include "fedcedar/param_space.hpp"

#include <span>
#include <vector>

namespace fedcedar {

// Complete weighted digraph over cluster centers, self-edges included.
// Row i of the weight matrix sums to one.
struct WeightedGraph {
    std::size_t node_count = 0;
    std::vector<double> weights;  // node_count x node_count, row-major
    int round = 0;
    // Rows that fell back to a pure self-loop (near-zero center, or no
    // positive similarity to any node).
    std::vector<bool> fallback_rows;

    double operator()(std::size_t i, std::size_t j) const { return weights[i * node_count + j]; }
    bool any_fallback() const;
};

// raw(i,j) = max(0, cos(center_i, center_j)); rows normalized to sum to one.
WeightedGraph build_graph(std::span<const ParamVector> centers, int round);

// Applies centers <- R * centers `depth` times with the graph frozen.
std::vector<ParamVector> propagate(const WeightedGraph& graph, std::span<const ParamVector> centers, int depth);

// Unweighted mean of the centers.
ParamVector aggregate_mean(std::span<const ParamVector> centers);

} // namespace fedcedar
