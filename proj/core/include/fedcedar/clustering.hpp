#pragma once

#include "fedcedar/param_space.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace fedcedar {

// Dense form of the cluster indicator: labels[b] is the cluster of vector b.
struct ClusterAssignment {
    std::vector<int> labels;
    std::vector<std::size_t> cluster_sizes;

    std::size_t cluster_count() const { return cluster_sizes.size(); }
};

struct ClusterState {
    std::vector<ParamVector> centers;
    ClusterAssignment assignment;
    // Objective after each assignment step; the final entry is the objective
    // of the returned centers.
    std::vector<double> objective_trace;
    std::size_t requested_k = 0;
    std::size_t iterations = 0;
    bool converged = false;

    std::size_t effective_k() const { return centers.size(); }
};

struct KMeansOptions {
    std::size_t k = 5;
    std::uint64_t seed = 0;
    std::size_t max_iter = 50;
    // Independent k-means++ restarts; the lowest final objective wins
    // (earliest restart on ties). Restart r seeds with derive_seed(seed, {r}).
    std::size_t restarts = 10;
};

// Lloyd's algorithm with k-means++ seeding, best of options.restarts runs. The effective cluster count is
// min(k, number of distinct vectors); every returned cluster is non-empty.
ClusterState kmeans(std::span<const ParamVector> vectors, const KMeansOptions& options);

// Sum of squared distances of each vector to its assigned center.
double objective(std::span<const ParamVector> vectors, const ClusterState& state);
double objective(std::span<const ParamVector> vectors, std::span<const ParamVector> centers,
                 std::span<const int> labels);

// Index of the nearest center; ties resolve to the lowest index.
std::size_t assign_to_nearest(const ParamVector& vector, std::span<const ParamVector> centers);

// k-means++ seeding alone, exposed for testing. Stops early when every
// remaining vector coincides with a chosen center.
std::vector<ParamVector> kmeanspp_seed(std::span<const ParamVector> vectors, std::size_t k, std::uint64_t seed);

} // namespace fedcedar
