#include "fedcedar/clustering.hpp"

#include "fedcedar/error.hpp"
#include "fedcedar/rng.hpp"

#include <algorithm>
#include <limits>

namespace fedcedar {

std::size_t assign_to_nearest(const ParamVector& vector, std::span<const ParamVector> centers) {
    if (centers.empty()) throw EmptyInput("no centers to assign to");
    std::size_t best = 0;
    double best_d = euclidean_distance_sq(vector, centers[0]);
    for (std::size_t k = 1; k < centers.size(); ++k) {
        const double d = euclidean_distance_sq(vector, centers[k]);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

double objective(std::span<const ParamVector> vectors, std::span<const ParamVector> centers,
                 std::span<const int> labels) {
    if (labels.size() != vectors.size()) throw InvalidArgument("one label per vector required");
    double j = 0.0;
    for (std::size_t b = 0; b < vectors.size(); ++b)
        j += euclidean_distance_sq(vectors[b], centers[static_cast<std::size_t>(labels[b])]);
    return j;
}

double objective(std::span<const ParamVector> vectors, const ClusterState& state) {
    return objective(vectors, state.centers, state.assignment.labels);
}

std::vector<ParamVector> kmeanspp_seed(std::span<const ParamVector> vectors, std::size_t k, std::uint64_t seed) {
    if (vectors.empty()) throw EmptyInput("k-means on an empty set");
    if (k == 0) throw InvalidArgument("k must be at least 1");
    Rng rng(seed);
    std::vector<ParamVector> centers;
    centers.push_back(vectors[static_cast<std::size_t>(rng.below(vectors.size()))]);

    std::vector<double> d2(vectors.size());
    for (std::size_t b = 0; b < vectors.size(); ++b) d2[b] = euclidean_distance_sq(vectors[b], centers[0]);

    while (centers.size() < k) {
        double total = 0.0;
        for (double d : d2) total += d;
        if (!(total > 0.0)) break;  // every vector already coincides with a center

        const double target = rng.uniform01() * total;
        double acc = 0.0;
        std::size_t pick = vectors.size();
        for (std::size_t b = 0; b < vectors.size(); ++b) {
            if (d2[b] <= 0.0) continue;
            acc += d2[b];
            pick = b;
            if (acc > target) break;
        }
        centers.push_back(vectors[pick]);
        for (std::size_t b = 0; b < vectors.size(); ++b)
            d2[b] = std::min(d2[b], euclidean_distance_sq(vectors[b], centers.back()));
    }
    return centers;
}

namespace {

std::vector<ParamVector> member_means(std::span<const ParamVector> vectors, const std::vector<int>& labels,
                                      std::size_t k) {
    std::vector<std::vector<ParamVector>> members(k);
    for (std::size_t b = 0; b < vectors.size(); ++b) members[static_cast<std::size_t>(labels[b])].push_back(vectors[b]);
    std::vector<ParamVector> centers;
    centers.reserve(k);
    for (auto& m : members) centers.push_back(mean_of(m));
    return centers;
}

} // namespace

namespace {

ClusterState lloyd(std::span<const ParamVector> vectors, const KMeansOptions& options, std::uint64_t seed) {
    ClusterState state;
    state.requested_k = options.k;
    state.centers = kmeanspp_seed(vectors, std::min(options.k, vectors.size()), seed);
    const std::size_t k = state.centers.size();

    std::vector<int> labels(vectors.size(), -1);
    std::vector<double> dist(vectors.size());
    for (std::size_t it = 0; it < options.max_iter; ++it) {
        std::vector<int> next(vectors.size());
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t b = 0; b < vectors.size(); ++b) {
            const std::size_t c = assign_to_nearest(vectors[b], state.centers);
            next[b] = static_cast<int>(c);
            dist[b] = euclidean_distance_sq(vectors[b], state.centers[c]);
            ++sizes[c];
        }
        // Repair: an empty cluster takes over the point farthest from its center.
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] != 0) continue;
            std::size_t far = vectors.size();
            double far_d = -1.0;
            for (std::size_t b = 0; b < vectors.size(); ++b)
                if (sizes[static_cast<std::size_t>(next[b])] > 1 && dist[b] > far_d) {
                    far_d = dist[b];
                    far = b;
                }
            if (far == vectors.size()) throw Error("k-means: cannot repair an empty cluster");
            --sizes[static_cast<std::size_t>(next[far])];
            next[far] = static_cast<int>(c);
            sizes[c] = 1;
            state.centers[c] = vectors[far];
            dist[far] = 0.0;
        }

        double j = 0.0;
        for (double d : dist) j += d;
        state.objective_trace.push_back(j);

        const bool changed = next != labels;
        labels = std::move(next);
        state.centers = member_means(vectors, labels, k);
        state.iterations = it + 1;
        if (!changed) {
            state.converged = true;
            break;
        }
    }

    state.assignment.labels = labels;
    state.assignment.cluster_sizes.assign(k, 0);
    for (int l : labels) ++state.assignment.cluster_sizes[static_cast<std::size_t>(l)];
    state.objective_trace.push_back(objective(vectors, state));
    return state;
}

} // namespace

ClusterState kmeans(std::span<const ParamVector> vectors, const KMeansOptions& options) {
    if (vectors.empty()) throw EmptyInput("k-means on an empty set");
    if (options.k == 0) throw InvalidArgument("k must be at least 1");
    if (options.max_iter == 0) throw InvalidArgument("max_iter must be at least 1");
    if (options.restarts == 0) throw InvalidArgument("restarts must be at least 1");
    for (const auto& v : vectors) require_same_layout(vectors.front(), v);

    ClusterState best = lloyd(vectors, options, derive_seed(options.seed, {0}));
    for (std::size_t r = 1; r < options.restarts; ++r) {
        ClusterState candidate = lloyd(vectors, options, derive_seed(options.seed, {r}));
        if (candidate.objective_trace.back() < best.objective_trace.back()) best = std::move(candidate);
    }
    return best;
}

} // namespace fedcedar
