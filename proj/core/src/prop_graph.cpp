#include "fedcedar/prop_graph.hpp"

#include "fedcedar/error.hpp"

#include <algorithm>

namespace fedcedar {

bool WeightedGraph::any_fallback() const {
    return std::find(fallback_rows.begin(), fallback_rows.end(), true) != fallback_rows.end();
}

WeightedGraph build_graph(std::span<const ParamVector> centers, int round) {
    if (centers.empty()) throw EmptyInput("graph over zero centers");
    const std::size_t k = centers.size();
    for (const auto& c : centers) {
        require_same_layout(centers.front(), c);
        if (!c.all_finite()) throw InvalidArgument("non-finite cluster center");
    }

    std::vector<bool> degenerate(k);
    for (std::size_t i = 0; i < k; ++i) degenerate[i] = centers[i].norm() < kDegenerateNorm;

    WeightedGraph g;
    g.node_count = k;
    g.round = round;
    g.weights.assign(k * k, 0.0);
    g.fallback_rows.assign(k, false);

    // Similarity is symmetric; compute the upper triangle once.
    std::vector<double> raw(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        if (degenerate[i]) continue;
        raw[i * k + i] = 1.0;
        for (std::size_t j = i + 1; j < k; ++j) {
            if (degenerate[j]) continue;
            const double s = std::max(0.0, cosine_similarity(centers[i], centers[j]));
            raw[i * k + j] = s;
            raw[j * k + i] = s;
        }
    }

    for (std::size_t i = 0; i < k; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < k; ++j) total += raw[i * k + j];
        if (degenerate[i] || !(total > 0.0)) {
            g.weights[i * k + i] = 1.0;
            g.fallback_rows[i] = true;
            continue;
        }
        for (std::size_t j = 0; j < k; ++j) g.weights[i * k + j] = raw[i * k + j] / total;
    }
    return g;
}

std::vector<ParamVector> propagate(const WeightedGraph& graph, std::span<const ParamVector> centers, int depth) {
    if (depth < 0) throw InvalidArgument("propagation depth must be non-negative");
    if (centers.size() != graph.node_count)
        throw InvalidArgument("graph has " + std::to_string(graph.node_count) + " nodes but " +
                              std::to_string(centers.size()) + " centers were given");
    std::vector<ParamVector> current(centers.begin(), centers.end());
    const std::size_t k = graph.node_count;
    for (int step = 0; step < depth; ++step) {
        std::vector<ParamVector> next;
        next.reserve(k);
        for (std::size_t row = 0; row < k; ++row) {
            std::span<const double> w(graph.weights.data() + row * k, k);
            next.push_back(weighted_sum(current, w));
        }
        current = std::move(next);
    }
    return current;
}

ParamVector aggregate_mean(std::span<const ParamVector> centers) {
    return mean_of(centers);
}

} // namespace fedcedar
