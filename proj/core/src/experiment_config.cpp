#include "fedcedar/experiment_config.hpp"

#include "fedcedar/error.hpp"

#include <cmath>

namespace fedcedar {

const char* to_string(Algorithm a) {
    switch (a) {
    case Algorithm::fedcedar: return "fedcedar";
    case Algorithm::fedavg: return "fedavg";
    case Algorithm::as1: return "as1";
    case Algorithm::as2: return "as2";
    case Algorithm::as3: return "as3";
    }
    return "unknown";
}

const char* to_string(FedAvgWeighting w) {
    return w == FedAvgWeighting::uniform ? "uniform" : "data_size";
}

const char* to_string(PartitionKind p) {
    switch (p) {
    case PartitionKind::shards: return "shards";
    case PartitionKind::iid: return "iid";
    case PartitionKind::topology: return "topology";
    }
    return "unknown";
}

const char* to_string(GraphSimilarity g) {
    return g == GraphSimilarity::raw ? "raw" : "centered";
}

GraphSimilarity parse_graph_similarity(const std::string& name) {
    if (name == "raw") return GraphSimilarity::raw;
    if (name == "centered") return GraphSimilarity::centered;
    throw InvalidArgument("unknown graph similarity '" + name + "'");
}

Algorithm parse_algorithm(const std::string& name) {
    for (Algorithm a : {Algorithm::fedcedar, Algorithm::fedavg, Algorithm::as1, Algorithm::as2, Algorithm::as3})
        if (name == to_string(a)) return a;
    throw InvalidArgument("unknown algorithm '" + name + "'");
}

FedAvgWeighting parse_fedavg_weighting(const std::string& name) {
    if (name == "data_size") return FedAvgWeighting::data_size;
    if (name == "uniform") return FedAvgWeighting::uniform;
    throw InvalidArgument("unknown fedavg weighting '" + name + "'");
}

PartitionKind parse_partition_kind(const std::string& name) {
    for (PartitionKind p : {PartitionKind::shards, PartitionKind::iid, PartitionKind::topology})
        if (name == to_string(p)) return p;
    throw InvalidArgument("unknown partition '" + name + "'");
}

std::size_t active_count(std::size_t client_count, double active_ratio) {
    const auto b = static_cast<std::size_t>(std::llround(static_cast<double>(client_count) * active_ratio));
    return std::max<std::size_t>(b, 1);
}

namespace {

void require(bool ok, const std::string& field, const std::string& message) {
    if (!ok) throw ConfigError(ConfigErrorKind::validation, field, field + ": " + message);
}

} // namespace

void ExperimentConfig::validate() const {
    require(active_ratio > 0.0 && active_ratio <= 1.0, "active_ratio", "must lie in (0, 1]");
    require(rounds >= 0, "rounds", "must be non-negative");
    require(cluster_count >= 1, "cluster_count", "must be at least 1");
    require(propagation_depth >= 0, "propagation_depth", "must be non-negative");
    require(kmeans_max_iter >= 1, "kmeans_max_iter", "must be at least 1");
    require(train.learning_rate > 0.0 && train.learning_rate <= 1.0, "train.learning_rate", "must lie in (0, 1]");
    require(train.local_epochs >= 1, "train.local_epochs", "must be positive");
    require(train.batch_size >= 1, "train.batch_size", "must be positive");
    for (std::size_t h : hidden_layers) require(h >= 1, "hidden_layers", "sizes must be positive");
    require(data.shard >= 1, "data.shard", "must be at least 1");
    require(data.class_count >= 1, "data.class_count", "must be positive");
    require(data.input_dim >= 1, "data.input_dim", "must be positive");
    require(data.examples_per_class >= 1, "data.examples_per_class", "must be positive");
    require(data.noise_sigma > 0.0, "data.noise_sigma", "must be positive");
    require(data.mean_scale > 0.0, "data.mean_scale", "must be positive");
    require(data.idx_images.empty() == data.idx_labels.empty(), "data.idx_images",
            "idx_images and idx_labels must be given together");
    require(data.clients_per_node >= 1, "data.clients_per_node", "must be positive");
    if (data.partition == PartitionKind::topology && data.topology_file.empty())
        require(data.topology_preset >= 1 && data.topology_preset <= 3, "data.topology_preset", "must be 1, 2 or 3");
    else
        require(client_count >= 1, "client_count", "must be positive");
    if (periodic) {
        require(periodic->period >= 1, "periodic_activation.period", "must be positive");
        require(data.partition == PartitionKind::topology, "periodic_activation",
                "requires the topology partition");
    }
}

} // namespace fedcedar
