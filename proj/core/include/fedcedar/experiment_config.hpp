#pragma once

#include "fedcedar/local_model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fedcedar {

enum class Algorithm { fedcedar, fedavg, as1, as2, as3 };
enum class FedAvgWeighting { data_size, uniform };
enum class PartitionKind { shards, iid, topology };
// Vectors the graph similarity is measured on: the centers themselves, or
// the centers minus their mean.
enum class GraphSimilarity { raw, centered };

const char* to_string(Algorithm a);
const char* to_string(FedAvgWeighting w);
const char* to_string(PartitionKind p);
const char* to_string(GraphSimilarity g);
// Throw InvalidArgument on unknown names.
Algorithm parse_algorithm(const std::string& name);
FedAvgWeighting parse_fedavg_weighting(const std::string& name);
PartitionKind parse_partition_kind(const std::string& name);
GraphSimilarity parse_graph_similarity(const std::string& name);

struct DataConfig {
    PartitionKind partition = PartitionKind::shards;
    std::size_t shard = 2;
    std::size_t class_count = 10;
    std::size_t input_dim = 32;
    std::size_t examples_per_class = 500;
    double mean_scale = 0.5;
    double noise_sigma = 1.0;
    // Optional IDX ingestion; both paths set replaces the synthetic pool.
    std::string idx_images;
    std::string idx_labels;
    // Topology partition: preset 1..3, or a topology file when non-empty.
    int topology_preset = 1;
    std::string topology_file;
    std::size_t clients_per_node = 20;

    bool uses_idx() const { return !idx_images.empty() || !idx_labels.empty(); }
};

struct PeriodicActivation {
    int period = 5;
};

struct ExperimentConfig {
    std::size_t client_count = 100;
    double active_ratio = 0.3;
    int rounds = 100;
    std::size_t cluster_count = 5;
    int propagation_depth = 2;
    Algorithm algorithm = Algorithm::fedcedar;
    FedAvgWeighting fedavg_weighting = FedAvgWeighting::data_size;
    GraphSimilarity graph_similarity = GraphSimilarity::centered;
    TrainConfig train;
    std::vector<std::size_t> hidden_layers{64};
    DataConfig data;
    std::uint64_t master_seed = 0;
    std::size_t kmeans_max_iter = 50;
    std::optional<PeriodicActivation> periodic;

    // Throws ConfigError(validation) naming the offending field.
    void validate() const;
};

// B = round(N * gamma), at least 1.
std::size_t active_count(std::size_t client_count, double active_ratio);

} // namespace fedcedar
