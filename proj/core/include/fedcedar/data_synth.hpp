#pragma once

#include "fedcedar/dataset.hpp"
#include "fedcedar/error.hpp"
#include "fedcedar/local_model.hpp"

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fedcedar {

// Isotropic Gaussian classification task: examples of class c are drawn from
// Normal(class_means[c], noise_sigma^2 I).
struct SyntheticTaskSpec {
    std::size_t class_count = 10;
    std::size_t input_dim = 32;
    Matrix class_means;  // class_count x input_dim
    double noise_sigma = 1.0;
    std::size_t examples_per_class = 500;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

// Class means drawn from a seeded standard normal and multiplied by `scale`.
Matrix random_class_means(std::size_t class_count, std::size_t input_dim, double scale, std::uint64_t seed);

// Pool ordered by class, then draw index. Example ids are pool positions.
ExamplePool generate_task(const SyntheticTaskSpec& spec);

// Splits one client's examples into train/test, stratified by label: each
// label contributes round(test_fraction * count) test examples, capped so at
// least one training example of that label remains.
ClientDataset split_client(int client_id, std::vector<Example> examples, std::size_t class_count,
                           double test_fraction = 0.2);

std::size_t class_count_of(const ExamplePool& pool);

// Random disjoint shares of equal size (+-1).
std::vector<ClientDataset> partition_iid(const ExamplePool& pool, std::size_t client_count, std::uint64_t seed);

// Sort by label, cut into client_count * shard contiguous shards and deal
// `shard` shards to each client. A shard only straddles a label boundary
// when the per-class counts are not multiples of the shard size.
std::vector<ClientDataset> partition_shards(const ExamplePool& pool, std::size_t client_count, std::size_t shard,
                                            std::uint64_t seed);

struct TopologyNode {
    int node_id = 0;
    std::set<int> labels;
};

struct TopologySpec {
    std::string name;
    std::vector<TopologyNode> nodes;
    std::size_t clients_per_node = 20;

    // Pairs of node indices (into `nodes`) whose label sets intersect, i < j.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;
    std::size_t client_count() const { return nodes.size() * clients_per_node; }
    void validate() const;
};

// Built-in presets: 1 (3 nodes), 2 (4 nodes), 3 (5 nodes). Adjacent nodes in
// each chain share exactly one label.
TopologySpec topology_preset(int index);

// JSON document: {"name": ..., "clients_per_node": 20, "nodes": [{"id": 1, "labels": [0,1,2]}, ...]}
TopologySpec load_topology(const std::filesystem::path& path);
TopologySpec parse_topology(const std::string& text);

struct TopologyPopulation {
    std::vector<ClientDataset> clients;
    std::vector<int> node_of_client;  // index into spec.nodes, per client
};

// Clients of node i get examples only from node i's labels. Every label's
// examples are dealt disjointly among all clients whose node contains it.
TopologyPopulation build_topology_population(const TopologySpec& spec, const ExamplePool& pool,
                                             std::uint64_t seed);

enum class IdxErrorKind { bad_magic, truncated, count_mismatch, io };

class IdxError : public Error {
public:
    IdxError(IdxErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
    IdxErrorKind kind() const { return kind_; }

private:
    IdxErrorKind kind_;
};

// MNIST-style IDX files: images magic 0x00000803, labels 0x00000801,
// big-endian headers. Pixels are scaled to [0, 1].
ExamplePool load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path);
ExamplePool parse_idx(const std::vector<unsigned char>& images, const std::vector<unsigned char>& labels);

} // namespace fedcedar
