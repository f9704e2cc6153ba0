#include "fedcedar/orchestrator.hpp"

#include "fedcedar/error.hpp"
#include "fedcedar/metrics.hpp"
#include "fedcedar/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fedcedar {

std::vector<int> sample_clients(std::size_t client_count, double active_ratio, int round, std::uint64_t master_seed) {
    const std::size_t b = std::min(active_count(client_count, active_ratio), client_count);
    std::vector<int> ids(client_count);
    std::iota(ids.begin(), ids.end(), 0);
    Rng rng(derive_seed(master_seed, Stream::sampling, {static_cast<std::uint64_t>(round)}));
    // Partial Fisher-Yates: the first b slots are a uniform sample.
    for (std::size_t i = 0; i < b; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(client_count - i));
        std::swap(ids[i], ids[j]);
    }
    ids.resize(b);
    std::sort(ids.begin(), ids.end());
    return ids;
}

bool in_period_set(int round, int period) {
    return period > 0 && (round + 1) % period == 0;
}

std::vector<int> periodic_activate(const std::vector<int>& node_of_client, std::size_t node_count,
                                   double active_ratio, int round, int period, std::uint64_t master_seed) {
    if (!in_period_set(round, period)) return sample_clients(node_of_client.size(), active_ratio, round, master_seed);

    std::vector<std::vector<int>> members(node_count);
    for (std::size_t c = 0; c < node_of_client.size(); ++c)
        members.at(static_cast<std::size_t>(node_of_client[c])).push_back(static_cast<int>(c));

    std::vector<int> active;
    for (std::size_t node = 0; node < node_count; ++node) {
        auto& pool = members[node];
        // 1e-9 absorbs representation error such as 0.3 * 20 = 6.000000000000001.
        const double want = std::ceil(active_ratio * static_cast<double>(pool.size()) - 1e-9);
        const std::size_t take = std::min(pool.size(), static_cast<std::size_t>(std::max(want, 1.0)));
        Rng rng(derive_seed(master_seed, Stream::sampling,
                            {static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(node) + 1}));
        for (std::size_t i = 0; i < take; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        active.insert(active.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
    }
    std::sort(active.begin(), active.end());
    return active;
}

namespace {

ClusterAssignment single_cluster(std::size_t n) {
    ClusterAssignment a;
    a.labels.assign(n, 0);
    a.cluster_sizes = {n};
    return a;
}

ClusterAssignment identity_assignment(std::size_t n) {
    ClusterAssignment a;
    a.labels.resize(n);
    std::iota(a.labels.begin(), a.labels.end(), 0);
    a.cluster_sizes.assign(n, 1);
    return a;
}

// Vectors handed to build_graph. In centered mode every node is expressed
// relative to the mean node, so the similarity reflects how nodes differ
// rather than the parameters they all share.
std::vector<ParamVector> similarity_frame(const ExperimentConfig& config, std::span<const ParamVector> nodes) {
    std::vector<ParamVector> out(nodes.begin(), nodes.end());
    if (config.graph_similarity == GraphSimilarity::raw || nodes.size() < 2) return out;
    const ParamVector mean = mean_of(nodes);
    for (auto& v : out) {
        auto dst = v.values();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= mean[i];
    }
    return out;
}

} // namespace

VariantOutput apply_variant(const ExperimentConfig& config, std::span<const ParamVector> uploads,
                            std::span<const std::size_t> train_sizes, int round) {
    if (uploads.empty()) throw EmptyInput("no uploaded models");
    VariantOutput out;
    const KMeansOptions km{config.cluster_count,
                           derive_seed(config.master_seed, Stream::clustering, {static_cast<std::uint64_t>(round)}),
                           config.kmeans_max_iter};

    switch (config.algorithm) {
    case Algorithm::fedcedar:
    case Algorithm::as3: {
        out.clustering = kmeans(uploads, km);
        out.graph = build_graph(similarity_frame(config, out.clustering->centers), round);
        out.updated_centers = propagate(*out.graph, out.clustering->centers, config.propagation_depth);
        out.assignment = out.clustering->assignment;
        if (config.algorithm == Algorithm::as3) {
            out.updated_centers = {aggregate_mean(out.updated_centers)};
            out.assignment = single_cluster(uploads.size());
        }
        break;
    }
    case Algorithm::as1: {
        out.graph = build_graph(similarity_frame(config, uploads), round);
        out.updated_centers = propagate(*out.graph, uploads, config.propagation_depth);
        out.assignment = identity_assignment(uploads.size());
        break;
    }
    case Algorithm::as2: {
        out.clustering = kmeans(uploads, km);
        out.updated_centers = out.clustering->centers;
        out.assignment = out.clustering->assignment;
        break;
    }
    case Algorithm::fedavg: {
        if (config.fedavg_weighting == FedAvgWeighting::uniform) {
            out.updated_centers = {mean_of(uploads)};
        } else {
            if (train_sizes.size() != uploads.size()) throw InvalidArgument("one training size per upload required");
            const double total =
                static_cast<double>(std::accumulate(train_sizes.begin(), train_sizes.end(), std::size_t{0}));
            if (!(total > 0.0)) throw InvalidArgument("fedavg with no training examples");
            std::vector<double> w;
            w.reserve(train_sizes.size());
            for (std::size_t s : train_sizes) w.push_back(static_cast<double>(s) / total);
            out.updated_centers = {weighted_sum(uploads, w)};
        }
        out.assignment = single_cluster(uploads.size());
        break;
    }
    }
    return out;
}

Population build_population(const ExperimentConfig& config) {
    config.validate();
    const auto& d = config.data;
    const std::uint64_t data_seed = derive_seed(config.master_seed, Stream::data);

    ExamplePool pool;
    std::size_t classes = d.class_count;
    std::size_t input_dim = d.input_dim;
    if (d.uses_idx()) {
        pool = load_idx(d.idx_images, d.idx_labels);
        if (pool.empty()) throw InvalidArgument("IDX files contain no examples");
        classes = class_count_of(pool);
        input_dim = pool.front().features.size();
    } else {
        SyntheticTaskSpec spec;
        spec.class_count = d.class_count;
        spec.input_dim = d.input_dim;
        spec.class_means = random_class_means(d.class_count, d.input_dim, d.mean_scale, derive_seed(data_seed, {1}));
        spec.noise_sigma = d.noise_sigma;
        spec.examples_per_class = d.examples_per_class;
        spec.rng_seed = derive_seed(data_seed, {2});
        pool = generate_task(spec);
    }

    Population pop;
    const std::uint64_t partition_seed = derive_seed(data_seed, {3});
    switch (d.partition) {
    case PartitionKind::iid: pop.clients = partition_iid(pool, config.client_count, partition_seed); break;
    case PartitionKind::shards:
        pop.clients = partition_shards(pool, config.client_count, d.shard, partition_seed);
        break;
    case PartitionKind::topology: {
        TopologySpec spec = d.topology_file.empty() ? topology_preset(d.topology_preset) : load_topology(d.topology_file);
        spec.clients_per_node = d.clients_per_node;
        auto built = build_topology_population(spec, pool, partition_seed);
        pop.clients = std::move(built.clients);
        pop.node_of_client = std::move(built.node_of_client);
        pop.node_count = spec.nodes.size();
        break;
    }
    }

    for (const auto& c : pop.clients)
        if (c.train.empty() || c.test.empty())
            throw InvalidArgument("client " + std::to_string(c.client_id) +
                                  " ended up without training or test data; enlarge the pool");

    pop.architecture.layer_sizes.push_back(input_dim);
    pop.architecture.layer_sizes.insert(pop.architecture.layer_sizes.end(), config.hidden_layers.begin(),
                                        config.hidden_layers.end());
    pop.architecture.layer_sizes.push_back(std::max(classes, class_count_of(pool)));
    return pop;
}

Simulation::Simulation(ExperimentConfig config) : Simulation(config, build_population(config)) {}

Simulation::Simulation(ExperimentConfig config, Population population)
    : config_(std::move(config)),
      population_(std::move(population)),
      ledger_(LocalModel::initialized(population_.architecture, derive_seed(config_.master_seed, Stream::model_init))
                  .flatten()) {
    config_.validate();
    if (population_.clients.empty()) throw InvalidArgument("population has no clients");
    config_.client_count = population_.clients.size();
    if (config_.periodic && population_.node_of_client.size() != population_.clients.size())
        throw InvalidArgument("periodic activation needs a topology population");
    held_.assign(population_.clients.size(), ledger_.initial_model());
}

std::vector<int> Simulation::choose_active(int round) const {
    if (config_.periodic)
        return periodic_activate(population_.node_of_client, population_.node_count, config_.active_ratio, round,
                                 config_.periodic->period, config_.master_seed);
    return sample_clients(population_.clients.size(), config_.active_ratio, round, config_.master_seed);
}

RoundRecord Simulation::step() {
    const int t = next_round_;
    RoundRecord rec;
    rec.round = t;
    rec.active = choose_active(t);

    last_decisions_ = distribute(ledger_, rec.active, t);

    std::vector<ParamVector> uploads;
    std::vector<std::size_t> train_sizes;
    uploads.reserve(rec.active.size());
    for (const auto& d : last_decisions_) {
        switch (d.source) {
        case DecisionSource::condition1: ++rec.cond1_count; break;
        case DecisionSource::condition2_average: ++rec.cond2_count; break;
        case DecisionSource::initial_seed: ++rec.initial_count; break;
        }
        const ClientDataset& data = population_.clients[static_cast<std::size_t>(d.client_id)];
        TrainConfig tc = config_.train;
        tc.rng_seed = derive_seed(config_.master_seed, Stream::shuffle,
                                  {static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(d.client_id)});
        const LocalModel start = LocalModel::unflatten(population_.architecture, d.model);
        uploads.push_back(train_local(start, data, tc).flatten());
        train_sizes.push_back(data.train.size());
    }

    last_output_ = apply_variant(config_, uploads, train_sizes, t);
    const auto& out = last_output_;
    rec.effective_k = out.updated_centers.size();
    if (out.clustering) rec.j_objective = out.clustering->objective_trace.back();
    if (out.graph) {
        rec.graph_nodes = out.graph->node_count;
        rec.graph_weights = out.graph->weights;
    }

    ledger_.record_round(t, rec.active, out.assignment, out.updated_centers);

    for (std::size_t i = 0; i < rec.active.size(); ++i)
        held_[static_cast<std::size_t>(rec.active[i])] =
            out.updated_centers[static_cast<std::size_t>(out.assignment.labels[i])];

    rec.client_accuracy.reserve(population_.clients.size());
    for (std::size_t c = 0; c < population_.clients.size(); ++c)
        rec.client_accuracy.push_back(
            evaluate(LocalModel::unflatten(population_.architecture, held_[c]), population_.clients[c]));
    rec.mean_accuracy = mean_accuracy(rec.client_accuracy);

    if (config_.periodic && in_period_set(t, config_.periodic->period) && rec.active.size() >= 2) {
        std::vector<int> truth;
        truth.reserve(rec.active.size());
        for (int n : rec.active) truth.push_back(population_.node_of_client[static_cast<std::size_t>(n)]);
        rec.rand_index = rand_index(out.assignment.labels, truth);
    }

    ++next_round_;
    return rec;
}

std::vector<RoundRecord> run_experiment(const ExperimentConfig& config, const RecordSink& sink) {
    config.validate();
    std::vector<RoundRecord> records;
    if (config.rounds == 0) return records;
    Simulation sim(config);
    for (int t = 0; t < config.rounds; ++t) {
        records.push_back(sim.step());
        if (sink) sink(records.back());
    }
    return records;
}

} // namespace fedcedar
