#pragma once

#include "fedcedar/clustering.hpp"
#include "fedcedar/data_synth.hpp"
#include "fedcedar/distributor.hpp"
#include "fedcedar/experiment_config.hpp"
#include "fedcedar/local_model.hpp"
#include "fedcedar/prop_graph.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace fedcedar {

struct RoundRecord {
    int round = 0;
    std::vector<int> active;  // C_t, ascending
    std::size_t effective_k = 0;
    std::optional<double> j_objective;  // absent when no clustering ran
    std::size_t graph_nodes = 0;        // 0 when no graph was built
    std::vector<double> graph_weights;  // graph_nodes x graph_nodes, row-major
    std::vector<double> client_accuracy;  // every client, by client id
    double mean_accuracy = 0.0;
    std::optional<double> rand_index;
    std::size_t cond1_count = 0;
    std::size_t cond2_count = 0;
    std::size_t initial_count = 0;

    bool operator==(const RoundRecord&) const = default;
};

// Uniform draw without replacement of active_count(N, gamma) ids from a
// stream keyed by (master_seed, round). Result is sorted.
std::vector<int> sample_clients(std::size_t client_count, double active_ratio, int round, std::uint64_t master_seed);

// Rounds 0-based; round t belongs to the periodic set when (t + 1) is a
// multiple of the period, i.e. the 5th, 10th, ... round for period 5.
bool in_period_set(int round, int period);

// For rounds in the periodic set, draws ceil(gamma * |S_i|) clients from every
// node i; otherwise falls back to sample_clients over all clients.
std::vector<int> periodic_activate(const std::vector<int>& node_of_client, std::size_t node_count,
                                   double active_ratio, int round, int period, std::uint64_t master_seed);

// Server-side output of one variant: the centers recorded in the ledger and
// each upload's index into them.
struct VariantOutput {
    std::vector<ParamVector> updated_centers;
    ClusterAssignment assignment;
    std::optional<ClusterState> clustering;
    std::optional<WeightedGraph> graph;
};

// train_sizes is used by fedavg's data-size weighting.
VariantOutput apply_variant(const ExperimentConfig& config, std::span<const ParamVector> uploads,
                            std::span<const std::size_t> train_sizes, int round);

struct Population {
    std::vector<ClientDataset> clients;
    std::vector<int> node_of_client;  // empty unless built from a topology
    std::size_t node_count = 0;
    MlpArchitecture architecture;
};

// Builds the client population described by config.data.
Population build_population(const ExperimentConfig& config);

class Simulation {
public:
    explicit Simulation(ExperimentConfig config);
    Simulation(ExperimentConfig config, Population population);

    // Runs the next round and returns its record.
    RoundRecord step();

    int next_round() const { return next_round_; }
    const ExperimentConfig& config() const { return config_; }
    const Population& population() const { return population_; }
    const MembershipLedger& ledger() const { return ledger_; }
    const ParamVector& initial_model() const { return ledger_.initial_model(); }
    // Model each client holds for evaluation, by client id.
    const std::vector<ParamVector>& held_models() const { return held_; }
    // Decisions of the most recent round.
    const std::vector<DistributionDecision>& last_decisions() const { return last_decisions_; }
    const VariantOutput& last_variant_output() const { return last_output_; }

private:
    std::vector<int> choose_active(int round) const;

    ExperimentConfig config_;
    Population population_;
    MembershipLedger ledger_;
    std::vector<ParamVector> held_;
    std::vector<DistributionDecision> last_decisions_;
    VariantOutput last_output_;
    int next_round_ = 0;
};

using RecordSink = std::function<void(const RoundRecord&)>;

// Runs config.rounds rounds. Each record reaches the sink as soon as it is
// produced, so a failing round leaves the earlier records delivered.
std::vector<RoundRecord> run_experiment(const ExperimentConfig& config, const RecordSink& sink = {});

} // namespace fedcedar
