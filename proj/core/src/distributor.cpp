#include "fedcedar/distributor.hpp"

#include "fedcedar/error.hpp"
#include "fedcedar/prop_graph.hpp"

namespace fedcedar {

const char* to_string(DecisionSource source) {
    switch (source) {
    case DecisionSource::condition1: return "condition1";
    case DecisionSource::condition2_average: return "condition2_average";
    case DecisionSource::initial_seed: return "initial_seed";
    }
    return "unknown";
}

MembershipLedger::MembershipLedger(ParamVector initial_model) : initial_model_(std::move(initial_model)) {}

std::optional<ClientMembership> MembershipLedger::membership(int client_id) const {
    auto it = members_.find(client_id);
    if (it == members_.end()) return std::nullopt;
    return it->second;
}

void MembershipLedger::record_round(int round, const std::vector<int>& active, const ClusterAssignment& assignment,
                                    std::vector<ParamVector> updated_centers) {
    if (assignment.labels.size() != active.size())
        throw InvalidArgument("assignment covers " + std::to_string(assignment.labels.size()) +
                              " clients but the active set has " + std::to_string(active.size()));
    if (updated_centers.empty()) throw EmptyInput("no updated centers to record");
    if (last_round_ && round <= *last_round_)
        throw InvalidArgument("rounds must be recorded in increasing order");
    std::set<int> active_set(active.begin(), active.end());
    if (active_set.size() != active.size()) throw InvalidArgument("active set contains duplicate clients");
    for (int label : assignment.labels)
        if (label < 0 || static_cast<std::size_t>(label) >= updated_centers.size())
            throw InvalidArgument("cluster index " + std::to_string(label) + " has no updated center");

    for (std::size_t i = 0; i < active.size(); ++i) members_[active[i]] = {round, assignment.labels[i]};
    previous_active_ = std::move(active_set);
    previous_centers_ = std::move(updated_centers);
    previous_mean_ = aggregate_mean(previous_centers_);
    last_round_ = round;
}

std::vector<DistributionDecision> distribute(const MembershipLedger& ledger, const std::vector<int>& active,
                                             int round) {
    std::vector<DistributionDecision> out;
    out.reserve(active.size());
    const auto last = ledger.last_recorded_round();
    if (!last) {
        if (round != 0) throw StaleLedger("no round recorded before round " + std::to_string(round));
        for (int n : active) out.push_back({n, DecisionSource::initial_seed, -1, ledger.initial_model()});
        return out;
    }
    if (*last != round - 1)
        throw StaleLedger("ledger holds round " + std::to_string(*last) + ", distribution for round " +
                          std::to_string(round) + " needs round " + std::to_string(round - 1));

    const auto& prev = ledger.previous_active_set();
    for (int n : active) {
        if (prev.contains(n)) {
            const int k = *ledger.membership(n)->last_cluster;
            out.push_back({n, DecisionSource::condition1, k,
                           ledger.previous_updated_centers()[static_cast<std::size_t>(k)]});
        } else {
            out.push_back({n, DecisionSource::condition2_average, -1, ledger.previous_center_mean()});
        }
    }
    return out;
}

} // namespace fedcedar
