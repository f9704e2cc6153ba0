#pragma once

#include "fedcedar/clustering.hpp"
#include "fedcedar/param_space.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace fedcedar {

enum class DecisionSource { condition1, condition2_average, initial_seed };

const char* to_string(DecisionSource source);

struct DistributionDecision {
    int client_id = 0;
    DecisionSource source = DecisionSource::initial_seed;
    int cluster_index = -1;  // set for condition1 only
    ParamVector model;
};

struct ClientMembership {
    std::optional<int> last_round;
    std::optional<int> last_cluster;
};

// Server-side memory needed to choose each active client's starting model:
// who took part in the previous round, which cluster they landed in, and the
// post-propagation centers of that round.
class MembershipLedger {
public:
    explicit MembershipLedger(ParamVector initial_model);

    // Round most recently recorded, empty before the first record_round.
    std::optional<int> last_recorded_round() const { return last_round_; }
    const std::set<int>& previous_active_set() const { return previous_active_; }
    const std::vector<ParamVector>& previous_updated_centers() const { return previous_centers_; }
    const ParamVector& previous_center_mean() const { return previous_mean_; }
    const ParamVector& initial_model() const { return initial_model_; }
    std::optional<ClientMembership> membership(int client_id) const;

    // `active` lists the clients of round `round` in upload order; `assignment`
    // gives their clusters in the same order.
    void record_round(int round, const std::vector<int>& active, const ClusterAssignment& assignment,
                      std::vector<ParamVector> updated_centers);

private:
    ParamVector initial_model_;
    std::optional<int> last_round_;
    std::map<int, ClientMembership> members_;
    std::set<int> previous_active_;
    std::vector<ParamVector> previous_centers_;
    ParamVector previous_mean_;
};

// Condition 1 (client active at round-1 and round): its previous cluster's
// propagated center. Condition 2 (newly active): mean of the previous
// propagated centers. Before any round is recorded every client gets the
// initial model. Throws StaleLedger if the ledger does not hold round-1.
std::vector<DistributionDecision> distribute(const MembershipLedger& ledger, const std::vector<int>& active,
                                             int round);

} // namespace fedcedar
