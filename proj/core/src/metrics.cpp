#include "fedcedar/metrics.hpp"

#include "fedcedar/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace fedcedar {

Partition Partition::over_indices(std::vector<int> labels) {
    Partition p;
    p.item_ids.resize(labels.size());
    std::iota(p.item_ids.begin(), p.item_ids.end(), 0);
    p.labels = std::move(labels);
    return p;
}

namespace {

// Pairs sharing a group, from the group sizes: sum C(n_g, 2).
long long together_pairs(const std::map<int, long long>& counts) {
    long long s = 0;
    for (const auto& [g, n] : counts) s += n * (n - 1) / 2;
    return s;
}

} // namespace

double rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw InvalidArgument("partitions cover different numbers of items");
    if (a.size() < 2) throw InvalidArgument("rand index needs at least two items");
    // Contingency counting: alpha = pairs together in both; pairs together in
    // a only or b only are disagreements; the rest are apart in both.
    std::map<int, long long> ca, cb;
    std::map<std::pair<int, int>, long long> cab;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++ca[a[i]];
        ++cb[b[i]];
        ++cab[{a[i], b[i]}];
    }
    long long alpha = 0;
    for (const auto& [g, n] : cab) alpha += n * (n - 1) / 2;
    const long long n = static_cast<long long>(a.size());
    const long long pairs = n * (n - 1) / 2;
    const long long beta = pairs - together_pairs(ca) - together_pairs(cb) + alpha;
    return static_cast<double>(alpha + beta) / static_cast<double>(pairs);
}

double rand_index(const Partition& a, const Partition& b) {
    if (a.item_ids.size() != a.labels.size() || b.item_ids.size() != b.labels.size())
        throw InvalidArgument("partition ids and labels differ in length");
    std::map<int, int> label_b;
    for (std::size_t i = 0; i < b.item_ids.size(); ++i)
        if (!label_b.emplace(b.item_ids[i], b.labels[i]).second) throw InvalidArgument("duplicate item id");
    if (label_b.size() != a.item_ids.size()) throw InvalidArgument("partitions cover different item sets");
    std::vector<int> aligned;
    aligned.reserve(a.item_ids.size());
    std::set<int> seen;
    for (int id : a.item_ids) {
        if (!seen.insert(id).second) throw InvalidArgument("duplicate item id");
        auto it = label_b.find(id);
        if (it == label_b.end()) throw InvalidArgument("partitions cover different item sets");
        aligned.push_back(it->second);
    }
    return rand_index(a.labels, aligned);
}

double mean_accuracy(std::span<const double> per_client) {
    if (per_client.empty()) throw EmptyInput("mean accuracy of no clients");
    double s = 0.0;
    for (double v : per_client) s += v;
    return s / static_cast<double>(per_client.size());
}

} // namespace fedcedar
