#include "fedcedar/data_synth.hpp"

#include "fedcedar/error.hpp"
#include "fedcedar/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace fedcedar {

void SyntheticTaskSpec::validate() const {
    if (class_count == 0 || input_dim == 0 || examples_per_class == 0)
        throw InvalidArgument("synthetic task sizes must be positive");
    if (!(noise_sigma > 0.0)) throw InvalidArgument("noise_sigma must be positive");
    if (class_means.rows != class_count || class_means.cols != input_dim)
        throw DimensionMismatch("class_means must be class_count x input_dim");
    for (std::size_t a = 0; a < class_count; ++a)
        for (std::size_t b = a + 1; b < class_count; ++b) {
            const auto ra = class_means.row(a);
            const auto rb = class_means.row(b);
            if (std::equal(ra.begin(), ra.end(), rb.begin()))
                throw InvalidArgument("class means " + std::to_string(a) + " and " + std::to_string(b) +
                                      " coincide");
        }
}

Matrix random_class_means(std::size_t class_count, std::size_t input_dim, double scale, std::uint64_t seed) {
    Matrix m(class_count, input_dim);
    Rng rng(seed);
    for (double& v : m.data) v = scale * rng.normal();
    return m;
}

ExamplePool generate_task(const SyntheticTaskSpec& spec) {
    spec.validate();
    ExamplePool pool;
    pool.reserve(spec.class_count * spec.examples_per_class);
    Rng rng(spec.rng_seed);
    for (std::size_t c = 0; c < spec.class_count; ++c) {
        const auto mean = spec.class_means.row(c);
        for (std::size_t i = 0; i < spec.examples_per_class; ++i) {
            Example e;
            e.id = pool.size();
            e.label = static_cast<int>(c);
            e.features.resize(spec.input_dim);
            for (std::size_t d = 0; d < spec.input_dim; ++d) e.features[d] = mean[d] + spec.noise_sigma * rng.normal();
            pool.push_back(std::move(e));
        }
    }
    return pool;
}

std::size_t class_count_of(const ExamplePool& pool) {
    int max_label = -1;
    for (const auto& e : pool) {
        if (e.label < 0) throw InvalidArgument("negative label in pool");
        max_label = std::max(max_label, e.label);
    }
    return static_cast<std::size_t>(max_label + 1);
}

ClientDataset split_client(int client_id, std::vector<Example> examples, std::size_t class_count,
                           double test_fraction) {
    std::map<int, std::vector<Example>> by_label;
    for (auto& e : examples) by_label[e.label].push_back(std::move(e));

    std::map<int, std::size_t> test_count;
    std::size_t total_test = 0;
    std::size_t total = 0;
    for (const auto& [label, items] : by_label) {
        const std::size_t c = items.size();
        std::size_t t = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(c)));
        if (c >= 5) t = std::max<std::size_t>(t, 1);
        t = std::min(t, c - 1);
        test_count[label] = t;
        total_test += t;
        total += c;
    }
    // Tiny clients: still hold out one example from the most frequent label.
    if (total_test == 0 && total >= 2) {
        auto largest = std::max_element(by_label.begin(), by_label.end(), [](const auto& a, const auto& b) {
            return a.second.size() < b.second.size();
        });
        if (largest->second.size() >= 2) test_count[largest->first] = 1;
    }

    ClientDataset ds;
    ds.client_id = client_id;
    for (auto& [label, items] : by_label) {
        const std::size_t t = test_count[label];
        const std::size_t n_train = items.size() - t;
        for (std::size_t i = 0; i < items.size(); ++i)
            (i < n_train ? ds.train : ds.test).push_back(std::move(items[i]));
    }
    ds.label_histogram = histogram_of(ds.train, class_count);
    return ds;
}

namespace {

std::vector<Example> gather(const ExamplePool& pool, std::span<const std::size_t> idx) {
    std::vector<Example> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(pool[i]);
    return out;
}

} // namespace

std::vector<ClientDataset> partition_iid(const ExamplePool& pool, std::size_t client_count, std::uint64_t seed) {
    if (client_count == 0) throw InvalidArgument("client_count must be positive");
    if (pool.size() < client_count)
        throw InvalidArgument("pool of " + std::to_string(pool.size()) + " examples cannot cover " +
                              std::to_string(client_count) + " clients");
    const std::size_t classes = class_count_of(pool);
    std::vector<std::size_t> idx(pool.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(idx));

    std::vector<ClientDataset> clients;
    clients.reserve(client_count);
    const std::size_t n = pool.size();
    for (std::size_t c = 0; c < client_count; ++c) {
        const std::size_t lo = c * n / client_count;
        const std::size_t hi = (c + 1) * n / client_count;
        clients.push_back(split_client(static_cast<int>(c),
                                       gather(pool, std::span<const std::size_t>(idx).subspan(lo, hi - lo)),
                                       classes));
    }
    return clients;
}

std::vector<ClientDataset> partition_shards(const ExamplePool& pool, std::size_t client_count, std::size_t shard,
                                            std::uint64_t seed) {
    if (client_count == 0) throw InvalidArgument("client_count must be positive");
    if (shard == 0) throw InvalidArgument("shard must be at least 1");
    const std::size_t shard_total = client_count * shard;
    if (pool.size() < shard_total)
        throw InvalidArgument("pool of " + std::to_string(pool.size()) + " examples cannot form " +
                              std::to_string(shard_total) + " shards");
    const std::size_t classes = class_count_of(pool);

    std::vector<std::size_t> idx(pool.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return pool[a].label < pool[b].label;
    });

    Rng rng(seed);
    std::vector<std::size_t> shard_ids(shard_total);
    std::iota(shard_ids.begin(), shard_ids.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(shard_ids));

    const std::size_t n = pool.size();
    std::vector<ClientDataset> clients;
    clients.reserve(client_count);
    for (std::size_t c = 0; c < client_count; ++c) {
        std::vector<std::size_t> mine;
        for (std::size_t k = 0; k < shard; ++k) {
            const std::size_t s = shard_ids[c * shard + k];
            const std::size_t lo = s * n / shard_total;
            const std::size_t hi = (s + 1) * n / shard_total;
            mine.insert(mine.end(), idx.begin() + static_cast<std::ptrdiff_t>(lo),
                        idx.begin() + static_cast<std::ptrdiff_t>(hi));
        }
        rng.shuffle(std::span<std::size_t>(mine));
        clients.push_back(split_client(static_cast<int>(c), gather(pool, mine), classes));
    }
    return clients;
}

TopologyPopulation build_topology_population(const TopologySpec& spec, const ExamplePool& pool,
                                             std::uint64_t seed) {
    spec.validate();
    const std::size_t classes = class_count_of(pool);

    std::map<int, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < pool.size(); ++i) by_label[pool[i].label].push_back(i);

    const std::size_t n_clients = spec.client_count();
    TopologyPopulation pop;
    pop.node_of_client.resize(n_clients);
    std::vector<std::vector<std::size_t>> assigned(n_clients);
    for (std::size_t node = 0; node < spec.nodes.size(); ++node)
        for (std::size_t j = 0; j < spec.clients_per_node; ++j)
            pop.node_of_client[node * spec.clients_per_node + j] = static_cast<int>(node);

    std::set<int> used_labels;
    for (const auto& node : spec.nodes) used_labels.insert(node.labels.begin(), node.labels.end());

    Rng rng(seed);
    for (int label : used_labels) {
        auto it = by_label.find(label);
        if (it == by_label.end())
            throw InvalidArgument("pool has no examples of label " + std::to_string(label) + " required by topology");
        std::vector<std::size_t> holders;
        for (std::size_t c = 0; c < n_clients; ++c)
            if (spec.nodes[static_cast<std::size_t>(pop.node_of_client[c])].labels.contains(label)) holders.push_back(c);
        std::vector<std::size_t> items = it->second;
        if (items.size() < holders.size())
            throw InvalidArgument("label " + std::to_string(label) + " has " + std::to_string(items.size()) +
                                  " examples for " + std::to_string(holders.size()) + " clients");
        rng.shuffle(std::span<std::size_t>(items));
        for (std::size_t h = 0; h < holders.size(); ++h) {
            const std::size_t lo = h * items.size() / holders.size();
            const std::size_t hi = (h + 1) * items.size() / holders.size();
            auto& dst = assigned[holders[h]];
            dst.insert(dst.end(), items.begin() + static_cast<std::ptrdiff_t>(lo),
                       items.begin() + static_cast<std::ptrdiff_t>(hi));
        }
    }

    pop.clients.reserve(n_clients);
    for (std::size_t c = 0; c < n_clients; ++c) {
        rng.shuffle(std::span<std::size_t>(assigned[c]));
        pop.clients.push_back(split_client(static_cast<int>(c), gather(pool, assigned[c]), classes));
    }
    return pop;
}

} // namespace fedcedar
