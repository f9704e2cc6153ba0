#include "fedcedar/config_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace fedcedar {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<const char*> known) {
    if (!obj.is_object())
        throw ConfigError(ConfigErrorKind::parse, prefix, (prefix.empty() ? "config" : prefix) + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        const bool ok = std::any_of(known.begin(), known.end(), [&](const char* k) { return key == k; });
        if (!ok) {
            const std::string field = prefix.empty() ? key : prefix + "." + key;
            throw ConfigError(ConfigErrorKind::unknown_key, field, "unknown config key '" + field + "'");
        }
    }
}

template <typename T>
void read(const json& obj, const char* key, const std::string& prefix, T& target) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    const std::string field = prefix.empty() ? key : prefix + "." + key;
    try {
        target = it->get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(ConfigErrorKind::parse, field, field + ": " + e.what());
    }
}

template <typename Enum, typename Parser>
void read_enum(const json& obj, const char* key, const std::string& prefix, Enum& target, Parser parse) {
    std::string name;
    bool present = obj.contains(key);
    read(obj, key, prefix, name);
    if (!present) return;
    try {
        target = parse(name);
    } catch (const InvalidArgument& e) {
        throw ConfigError(ConfigErrorKind::validation, prefix.empty() ? key : prefix + "." + key, e.what());
    }
}

} // namespace

json config_to_json(const ExperimentConfig& c) {
    json doc = {
        {"client_count", c.client_count},
        {"active_ratio", c.active_ratio},
        {"rounds", c.rounds},
        {"cluster_count", c.cluster_count},
        {"propagation_depth", c.propagation_depth},
        {"algorithm", to_string(c.algorithm)},
        {"fedavg_weighting", to_string(c.fedavg_weighting)},
        {"graph_similarity", to_string(c.graph_similarity)},
        {"master_seed", c.master_seed},
        {"kmeans_max_iter", c.kmeans_max_iter},
        {"hidden_layers", c.hidden_layers},
        {"train",
         {{"learning_rate", c.train.learning_rate},
          {"local_epochs", c.train.local_epochs},
          {"batch_size", c.train.batch_size}}},
        {"data",
         {{"partition", to_string(c.data.partition)},
          {"shard", c.data.shard},
          {"class_count", c.data.class_count},
          {"input_dim", c.data.input_dim},
          {"examples_per_class", c.data.examples_per_class},
          {"mean_scale", c.data.mean_scale},
          {"noise_sigma", c.data.noise_sigma},
          {"idx_images", c.data.idx_images},
          {"idx_labels", c.data.idx_labels},
          {"topology_preset", c.data.topology_preset},
          {"topology_file", c.data.topology_file},
          {"clients_per_node", c.data.clients_per_node}}},
    };
    if (c.periodic) doc["periodic_activation"] = {{"period", c.periodic->period}};
    return doc;
}

ExperimentConfig config_from_json(const json& doc) {
    ExperimentConfig c;
    reject_unknown(doc, "",
                   {"client_count", "active_ratio", "rounds", "cluster_count", "propagation_depth", "algorithm",
                    "fedavg_weighting", "graph_similarity", "master_seed", "kmeans_max_iter", "hidden_layers", "train", "data",
                    "periodic_activation"});
    read(doc, "client_count", "", c.client_count);
    read(doc, "active_ratio", "", c.active_ratio);
    read(doc, "rounds", "", c.rounds);
    read(doc, "cluster_count", "", c.cluster_count);
    read(doc, "propagation_depth", "", c.propagation_depth);
    read_enum(doc, "algorithm", "", c.algorithm, parse_algorithm);
    read_enum(doc, "fedavg_weighting", "", c.fedavg_weighting, parse_fedavg_weighting);
    read_enum(doc, "graph_similarity", "", c.graph_similarity, parse_graph_similarity);
    read(doc, "master_seed", "", c.master_seed);
    read(doc, "kmeans_max_iter", "", c.kmeans_max_iter);
    read(doc, "hidden_layers", "", c.hidden_layers);

    if (auto it = doc.find("train"); it != doc.end()) {
        reject_unknown(*it, "train", {"learning_rate", "local_epochs", "batch_size"});
        read(*it, "learning_rate", "train", c.train.learning_rate);
        read(*it, "local_epochs", "train", c.train.local_epochs);
        read(*it, "batch_size", "train", c.train.batch_size);
    }
    if (auto it = doc.find("data"); it != doc.end()) {
        reject_unknown(*it, "data",
                       {"partition", "shard", "class_count", "input_dim", "examples_per_class", "mean_scale",
                        "noise_sigma", "idx_images", "idx_labels", "topology_preset", "topology_file",
                        "clients_per_node"});
        auto& d = c.data;
        read_enum(*it, "partition", "data", d.partition, parse_partition_kind);
        read(*it, "shard", "data", d.shard);
        read(*it, "class_count", "data", d.class_count);
        read(*it, "input_dim", "data", d.input_dim);
        read(*it, "examples_per_class", "data", d.examples_per_class);
        read(*it, "mean_scale", "data", d.mean_scale);
        read(*it, "noise_sigma", "data", d.noise_sigma);
        read(*it, "idx_images", "data", d.idx_images);
        read(*it, "idx_labels", "data", d.idx_labels);
        read(*it, "topology_preset", "data", d.topology_preset);
        read(*it, "topology_file", "data", d.topology_file);
        read(*it, "clients_per_node", "data", d.clients_per_node);
    }
    if (auto it = doc.find("periodic_activation"); it != doc.end() && !it->is_null()) {
        reject_unknown(*it, "periodic_activation", {"period"});
        PeriodicActivation p;
        read(*it, "period", "periodic_activation", p.period);
        c.periodic = p;
    }
    c.validate();
    return c;
}

ExperimentConfig parse_config(const std::string& text) {
    if (std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); }))
        return config_from_json(json::object());
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(ConfigErrorKind::parse, "", std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(doc);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(ConfigErrorKind::io, "", "cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace fedcedar
