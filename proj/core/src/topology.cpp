#include "fedcedar/data_synth.hpp"

#include "fedcedar/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fedcedar {

std::vector<std::pair<std::size_t, std::size_t>> TopologySpec::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            const auto& a = nodes[i].labels;
            const auto& b = nodes[j].labels;
            const bool shared = std::any_of(a.begin(), a.end(), [&](int l) { return b.contains(l); });
            if (shared) out.emplace_back(i, j);
        }
    return out;
}

void TopologySpec::validate() const {
    if (nodes.empty()) throw InvalidArgument("topology has no nodes");
    if (clients_per_node == 0) throw InvalidArgument("clients_per_node must be positive");
    std::set<int> ids;
    for (const auto& n : nodes) {
        if (!ids.insert(n.node_id).second) throw InvalidArgument("duplicate topology node id " + std::to_string(n.node_id));
        if (n.labels.empty()) throw InvalidArgument("topology node " + std::to_string(n.node_id) + " has no labels");
        for (int l : n.labels)
            if (l < 0) throw InvalidArgument("negative label in topology node " + std::to_string(n.node_id));
    }
}

TopologySpec topology_preset(int index) {
    TopologySpec spec;
    switch (index) {
    case 1:
        spec.name = "topology1";
        spec.nodes = {{1, {0, 1, 2}}, {2, {2, 3, 4}}, {3, {4, 5, 6}}};
        break;
    case 2:
        spec.name = "topology2";
        spec.nodes = {{1, {0, 1, 2}}, {2, {2, 3, 4}}, {3, {4, 5, 6}}, {4, {6, 7, 8}}};
        break;
    case 3:
        spec.name = "topology3";
        spec.nodes = {{1, {0, 1}}, {2, {1, 2, 3}}, {3, {3, 4, 5}}, {4, {5, 6, 7}}, {5, {7, 8, 9}}};
        break;
    default:
        throw InvalidArgument("unknown topology preset " + std::to_string(index) + " (expected 1, 2 or 3)");
    }
    return spec;
}

TopologySpec parse_topology(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("topology document: ") + e.what());
    }
    TopologySpec spec;
    try {
        for (const auto& [key, value] : doc.items())
            if (key != "name" && key != "clients_per_node" && key != "nodes")
                throw InvalidArgument("topology document: unknown key '" + key + "'");
        spec.name = doc.value("name", std::string{});
        spec.clients_per_node = doc.value("clients_per_node", std::size_t{20});
        for (const auto& n : doc.at("nodes")) {
            TopologyNode node;
            node.node_id = n.at("id").get<int>();
            for (int l : n.at("labels")) node.labels.insert(l);
            spec.nodes.push_back(std::move(node));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("topology document: ") + e.what());
    }
    spec.validate();
    return spec;
}

TopologySpec load_topology(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open topology file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_topology(ss.str());
}

} // namespace fedcedar
