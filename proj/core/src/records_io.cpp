#include "fedcedar/records_io.hpp"

#include "fedcedar/config_io.hpp"
#include "fedcedar/error.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <charconv>

namespace fedcedar {

using nlohmann::json;

std::string format_real(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void write_csv_header(std::ostream& out) {
    out << kCsvHeader << '\n';
}

void write_csv_row(std::ostream& out, const RoundRecord& r) {
    out << r.round << ',' << format_real(r.mean_accuracy) << ',';
    if (r.rand_index) out << format_real(*r.rand_index);
    out << ',';
    if (r.j_objective) out << format_real(*r.j_objective);
    out << ',' << r.effective_k << ',' << r.cond1_count << ',' << r.cond2_count << '\n';
}

void write_csv(std::ostream& out, const std::vector<RoundRecord>& records) {
    write_csv_header(out);
    for (const auto& r : records) write_csv_row(out, r);
}

json record_to_json(const RoundRecord& r) {
    json j = {
        {"round", r.round},
        {"active", r.active},
        {"effective_k", r.effective_k},
        {"j_objective", r.j_objective ? json(*r.j_objective) : json(nullptr)},
        {"graph_nodes", r.graph_nodes},
        {"graph_weights", r.graph_weights},
        {"client_accuracy", r.client_accuracy},
        {"mean_accuracy", r.mean_accuracy},
        {"rand_index", r.rand_index ? json(*r.rand_index) : json(nullptr)},
        {"cond1_count", r.cond1_count},
        {"cond2_count", r.cond2_count},
        {"initial_count", r.initial_count},
    };
    return j;
}

RoundRecord record_from_json(const json& j) {
    RoundRecord r;
    try {
        r.round = j.at("round").get<int>();
        r.active = j.at("active").get<std::vector<int>>();
        r.effective_k = j.at("effective_k").get<std::size_t>();
        if (!j.at("j_objective").is_null()) r.j_objective = j.at("j_objective").get<double>();
        r.graph_nodes = j.at("graph_nodes").get<std::size_t>();
        r.graph_weights = j.at("graph_weights").get<std::vector<double>>();
        r.client_accuracy = j.at("client_accuracy").get<std::vector<double>>();
        r.mean_accuracy = j.at("mean_accuracy").get<double>();
        if (!j.at("rand_index").is_null()) r.rand_index = j.at("rand_index").get<double>();
        r.cond1_count = j.at("cond1_count").get<std::size_t>();
        r.cond2_count = j.at("cond2_count").get<std::size_t>();
        r.initial_count = j.at("initial_count").get<std::size_t>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed round record: ") + e.what());
    }
    return r;
}

json detail_document(const ExperimentConfig& config, const std::vector<RoundRecord>& records) {
    json doc;
    doc["config"] = config_to_json(config);
    doc["records"] = json::array();
    for (const auto& r : records) doc["records"].push_back(record_to_json(r));
    return doc;
}

std::vector<RoundRecord> records_from_detail(const json& doc) {
    std::vector<RoundRecord> out;
    for (const auto& r : doc.at("records")) out.push_back(record_from_json(r));
    return out;
}

RecordWriter::RecordWriter(const std::filesystem::path& directory, const std::string& stem, ExperimentConfig config)
    : config_(std::move(config)) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw IoError("cannot create output directory " + directory.string() + ": " + ec.message());
    paths_.csv = directory / (stem + ".csv");
    paths_.json = directory / (stem + ".json");
    csv_.open(paths_.csv, std::ios::binary | std::ios::trunc);
    if (!csv_) throw IoError("cannot open " + paths_.csv.string() + " for writing");
    write_csv_header(csv_);
    csv_.flush();
}

void RecordWriter::append(const RoundRecord& r) {
    write_csv_row(csv_, r);
    csv_.flush();
    if (!csv_) throw IoError("write failed on " + paths_.csv.string());
    records_.push_back(r);
}

void RecordWriter::finish() {
    csv_.flush();
    if (!csv_) throw IoError("write failed on " + paths_.csv.string());
    std::ofstream out(paths_.json, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + paths_.json.string() + " for writing");
    out << detail_document(config_, records_).dump(2) << '\n';
    if (!out) throw IoError("write failed on " + paths_.json.string());
}

ResultPaths write_records(const std::filesystem::path& directory, const std::string& stem,
                          const ExperimentConfig& config, const std::vector<RoundRecord>& records) {
    RecordWriter w(directory, stem, config);
    for (const auto& r : records) w.append(r);
    w.finish();
    return w.paths();
}

} // namespace fedcedar
