#pragma once

#include "fedcedar/experiment_config.hpp"
#include "fedcedar/orchestrator.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace fedcedar {

// Header of the tabular result file, in column order.
inline constexpr const char* kCsvHeader =
    "round,mean_accuracy,rand_index,j_objective,effective_k,cond1_count,cond2_count";

// Shortest decimal text that parses back to the same double.
std::string format_real(double v);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const RoundRecord& r);
void write_csv(std::ostream& out, const std::vector<RoundRecord>& records);

nlohmann::json record_to_json(const RoundRecord& r);
RoundRecord record_from_json(const nlohmann::json& doc);

// {"config": ..., "records": [...]}
nlohmann::json detail_document(const ExperimentConfig& config, const std::vector<RoundRecord>& records);
std::vector<RoundRecord> records_from_detail(const nlohmann::json& doc);

struct ResultPaths {
    std::filesystem::path csv;
    std::filesystem::path json;
};

// Streams the tabular file row by row (flushed after each) and writes the
// structured detail document on finish(). Errors carry the offending path.
class RecordWriter {
public:
    RecordWriter(const std::filesystem::path& directory, const std::string& stem, ExperimentConfig config);

    void append(const RoundRecord& r);
    // Writes the detail document; safe to call after a partial run.
    void finish();
    const ResultPaths& paths() const { return paths_; }
    const std::vector<RoundRecord>& records() const { return records_; }

private:
    ResultPaths paths_;
    ExperimentConfig config_;
    std::ofstream csv_;
    std::vector<RoundRecord> records_;
};

ResultPaths write_records(const std::filesystem::path& directory, const std::string& stem,
                          const ExperimentConfig& config, const std::vector<RoundRecord>& records);

} // namespace fedcedar
