#pragma once

#include "fedcedar/experiment_config.hpp"

#include <ostream>

namespace fedcedar::cli {

// Output directory when --out is absent.
inline constexpr const char* kOutDirEnv = "FEDCEDAR_OUT_DIR";

// Configuration used by `case-study`: a topology preset population, periodic
// activation every `period` rounds.
ExperimentConfig case_study_config(int topology, std::size_t clusters, int rounds, int period, std::uint64_t seed);

// Entry point for the fedcedar command; returns the process exit status.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace fedcedar::cli
