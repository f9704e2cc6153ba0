#include "cli.hpp"

#include "fedcedar/config_io.hpp"
#include "fedcedar/orchestrator.hpp"
#include "fedcedar/records_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

namespace fedcedar::cli {

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::optional<int> rounds;
};

std::filesystem::path resolve_out_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return "results";
}

ExperimentConfig base_config(const CommonOptions& o) {
    ExperimentConfig cfg = o.config_path.empty() ? parse_config("") : load_config(o.config_path);
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.rounds) cfg.rounds = *o.rounds;
    cfg.validate();
    return cfg;
}

std::vector<RoundRecord> run_to_files(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                                      const std::string& stem) {
    RecordWriter writer(dir, stem, cfg);
    try {
        run_experiment(cfg, [&](const RoundRecord& r) { writer.append(r); });
    } catch (...) {
        writer.finish();
        throw;
    }
    writer.finish();
    return writer.records();
}

void add_common(CLI::App* cmd, CommonOptions& o, bool with_config) {
    if (with_config) cmd->add_option("--config", o.config_path, "Experiment config (JSON); defaults when omitted");
    cmd->add_option("--seed", o.seed, "Override the master seed");
    cmd->add_option("--out", o.out_dir, std::string("Output directory (default $") + kOutDirEnv + " or ./results)");
    cmd->add_option("--rounds", o.rounds, "Override the number of rounds")->check(CLI::NonNegativeNumber);
}

double final_accuracy(const std::vector<RoundRecord>& records) {
    return records.empty() ? 0.0 : records.back().mean_accuracy;
}

} // namespace

ExperimentConfig case_study_config(int topology, std::size_t clusters, int rounds, int period, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.algorithm = Algorithm::fedcedar;
    cfg.data.partition = PartitionKind::topology;
    cfg.data.topology_preset = topology;
    cfg.data.clients_per_node = 20;
    cfg.data.examples_per_class = 600;
    cfg.cluster_count = clusters;
    cfg.rounds = rounds;
    cfg.periodic = PeriodicActivation{period};
    cfg.master_seed = seed;
    cfg.validate();
    return cfg;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Clustered, graph-propagated personalized federated learning simulator", "fedcedar"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    std::string algorithm;
    auto* run = app.add_subcommand("run", "Run one experiment");
    add_common(run, run_opts, true);
    run->add_option("--algorithm", algorithm, "fedcedar | fedavg | as1 | as2 | as3")
        ->check(CLI::IsMember({"fedcedar", "fedavg", "as1", "as2", "as3"}));

    CommonOptions cs_opts;
    int topology = 1;
    std::optional<std::size_t> clusters;
    int period = 5;
    cs_opts.rounds = 200;
    auto* cs = app.add_subcommand("case-study", "Structured-topology clustering recovery (Rand index trace)");
    add_common(cs, cs_opts, false);
    cs->add_option("--topology", topology, "Topology preset")->check(CLI::IsMember({1, 2, 3}));
    cs->add_option("--clusters", clusters, "Cluster count K (default: node count)")->check(CLI::PositiveNumber);
    cs->add_option("--period", period, "Periodic activation interval")->check(CLI::PositiveNumber);

    CommonOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Grid over propagation depth P in 1..5 and K in 3..7");
    add_common(sweep, sweep_opts, true);

    CommonOptions cmp_opts;
    auto* compare = app.add_subcommand("compare", "Paired fedcedar vs fedavg run under one seed");
    add_common(compare, cmp_opts, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*run) {
            ExperimentConfig cfg = base_config(run_opts);
            if (!algorithm.empty()) cfg.algorithm = parse_algorithm(algorithm);
            const auto dir = resolve_out_dir(run_opts.out_dir);
            const auto records = run_to_files(cfg, dir, to_string(cfg.algorithm));
            out << to_string(cfg.algorithm) << ": " << records.size() << " rounds, final mean accuracy "
                << format_real(final_accuracy(records)) << "\n";
            out << "results in " << dir.string() << "\n";
        } else if (*cs) {
            const TopologySpec spec = topology_preset(topology);
            const std::size_t k = clusters.value_or(spec.nodes.size());
            ExperimentConfig cfg = case_study_config(topology, k, *cs_opts.rounds, period, cs_opts.seed.value_or(0));
            const auto dir = resolve_out_dir(cs_opts.out_dir);
            const std::string stem = "case_study_topology" + std::to_string(topology) + "_k" + std::to_string(k);
            const auto records = run_to_files(cfg, dir, stem);
            std::size_t points = 0;
            for (const auto& r : records)
                if (r.rand_index) {
                    ++points;
                    out << "round " << r.round + 1 << " rand_index " << format_real(*r.rand_index) << "\n";
                }
            out << points << " rand-index points; results in " << dir.string() << "\n";
        } else if (*sweep) {
            const ExperimentConfig base = base_config(sweep_opts);
            const auto dir = resolve_out_dir(sweep_opts.out_dir);
            for (int p = 1; p <= 5; ++p)
                for (std::size_t k = 3; k <= 7; ++k) {
                    ExperimentConfig cfg = base;
                    cfg.propagation_depth = p;
                    cfg.cluster_count = k;
                    const auto records =
                        run_to_files(cfg, dir, "sweep_P" + std::to_string(p) + "_K" + std::to_string(k));
                    out << "P=" << p << " K=" << k << " final mean accuracy "
                        << format_real(final_accuracy(records)) << "\n";
                }
        } else if (*compare) {
            ExperimentConfig cfg = base_config(cmp_opts);
            const auto dir = resolve_out_dir(cmp_opts.out_dir);
            cfg.algorithm = Algorithm::fedcedar;
            const double cedar = final_accuracy(run_to_files(cfg, dir, "compare_fedcedar"));
            cfg.algorithm = Algorithm::fedavg;
            const double avg = final_accuracy(run_to_files(cfg, dir, "compare_fedavg"));
            out << "fedcedar " << format_real(cedar) << "\nfedavg " << format_real(avg) << "\ngap "
                << format_real(cedar - avg) << "\n";
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace fedcedar::cli
