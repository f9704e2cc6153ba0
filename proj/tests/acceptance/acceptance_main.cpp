// Acceptance gate. Each criterion prints one PASS/FAIL line; the process
// exits non-zero when any criterion fails.

#include "oracles.hpp"

#include "cli.hpp"
#include "fedcedar/clustering.hpp"
#include "fedcedar/distributor.hpp"
#include "fedcedar/metrics.hpp"
#include "fedcedar/orchestrator.hpp"
#include "fedcedar/prop_graph.hpp"
#include "fedcedar/records_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

using namespace fedcedar;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("fedcedar_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "fedcedar");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int status = cli::cli_main((int)argv.size(), argv.data(), out, err);
    if (status != 0) std::fprintf(stderr, "%s", err.str().c_str());
    return status;
}

std::vector<double> rand_trace(const std::vector<RoundRecord>& records) {
    std::vector<double> out;
    for (const auto& r : records)
        if (r.rand_index) out.push_back(*r.rand_index);
    return out;
}

// Round (1-based) at which the trace first reaches 0.95; a large value if never.
int first_round_at(const std::vector<RoundRecord>& records, double level) {
    for (const auto& r : records)
        if (r.rand_index && *r.rand_index >= level) return r.round + 1;
    return 1 << 30;
}

double final_accuracy(Algorithm alg, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.algorithm = alg;
    cfg.master_seed = seed;
    return run_experiment(cfg).back().mean_accuracy;
}

// Seeds for the paired synthetic-task runs, fixed up front.
constexpr std::uint64_t kPairedSeeds[] = {1, 2, 3};

std::map<std::pair<int, std::uint64_t>, double> accuracy_cache;

double cached_accuracy(Algorithm alg, std::uint64_t seed) {
    auto key = std::make_pair((int)alg, seed);
    auto it = accuracy_cache.find(key);
    if (it != accuracy_cache.end()) return it->second;
    return accuracy_cache[key] = final_accuracy(alg, seed);
}

Outcome case_study_convergence() {
    auto dir = scratch("case_study");
    if (run_cli({"case-study", "--topology", "1", "--clusters", "3", "--out", dir.string()}) != 0)
        return {false, "case-study command failed"};
    auto doc = nlohmann::json::parse(slurp(dir / "case_study_topology1_k3.json"));
    auto trace = rand_trace(records_from_detail(doc));
    if (trace.size() < 5) return {false, "only " + std::to_string(trace.size()) + " rand-index points"};
    double lo = *std::min_element(trace.begin(), trace.end());
    double last5 = *std::min_element(trace.end() - 5, trace.end());
    return {last5 > 0.95 && lo >= 0.5, std::to_string(trace.size()) + " points, min " + fmt(lo) +
                                           ", min of final 5 " + fmt(last5)};
}

Outcome topology_ordering() {
    int satisfied = 0;
    std::string detail;
    for (std::uint64_t seed : {0, 1, 2}) {
        int t1 = first_round_at(run_experiment(cli::case_study_config(1, 3, 200, 5, seed)), 0.95);
        int t3 = first_round_at(run_experiment(cli::case_study_config(3, 5, 200, 5, seed)), 0.95);
        satisfied += t1 <= t3;
        detail += "seed " + std::to_string(seed) + ": T1 " + std::to_string(t1) + " T3 " + std::to_string(t3) + "; ";
    }
    return {satisfied >= 2, detail + std::to_string(satisfied) + "/3 ordered"};
}

Outcome personalization_gain() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed : kPairedSeeds) {
        double cedar = cached_accuracy(Algorithm::fedcedar, seed);
        double avg = cached_accuracy(Algorithm::fedavg, seed);
        ok = ok && cedar - avg >= 0.02;
        detail += "seed " + std::to_string(seed) + ": " + fmt(cedar) + " vs " + fmt(avg) + "; ";
    }
    return {ok, detail};
}

Outcome ablation_ordering() {
    bool dominates = true;
    int as3_weakest = 0;
    std::string detail;
    for (std::uint64_t seed : kPairedSeeds) {
        double cedar = cached_accuracy(Algorithm::fedcedar, seed);
        double a1 = cached_accuracy(Algorithm::as1, seed);
        double a2 = cached_accuracy(Algorithm::as2, seed);
        double a3 = cached_accuracy(Algorithm::as3, seed);
        dominates = dominates && cedar >= a1 && cedar >= a2 && cedar >= a3;
        as3_weakest += a3 <= a1 && a3 <= a2;
        detail += "seed " + std::to_string(seed) + ": fedcedar " + fmt(cedar) + " as1 " + fmt(a1) + " as2 " +
                  fmt(a2) + " as3 " + fmt(a3) + "; ";
    }
    return {dominates && as3_weakest >= 2, detail + "as3 weakest in " + std::to_string(as3_weakest) + "/3"};
}

Outcome propagation_oracle() {
    std::mt19937_64 gen(5);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t k = 1 + gen() % 8, dim = 1 + gen() % 50;
        auto m = oracle::flat_manifest(dim);
        std::vector<ParamVector> cs;
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < k; ++i) {
            cs.push_back(oracle::random_vec(gen, m));
            rows.push_back(oracle::to_std(cs.back()));
        }
        auto g = build_graph(cs, 0);
        for (int p = 1; p <= 3; ++p) {
            auto got = propagate(g, cs, p);
            auto expect = oracle::matrix_power_apply(g.weights, k, p, rows);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t d = 0; d < dim; ++d) worst = std::max(worst, std::abs(got[i][d] - expect[i][d]));
        }
    }
    return {worst <= 1e-10, "max abs error " + sci(worst)};
}

Outcome kmeans_properties() {
    std::mt19937_64 gen(6);
    std::normal_distribution<double> nd;
    int monotone = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 5 + gen() % 40, dim = 1 + gen() % 6;
        auto m = oracle::flat_manifest(dim);
        std::vector<ParamVector> pts;
        for (std::size_t i = 0; i < n; ++i) pts.push_back(oracle::random_vec(gen, m));
        auto st = kmeans(pts, {.k = 1 + gen() % 6, .seed = gen()});
        bool ok = true;
        for (std::size_t i = 1; i < st.objective_trace.size(); ++i)
            ok = ok && st.objective_trace[i] <= st.objective_trace[i - 1] * (1 + 1e-12) + 1e-12;
        monotone += ok;
    }

    std::vector<ParamVector> blobs{oracle::vec({0, 0}), oracle::vec({0, 1}), oracle::vec({10, 10}),
                                   oracle::vec({10, 11})};
    auto st = kmeans(blobs, {.k = 2, .seed = 1});
    std::vector<std::vector<double>> rows;
    for (const auto& b : blobs) rows.push_back(oracle::to_std(b));
    double optimum = oracle::exhaustive_kmeans_optimum(rows, 2);
    bool blob_ok = std::abs(st.objective_trace.back() - optimum) < 1e-12 &&
                   rand_index(st.assignment.labels, std::vector<int>{0, 0, 1, 1}) == 1.0;

    int invariant = 0;
    for (int trial = 0; trial < 20; ++trial) {
        auto m = oracle::flat_manifest(3);
        std::vector<ParamVector> pts;
        for (int i = 0; i < 24; ++i) {
            auto v = oracle::random_vec(gen, m);
            for (double& x : v.values()) x += 6.0 * (i % 3);
            pts.push_back(v);
        }
        auto base = kmeans(pts, {.k = 3, .seed = 7});
        std::vector<std::size_t> perm(pts.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen);
        std::vector<ParamVector> shuffled;
        for (auto p : perm) shuffled.push_back(pts[p]);
        auto other = kmeans(shuffled, {.k = 3, .seed = 7});
        std::vector<int> back(pts.size());
        for (std::size_t i = 0; i < perm.size(); ++i) back[perm[i]] = other.assignment.labels[i];
        invariant += rand_index(base.assignment.labels, back) == 1.0;
    }
    return {monotone == 100 && blob_ok && invariant == 20,
            "monotone " + std::to_string(monotone) + "/100, two-blob J " + fmt(st.objective_trace.back(), 6) +
                " vs optimum " + fmt(optimum, 6) + ", permutation invariant " + std::to_string(invariant) + "/20"};
}

Outcome graph_stochasticity() {
    std::mt19937_64 gen(7);
    double worst_sum = 0, min_entry = INFINITY;
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t k = 1 + gen() % 8, dim = 1 + gen() % 30;
        auto m = oracle::flat_manifest(dim);
        std::vector<ParamVector> cs;
        for (std::size_t i = 0; i < k; ++i) cs.push_back(oracle::random_vec(gen, m));
        auto g = build_graph(cs, 0);
        for (std::size_t i = 0; i < k; ++i) {
            double s = 0;
            for (std::size_t j = 0; j < k; ++j) {
                s += g(i, j);
                min_entry = std::min(min_entry, g(i, j));
            }
            worst_sum = std::max(worst_sum, std::abs(s - 1.0));
        }
    }
    bool uniform = true;
    for (std::size_t k = 1; k <= 8; ++k) {
        std::vector<ParamVector> same(k, oracle::vec({0.5, -2, 1}));
        for (double w : build_graph(same, 0).weights) uniform = uniform && w == 1.0 / (double)k;
    }
    return {worst_sum <= 1e-9 && min_entry >= 0.0 && uniform,
            "max row-sum error " + sci(worst_sum) + ", min entry " + fmt(min_entry) +
                (uniform ? ", identical centers uniform" : ", identical centers NOT uniform")};
}

Outcome distribution_oracle() {
    std::mt19937_64 gen(8);
    int matched = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> universe(40);
        std::iota(universe.begin(), universe.end(), 0);
        std::shuffle(universe.begin(), universe.end(), gen);
        std::vector<int> prev(universe.begin(), universe.begin() + 1 + (long)(gen() % 20));
        std::shuffle(universe.begin(), universe.end(), gen);
        std::vector<int> cur(universe.begin(), universe.begin() + 1 + (long)(gen() % 20));
        std::size_t k = 1 + gen() % 6;
        ClusterAssignment a;
        a.cluster_sizes.assign(k, 0);
        std::map<int, int> prev_cluster;
        for (int c : prev) {
            int l = (int)(gen() % k);
            a.labels.push_back(l);
            ++a.cluster_sizes[(std::size_t)l];
            prev_cluster[c] = l;
        }
        auto m = oracle::flat_manifest(4);
        std::vector<ParamVector> centers;
        for (std::size_t i = 0; i < k; ++i) centers.push_back(oracle::random_vec(gen, m));
        MembershipLedger ledger(ParamVector::zeros(m));
        ledger.record_round(0, prev, a, centers);
        auto got = distribute(ledger, cur, 1);
        auto expect = oracle::brute_distribute(true, {prev.begin(), prev.end()}, prev_cluster, cur);
        const auto mean = mean_of(centers);
        bool ok = got.size() == expect.size();
        for (std::size_t i = 0; ok && i < got.size(); ++i) {
            ok = got[i].client_id == expect[i].client;
            if (expect[i].source == 1)
                ok = ok && got[i].source == DecisionSource::condition1 && got[i].cluster_index == expect[i].cluster &&
                     got[i].model == centers[(std::size_t)expect[i].cluster];
            else
                ok = ok && got[i].source == DecisionSource::condition2_average && got[i].model == mean;
        }
        matched += ok;
    }
    return {matched == 200, std::to_string(matched) + "/200 scenarios match"};
}

Outcome gradient_check() {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> nd;
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::size_t> sizes{2 + gen() % 4};
        for (std::size_t h = gen() % 3; h > 0; --h) sizes.push_back(2 + gen() % 5);
        sizes.push_back(2 + gen() % 3);
        MlpArchitecture arch{sizes};
        auto model = LocalModel::initialized(arch, gen());
        for (std::size_t l = 0; l < arch.layer_count(); ++l)
            for (double& b : model.bias(l)) b = 0.1 * nd(gen);
        std::size_t n = 1 + gen() % 6;
        std::vector<std::vector<double>> xs(n, std::vector<double>(sizes.front()));
        std::vector<int> labels;
        Matrix batch(n, sizes.front());
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < sizes.front(); ++c) batch(r, c) = xs[r][c] = nd(gen);
            labels.push_back((int)(gen() % sizes.back()));
        }
        auto g = gradient(model, batch, labels);
        const double h = 1e-5;
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto plus = model, minus = model;
            plus.params()[i] += h;
            minus.params()[i] -= h;
            double fd = (oracle::mlp_loss_loop(plus, xs, labels) - oracle::mlp_loss_loop(minus, xs, labels)) / (2 * h);
            double denom = std::max({std::abs(fd), std::abs(g[i]), 1e-6});
            worst = std::max(worst, std::abs(fd - g[i]) / denom);
        }
    }
    return {worst < 1e-4, "max relative error " + sci(worst)};
}

Outcome rand_index_oracle() {
    std::mt19937_64 gen(10);
    int exact = 0, self = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + gen() % 29;
        std::vector<int> a(n), b(n);
        unsigned ka = 1 + gen() % 6, kb = 1 + gen() % 6;
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = (int)(gen() % ka);
            b[i] = (int)(gen() % kb);
        }
        exact += rand_index(a, b) == oracle::rand_index_pairs(a, b);
        self += rand_index(a, a) == 1.0;
    }
    return {exact == 100 && self == 100,
            std::to_string(exact) + "/100 exact, " + std::to_string(self) + "/100 self-agreement"};
}

Outcome determinism() {
    auto a = scratch("det_a"), b = scratch("det_b");
    if (run_cli({"run", "--seed", "42", "--out", a.string()}) != 0) return {false, "first run failed"};
    if (run_cli({"run", "--seed", "42", "--out", b.string()}) != 0) return {false, "second run failed"};
    auto ca = slurp(a / "fedcedar.csv"), cb = slurp(b / "fedcedar.csv");
    return {!ca.empty() && ca == cb, std::to_string(ca.size()) + " bytes, " + (ca == cb ? "identical" : "different")};
}

Outcome single_cluster_collapse() {
    ExperimentConfig ced;
    ced.cluster_count = 1;
    ced.rounds = 20;
    ExperimentConfig avg = ced;
    avg.algorithm = Algorithm::fedavg;
    avg.fedavg_weighting = FedAvgWeighting::uniform;
    Simulation a(ced), b(avg);
    double worst = 0;
    bool same_clients = true;
    for (int t = 0; t < 20; ++t) {
        a.step();
        b.step();
        const auto& da = a.last_decisions();
        const auto& db = b.last_decisions();
        same_clients = same_clients && da.size() == db.size();
        for (std::size_t i = 0; same_clients && i < da.size(); ++i) {
            same_clients = da[i].client_id == db[i].client_id;
            worst = std::max(worst, max_abs_diff(da[i].model, db[i].model));
        }
    }
    return {same_clients && worst <= 1e-9, "max abs difference " + sci(worst) + " over 20 rounds"};
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> check;
    };
    const Criterion criteria[] = {
        {"case-study rand-index convergence", case_study_convergence},
        {"topology difficulty ordering", topology_ordering},
        {"personalization gain over fedavg", personalization_gain},
        {"ablation ordering", ablation_ordering},
        {"propagation matches matrix powers", propagation_oracle},
        {"k-means properties", kmeans_properties},
        {"graph stochasticity", graph_stochasticity},
        {"distribution conditions oracle", distribution_oracle},
        {"gradient finite differences", gradient_check},
        {"rand-index pair counting", rand_index_oracle},
        {"run determinism", determinism},
        {"single-cluster collapse to fedavg", single_cluster_collapse},
    };
    int failures = 0, index = 0;
    for (const auto& c : criteria) {
        ++index;
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::printf("%s %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
