#include "fedcedar/local_model.hpp"

#include "fedcedar/error.hpp"
#include "fedcedar/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fedcedar {

void MlpArchitecture::validate() const {
    if (layer_sizes.size() < 2) throw InvalidArgument("MLP needs at least an input and an output size");
    for (std::size_t s : layer_sizes)
        if (s == 0) throw InvalidArgument("MLP layer sizes must be positive");
}

ManifestPtr MlpArchitecture::manifest() const {
    validate();
    std::vector<TensorShape> entries;
    for (std::size_t l = 0; l < layer_count(); ++l) {
        const std::string prefix = "dense" + std::to_string(l);
        entries.push_back({prefix + ".weight", {layer_sizes[l + 1], layer_sizes[l]}});
        entries.push_back({prefix + ".bias", {layer_sizes[l + 1]}});
    }
    return std::make_shared<const ShapeManifest>(std::move(entries));
}

LocalModel::LocalModel(MlpArchitecture architecture)
    : architecture_(std::move(architecture)), params_(ParamVector::zeros(architecture_.manifest())) {}

LocalModel::LocalModel(MlpArchitecture architecture, ParamVector params)
    : architecture_(std::move(architecture)), params_(std::move(params)) {}

LocalModel LocalModel::initialized(MlpArchitecture architecture, std::uint64_t seed) {
    LocalModel m(std::move(architecture));
    Rng rng(seed);
    for (std::size_t l = 0; l < m.architecture_.layer_count(); ++l) {
        const double scale = std::sqrt(2.0 / static_cast<double>(m.architecture_.layer_sizes[l]));
        for (double& w : m.weight(l)) w = scale * rng.normal();
    }
    return m;
}

LocalModel LocalModel::unflatten(MlpArchitecture architecture, const ParamVector& v) {
    const ManifestPtr expected = architecture.manifest();
    if (!v.manifest_ptr() || !(v.manifest() == *expected))
        throw ArchitectureMismatch("parameter vector does not match the MLP architecture");
    return LocalModel(std::move(architecture), v);
}

std::span<const double> LocalModel::weight(std::size_t layer) const {
    const auto& e = params_.manifest().entries().at(2 * layer);
    return params_.values().subspan(params_.manifest().offset(2 * layer), e.element_count());
}
std::span<const double> LocalModel::bias(std::size_t layer) const {
    const auto& e = params_.manifest().entries().at(2 * layer + 1);
    return params_.values().subspan(params_.manifest().offset(2 * layer + 1), e.element_count());
}
std::span<double> LocalModel::weight(std::size_t layer) {
    const auto& e = params_.manifest().entries().at(2 * layer);
    return params_.values().subspan(params_.manifest().offset(2 * layer), e.element_count());
}
std::span<double> LocalModel::bias(std::size_t layer) {
    const auto& e = params_.manifest().entries().at(2 * layer + 1);
    return params_.values().subspan(params_.manifest().offset(2 * layer + 1), e.element_count());
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0 && learning_rate <= 1.0))
        throw InvalidArgument("learning_rate must lie in (0, 1]");
    if (local_epochs < 1) throw InvalidArgument("local_epochs must be positive");
    if (batch_size < 1) throw InvalidArgument("batch_size must be positive");
}

namespace {

// Per-example activations kept for the backward pass.
struct Workspace {
    std::vector<std::vector<double>> act;  // act[0] = input, act[l+1] = output of layer l
    std::vector<double> delta;
    std::vector<double> delta_prev;

    explicit Workspace(const MlpArchitecture& arch) : act(arch.layer_sizes.size()) {
        for (std::size_t l = 0; l < arch.layer_sizes.size(); ++l) act[l].resize(arch.layer_sizes[l]);
    }
};

void check_input_dim(const MlpArchitecture& arch, std::size_t cols) {
    if (cols != arch.input_dim())
        throw DimensionMismatch("input has " + std::to_string(cols) + " features, model expects " +
                                std::to_string(arch.input_dim()));
}

// Fills ws.act; the last entry holds the logits.
void forward_one(const LocalModel& model, std::span<const double> x, Workspace& ws) {
    const auto& sizes = model.architecture().layer_sizes;
    std::copy(x.begin(), x.end(), ws.act[0].begin());
    const std::size_t layers = model.architecture().layer_count();
    for (std::size_t l = 0; l < layers; ++l) {
        const auto w = model.weight(l);
        const auto b = model.bias(l);
        const std::size_t in = sizes[l];
        const std::size_t out = sizes[l + 1];
        const auto& src = ws.act[l];
        auto& dst = ws.act[l + 1];
        for (std::size_t o = 0; o < out; ++o) {
            const double* row = w.data() + o * in;
            double s = b[o];
            for (std::size_t i = 0; i < in; ++i) s += row[i] * src[i];
            dst[o] = (l + 1 < layers) ? std::max(0.0, s) : s;
        }
    }
}

// -log softmax(logits)[label] with max subtraction; also writes softmax into probs if given.
double example_loss(std::span<const double> logits, int label, std::vector<double>* probs) {
    const double m = *std::max_element(logits.begin(), logits.end());
    double z = 0.0;
    for (double v : logits) z += std::exp(v - m);
    if (probs) {
        probs->resize(logits.size());
        for (std::size_t c = 0; c < logits.size(); ++c) (*probs)[c] = std::exp(logits[c] - m) / z;
    }
    return -(logits[static_cast<std::size_t>(label)] - m) + std::log(z);
}

void check_label(int label, std::size_t classes) {
    if (label < 0 || static_cast<std::size_t>(label) >= classes)
        throw InvalidArgument("label " + std::to_string(label) + " outside [0, " + std::to_string(classes) + ")");
}

// Adds scale * d(loss_i)/d(params) into grad for one example; returns the example loss.
double accumulate_example(const LocalModel& model, std::span<const double> x, int label, double scale,
                          std::span<double> grad, Workspace& ws) {
    const auto& arch = model.architecture();
    const auto& sizes = arch.layer_sizes;
    const auto& manifest = model.params().manifest();
    forward_one(model, x, ws);
    const std::size_t layers = arch.layer_count();

    std::vector<double>& delta = ws.delta;
    const double loss = example_loss(ws.act[layers], label, &delta);
    delta[static_cast<std::size_t>(label)] -= 1.0;
    for (double& d : delta) d *= scale;

    for (std::size_t l = layers; l-- > 0;) {
        const std::size_t in = sizes[l];
        const std::size_t out = sizes[l + 1];
        double* gw = grad.data() + manifest.offset(2 * l);
        double* gb = grad.data() + manifest.offset(2 * l + 1);
        const auto& a = ws.act[l];
        for (std::size_t o = 0; o < out; ++o) {
            const double d = delta[o];
            gb[o] += d;
            if (d == 0.0) continue;
            double* row = gw + o * in;
            for (std::size_t i = 0; i < in; ++i) row[i] += d * a[i];
        }
        if (l == 0) break;
        const auto w = model.weight(l);
        ws.delta_prev.assign(in, 0.0);
        for (std::size_t o = 0; o < out; ++o) {
            const double d = delta[o];
            if (d == 0.0) continue;
            const double* row = w.data() + o * in;
            for (std::size_t i = 0; i < in; ++i) ws.delta_prev[i] += d * row[i];
        }
        // ReLU derivative, taken as 0 at the kink.
        for (std::size_t i = 0; i < in; ++i)
            if (a[i] <= 0.0) ws.delta_prev[i] = 0.0;
        std::swap(delta, ws.delta_prev);
    }
    return loss;
}

std::size_t argmax_lowest(std::span<const double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

} // namespace

Matrix forward(const LocalModel& model, const Matrix& inputs) {
    const auto& arch = model.architecture();
    check_input_dim(arch, inputs.cols);
    Matrix out(inputs.rows, arch.class_count());
    Workspace ws(arch);
    for (std::size_t r = 0; r < inputs.rows; ++r) {
        forward_one(model, inputs.row(r), ws);
        std::copy(ws.act.back().begin(), ws.act.back().end(), out.data.begin() + r * out.cols);
    }
    return out;
}

double ce_loss(const Matrix& logits, std::span<const int> labels) {
    if (labels.size() != logits.rows) throw DimensionMismatch("logit rows and label count differ");
    if (labels.empty()) throw EmptyInput("cross-entropy of an empty batch");
    double total = 0.0;
    for (std::size_t r = 0; r < logits.rows; ++r) {
        check_label(labels[r], logits.cols);
        total += example_loss(logits.row(r), labels[r], nullptr);
    }
    return total / static_cast<double>(logits.rows);
}

ParamVector gradient(const LocalModel& model, const Matrix& inputs, std::span<const int> labels) {
    const auto& arch = model.architecture();
    check_input_dim(arch, inputs.cols);
    if (labels.size() != inputs.rows) throw DimensionMismatch("input rows and label count differ");
    if (labels.empty()) throw EmptyInput("gradient of an empty batch");
    ParamVector grad = ParamVector::zeros(model.params().manifest_ptr());
    Workspace ws(arch);
    const double scale = 1.0 / static_cast<double>(inputs.rows);
    for (std::size_t r = 0; r < inputs.rows; ++r) {
        check_label(labels[r], arch.class_count());
        accumulate_example(model, inputs.row(r), labels[r], scale, grad.values(), ws);
    }
    return grad;
}

LocalModel train_local(const LocalModel& model, const ClientDataset& data, const TrainConfig& cfg) {
    if (data.train.empty()) throw EmptyInput("client " + std::to_string(data.client_id) + " has no training data");
    if (cfg.learning_rate < 0.0) throw InvalidArgument("negative learning rate");
    if (cfg.local_epochs < 0 || cfg.batch_size < 1) throw InvalidArgument("invalid epoch count or batch size");
    const auto& arch = model.architecture();
    for (const auto& e : data.train) {
        check_input_dim(arch, e.features.size());
        check_label(e.label, arch.class_count());
    }

    LocalModel trained = model;
    Workspace ws(arch);
    std::vector<double> grad(model.params().size());
    std::vector<std::size_t> order(data.train.size());
    const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);

    for (int epoch = 0; epoch < cfg.local_epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng rng(derive_seed(cfg.rng_seed, {static_cast<std::uint64_t>(epoch)}));
        rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t end = std::min(order.size(), start + batch);
            const double scale = 1.0 / static_cast<double>(end - start);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t k = start; k < end; ++k) {
                const Example& e = data.train[order[k]];
                accumulate_example(trained, e.features, e.label, scale, grad, ws);
            }
            auto p = trained.params().values();
            for (std::size_t i = 0; i < p.size(); ++i) p[i] -= cfg.learning_rate * grad[i];
        }
    }
    return trained;
}

double accuracy_on(const LocalModel& model, const std::vector<Example>& examples) {
    if (examples.empty()) throw EmptyInput("accuracy over an empty example set");
    Workspace ws(model.architecture());
    std::size_t correct = 0;
    for (const auto& e : examples) {
        check_input_dim(model.architecture(), e.features.size());
        forward_one(model, e.features, ws);
        if (static_cast<int>(argmax_lowest(ws.act.back())) == e.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(examples.size());
}

double evaluate(const LocalModel& model, const ClientDataset& data) {
    if (data.test.empty()) throw EmptyInput("client " + std::to_string(data.client_id) + " has no test data");
    return accuracy_on(model, data.test);
}

double dataset_loss(const LocalModel& model, const std::vector<Example>& examples) {
    std::vector<int> labels;
    const Matrix x = stack_features(examples, &labels);
    return ce_loss(forward(model, x), labels);
}

Matrix stack_features(const std::vector<Example>& examples, std::vector<int>* labels) {
    if (examples.empty()) throw EmptyInput("no examples to stack");
    const std::size_t dim = examples.front().features.size();
    Matrix m(examples.size(), dim);
    if (labels) labels->clear();
    for (std::size_t r = 0; r < examples.size(); ++r) {
        if (examples[r].features.size() != dim) throw DimensionMismatch("ragged feature rows");
        std::copy(examples[r].features.begin(), examples[r].features.end(), m.data.begin() + r * dim);
        if (labels) labels->push_back(examples[r].label);
    }
    return m;
}

} // namespace fedcedar
