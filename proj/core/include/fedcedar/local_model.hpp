#pragma once

#include "fedcedar/dataset.hpp"
#include "fedcedar/param_space.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace fedcedar {

enum class Activation { relu };

struct MlpArchitecture {
    // input dim, hidden dims..., class count
    std::vector<std::size_t> layer_sizes;
    Activation activation = Activation::relu;

    std::size_t input_dim() const { return layer_sizes.front(); }
    std::size_t class_count() const { return layer_sizes.back(); }
    std::size_t layer_count() const { return layer_sizes.size() - 1; }

    // Throws InvalidArgument when fewer than two sizes are given or a size is zero.
    void validate() const;

    // Layout "dense<l>.weight" [out x in] then "dense<l>.bias" [out] per layer.
    ManifestPtr manifest() const;

    bool operator==(const MlpArchitecture&) const = default;
};

// Row-major dense matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

class LocalModel {
public:
    // All parameters zero.
    explicit LocalModel(MlpArchitecture architecture);

    // He-normal weights, zero biases.
    static LocalModel initialized(MlpArchitecture architecture, std::uint64_t seed);

    // Throws ArchitectureMismatch if the vector's manifest does not describe `architecture`.
    static LocalModel unflatten(MlpArchitecture architecture, const ParamVector& v);
    ParamVector flatten() const { return params_; }

    const MlpArchitecture& architecture() const { return architecture_; }
    const ParamVector& params() const { return params_; }
    ParamVector& params() { return params_; }

    // Views of layer l. Weight is [out x in], row-major.
    std::span<const double> weight(std::size_t layer) const;
    std::span<const double> bias(std::size_t layer) const;
    std::span<double> weight(std::size_t layer);
    std::span<double> bias(std::size_t layer);

private:
    LocalModel(MlpArchitecture architecture, ParamVector params);

    MlpArchitecture architecture_;
    ParamVector params_;
};

struct TrainConfig {
    double learning_rate = 0.01;
    int local_epochs = 5;
    int batch_size = 16;
    std::uint64_t rng_seed = 0;

    // learning_rate in (0, 1], positive epochs and batch size.
    void validate() const;
};

// Logits for a [batch x input_dim] matrix.
Matrix forward(const LocalModel& model, const Matrix& inputs);

// Mean cross-entropy of softmax(logits) against labels.
double ce_loss(const Matrix& logits, std::span<const int> labels);

// Gradient of the mean cross-entropy with respect to every parameter, laid
// out like model.flatten().
ParamVector gradient(const LocalModel& model, const Matrix& inputs, std::span<const int> labels);

// Mini-batch SGD over data.train. The input model is not modified.
LocalModel train_local(const LocalModel& model, const ClientDataset& data, const TrainConfig& cfg);

// Fraction of data.test classified correctly (argmax, lowest index wins ties).
double evaluate(const LocalModel& model, const ClientDataset& data);

// Same as evaluate but over an arbitrary example list; throws EmptyInput on empty.
double accuracy_on(const LocalModel& model, const std::vector<Example>& examples);

// Mean CE of the model over a set of examples.
double dataset_loss(const LocalModel& model, const std::vector<Example>& examples);

// Stacks example features into a matrix and collects the labels.
Matrix stack_features(const std::vector<Example>& examples, std::vector<int>* labels = nullptr);

} // namespace fedcedar
