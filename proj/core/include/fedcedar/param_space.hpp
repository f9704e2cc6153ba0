#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace fedcedar {

struct TensorShape {
    std::string name;
    std::vector<std::size_t> dims;

    std::size_t element_count() const;
    bool operator==(const TensorShape&) const = default;
};

// Ordered list of named tensors. The flattened layout of a parameter vector
// is the entries in declaration order, each tensor row-major.
class ShapeManifest {
public:
    ShapeManifest() = default;
    explicit ShapeManifest(std::vector<TensorShape> entries);

    const std::vector<TensorShape>& entries() const { return entries_; }
    std::size_t total_size() const { return total_; }
    // Offset of entry `index` within the flat vector.
    std::size_t offset(std::size_t index) const { return offsets_.at(index); }

    bool operator==(const ShapeManifest& other) const { return entries_ == other.entries_; }

private:
    std::vector<TensorShape> entries_;
    std::vector<std::size_t> offsets_;
    std::size_t total_ = 0;
};

using ManifestPtr = std::shared_ptr<const ShapeManifest>;

// Flat real-coefficient vector tagged with the manifest that gives it shape.
// Models, cluster centers and every server-side aggregate travel as this type.
class ParamVector {
public:
    ParamVector() = default;
    ParamVector(ManifestPtr manifest, std::vector<double> coefficients);
    static ParamVector zeros(ManifestPtr manifest);

    std::size_t size() const { return coefficients_.size(); }
    std::span<const double> values() const { return coefficients_; }
    std::span<double> values() { return coefficients_; }
    double operator[](std::size_t i) const { return coefficients_[i]; }
    double& operator[](std::size_t i) { return coefficients_[i]; }

    const ManifestPtr& manifest_ptr() const { return manifest_; }
    const ShapeManifest& manifest() const { return *manifest_; }
    bool same_layout(const ParamVector& other) const;

    bool all_finite() const;
    double norm() const;

    // Exact coefficient equality (and matching layout).
    bool operator==(const ParamVector& other) const;

private:
    ManifestPtr manifest_;
    std::vector<double> coefficients_;
};

// Throws ManifestMismatch unless a and b share a layout.
void require_same_layout(const ParamVector& a, const ParamVector& b);

double dot(const ParamVector& a, const ParamVector& b);
double euclidean_distance_sq(const ParamVector& a, const ParamVector& b);

// Norms below this are treated as zero by cosine_similarity.
inline constexpr double kDegenerateNorm = 1e-12;

// (a.b)/(|a||b|), clamped to [-1, 1]. Throws DegenerateVector when either norm
// is below kDegenerateNorm.
double cosine_similarity(const ParamVector& a, const ParamVector& b);

ParamVector weighted_sum(std::span<const ParamVector> vectors, std::span<const double> weights);

// Unweighted arithmetic mean; throws EmptyInput on an empty list.
ParamVector mean_of(std::span<const ParamVector> vectors);

// Maximum absolute coordinate difference.
double max_abs_diff(const ParamVector& a, const ParamVector& b);

} // namespace fedcedar
