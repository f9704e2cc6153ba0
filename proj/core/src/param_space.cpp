#include "fedcedar/param_space.hpp"

#include "fedcedar/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

namespace fedcedar {

std::size_t TensorShape::element_count() const {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

ShapeManifest::ShapeManifest(std::vector<TensorShape> entries) : entries_(std::move(entries)) {
    std::set<std::string> names;
    offsets_.reserve(entries_.size());
    for (const auto& e : entries_) {
        if (!names.insert(e.name).second) throw InvalidArgument("duplicate tensor name '" + e.name + "'");
        if (e.dims.empty()) throw InvalidArgument("tensor '" + e.name + "' has no dimensions");
        for (std::size_t d : e.dims)
            if (d == 0) throw InvalidArgument("tensor '" + e.name + "' has a zero dimension");
        offsets_.push_back(total_);
        total_ += e.element_count();
    }
}

ParamVector::ParamVector(ManifestPtr manifest, std::vector<double> coefficients)
    : manifest_(std::move(manifest)), coefficients_(std::move(coefficients)) {
    if (!manifest_) throw InvalidArgument("parameter vector requires a manifest");
    if (coefficients_.size() != manifest_->total_size())
        throw ArchitectureMismatch("manifest expects " + std::to_string(manifest_->total_size()) +
                                   " coefficients, got " + std::to_string(coefficients_.size()));
}

ParamVector ParamVector::zeros(ManifestPtr manifest) {
    const std::size_t n = manifest->total_size();
    return ParamVector(std::move(manifest), std::vector<double>(n, 0.0));
}

bool ParamVector::same_layout(const ParamVector& other) const {
    if (manifest_ == other.manifest_) return true;
    if (!manifest_ || !other.manifest_) return false;
    return *manifest_ == *other.manifest_;
}

bool ParamVector::all_finite() const {
    return std::all_of(coefficients_.begin(), coefficients_.end(),
                       [](double v) { return std::isfinite(v); });
}

double ParamVector::norm() const {
    double s = 0.0;
    for (double v : coefficients_) s += v * v;
    return std::sqrt(s);
}

bool ParamVector::operator==(const ParamVector& other) const {
    return same_layout(other) && coefficients_ == other.coefficients_;
}

void require_same_layout(const ParamVector& a, const ParamVector& b) {
    if (!a.same_layout(b)) throw ManifestMismatch("parameter vectors have different manifests");
}

double dot(const ParamVector& a, const ParamVector& b) {
    require_same_layout(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double euclidean_distance_sq(const ParamVector& a, const ParamVector& b) {
    require_same_layout(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double cosine_similarity(const ParamVector& a, const ParamVector& b) {
    require_same_layout(a, b);
    const double na = a.norm();
    const double nb = b.norm();
    if (na < kDegenerateNorm || nb < kDegenerateNorm)
        throw DegenerateVector("cosine similarity of a near-zero vector");
    return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

ParamVector weighted_sum(std::span<const ParamVector> vectors, std::span<const double> weights) {
    if (vectors.empty()) throw EmptyInput("weighted_sum of an empty list");
    if (vectors.size() != weights.size())
        throw InvalidArgument("weighted_sum: " + std::to_string(vectors.size()) + " vectors but " +
                              std::to_string(weights.size()) + " weights");
    for (const auto& v : vectors) require_same_layout(vectors.front(), v);

    std::vector<double> out(vectors.front().size(), 0.0);
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        const double w = weights[k];
        auto src = vectors[k].values();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * src[i];
    }
    return ParamVector(vectors.front().manifest_ptr(), std::move(out));
}

ParamVector mean_of(std::span<const ParamVector> vectors) {
    if (vectors.empty()) throw EmptyInput("mean of an empty list");
    for (const auto& v : vectors) require_same_layout(vectors.front(), v);
    // Running mean: exact when every input is the same vector.
    std::vector<double> out(vectors.front().values().begin(), vectors.front().values().end());
    for (std::size_t k = 1; k < vectors.size(); ++k) {
        auto src = vectors[k].values();
        const double inv = 1.0 / static_cast<double>(k + 1);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += (src[i] - out[i]) * inv;
    }
    return ParamVector(vectors.front().manifest_ptr(), std::move(out));
}

double max_abs_diff(const ParamVector& a, const ParamVector& b) {
    require_same_layout(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace fedcedar
