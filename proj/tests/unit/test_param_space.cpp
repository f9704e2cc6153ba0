#include "doctest.h"
#include "oracles.hpp"

#include "fedcedar/error.hpp"
#include "fedcedar/local_model.hpp"
#include "fedcedar/param_space.hpp"

#include <cmath>
#include <random>

using namespace fedcedar;
using oracle::vec;

namespace {

MlpArchitecture single_layer_2x2() { return MlpArchitecture{{2, 2}}; }

} // namespace

TEST_CASE("flatten lays out weight rows then bias") {
    LocalModel m(single_layer_2x2());
    auto w = m.weight(0);
    w[0] = 1; w[1] = 2; w[2] = 3; w[3] = 4;
    auto b = m.bias(0);
    b[0] = 5; b[1] = 6;
    auto flat = m.flatten();
    REQUIRE(flat.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(flat[i] == double(i + 1));
}

TEST_CASE("unflatten is the inverse of flatten") {
    auto arch = single_layer_2x2();
    auto v = ParamVector(arch.manifest(), {1, 2, 3, 4, 5, 6});
    auto m = LocalModel::unflatten(arch, v);
    CHECK(m.weight(0)[0] == 1);
    CHECK(m.weight(0)[1] == 2);
    CHECK(m.weight(0)[2] == 3);
    CHECK(m.weight(0)[3] == 4);
    CHECK(m.bias(0)[0] == 5);
    CHECK(m.bias(0)[1] == 6);

    MlpArchitecture deep{{5, 7, 3, 4}};
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto model = LocalModel::initialized(deep, s);
        auto back = LocalModel::unflatten(deep, model.flatten());
        CHECK(back.flatten() == model.flatten());
    }
}

TEST_CASE("zero model flattens to zeros") {
    LocalModel m(MlpArchitecture{{3, 4, 2}});
    const auto flat = m.flatten();
    for (double x : flat.values()) CHECK(x == 0.0);
}

TEST_CASE("wrong coefficient count is an architecture mismatch") {
    auto arch = single_layer_2x2();
    CHECK_THROWS_AS(ParamVector(arch.manifest(), {1, 2, 3, 4, 5}), ArchitectureMismatch);
    auto other = LocalModel::initialized(MlpArchitecture{{3, 2}}, 1).flatten();
    CHECK_THROWS_AS(LocalModel::unflatten(arch, other), ArchitectureMismatch);
}

TEST_CASE("manifest rejects duplicate names and empty dimensions") {
    CHECK_THROWS_AS(ShapeManifest({{"a", {2}}, {"a", {3}}}), InvalidArgument);
    CHECK_THROWS_AS(ShapeManifest({{"a", {2, 0}}}), InvalidArgument);
    ShapeManifest m({{"a", {2, 3}}, {"b", {4}}});
    CHECK(m.total_size() == 10);
    CHECK(m.offset(1) == 6);
}

TEST_CASE("squared distance examples") {
    CHECK(euclidean_distance_sq(vec({1, 2, 3}), vec({1, 2, 3})) == 0.0);
    CHECK(euclidean_distance_sq(vec({0, 0}), vec({3, 4})) == 25.0);

    std::mt19937_64 gen(11);
    auto m = oracle::flat_manifest(37);
    for (int i = 0; i < 50; ++i) {
        auto a = oracle::random_vec(gen, m), b = oracle::random_vec(gen, m);
        double expect = oracle::distance_sq_loop(oracle::to_std(a), oracle::to_std(b));
        CHECK(euclidean_distance_sq(a, b) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("layout mismatch is rejected") {
    CHECK_THROWS_AS(euclidean_distance_sq(vec({1, 2}), vec({1, 2, 3})), ManifestMismatch);
    // Same size, different tensor names.
    auto a = ParamVector(std::make_shared<const ShapeManifest>(std::vector<TensorShape>{{"x", {2}}}), {1, 2});
    auto b = ParamVector(std::make_shared<const ShapeManifest>(std::vector<TensorShape>{{"y", {2}}}), {1, 2});
    CHECK_THROWS_AS(dot(a, b), ManifestMismatch);
}

TEST_CASE("cosine similarity examples") {
    CHECK(cosine_similarity(vec({1, 2, 3}), vec({1, 2, 3})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(cosine_similarity(vec({1, 0}), vec({0, 1}))) < 1e-15);
    CHECK(cosine_similarity(vec({1, 1}), vec({1, 0})) == doctest::Approx(0.7071067812).epsilon(1e-9));
    CHECK_THROWS_AS(cosine_similarity(vec({0, 0}), vec({1, 0})), DegenerateVector);
}

TEST_CASE("cosine similarity properties") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> pos(0.1, 10.0);
    auto m = oracle::flat_manifest(9);
    for (int i = 0; i < 100; ++i) {
        auto a = oracle::random_vec(gen, m), b = oracle::random_vec(gen, m);
        double c = cosine_similarity(a, b);
        CHECK(c >= -1.0);
        CHECK(c <= 1.0);
        CHECK(c == cosine_similarity(b, a));
        auto scaled = a;
        double s = pos(gen);
        for (double& x : scaled.values()) x *= s;
        CHECK(std::abs(cosine_similarity(scaled, b) - c) < 1e-10);
    }
}

TEST_CASE("weighted sum examples") {
    std::vector<ParamVector> vs{vec({1, 2}), vec({3, 4})};
    std::vector<double> w{0.25, 0.75};
    auto r = weighted_sum(vs, w);
    CHECK(r[0] == doctest::Approx(2.5));
    CHECK(r[1] == doctest::Approx(3.5));

    std::vector<double> half{0.5, 0.5};
    auto mean = weighted_sum(vs, half);
    CHECK(mean[0] == 2.0);
    CHECK(mean[1] == 3.0);

    std::vector<ParamVector> one{vec({1.25, -7.5})};
    std::vector<double> unit{1.0};
    CHECK(weighted_sum(one, unit) == one[0]);

    std::vector<double> bad{1.0};
    CHECK_THROWS_AS(weighted_sum(vs, bad), InvalidArgument);
    CHECK_THROWS_AS(weighted_sum(std::span<const ParamVector>{}, std::span<const double>{}), EmptyInput);
    std::vector<ParamVector> mixed{vec({1, 2}), vec({1, 2, 3})};
    CHECK_THROWS_AS(weighted_sum(mixed, half), ManifestMismatch);
}

TEST_CASE("weighted sum is linear") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd;
    auto m = oracle::flat_manifest(13);
    for (int i = 0; i < 50; ++i) {
        std::vector<ParamVector> vs;
        std::vector<double> w1, w2, sum;
        for (int k = 0; k < 4; ++k) {
            vs.push_back(oracle::random_vec(gen, m));
            w1.push_back(nd(gen));
            w2.push_back(nd(gen));
            sum.push_back(w1.back() + w2.back());
        }
        auto lhs = weighted_sum(vs, sum);
        auto a = weighted_sum(vs, w1), b = weighted_sum(vs, w2);
        for (std::size_t d = 0; d < lhs.size(); ++d) CHECK(std::abs(lhs[d] - (a[d] + b[d])) < 1e-12);
    }
}

TEST_CASE("mean of identical vectors is exact") {
    auto v = vec({0.1, 0.7, -1.3});
    std::vector<ParamVector> copies(7, v);
    CHECK(mean_of(copies) == v);
    CHECK_THROWS_AS(mean_of(std::span<const ParamVector>{}), EmptyInput);
}
