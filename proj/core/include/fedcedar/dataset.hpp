#pragma once

#include <cstddef>
#include <vector>

namespace fedcedar {

struct Example {
    std::size_t id = 0;  // position in the originating pool
    std::vector<double> features;
    int label = 0;
};

using ExamplePool = std::vector<Example>;

struct ClientDataset {
    int client_id = 0;
    std::vector<Example> train;
    std::vector<Example> test;
    std::vector<std::size_t> label_histogram;  // training examples per class

    std::size_t distinct_train_labels() const;
};

// Per-class counts of a set of examples.
std::vector<std::size_t> histogram_of(const std::vector<Example>& examples, std::size_t class_count);

} // namespace fedcedar
