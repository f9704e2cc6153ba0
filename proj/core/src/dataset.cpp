#include "fedcedar/dataset.hpp"

#include <algorithm>

namespace fedcedar {

std::size_t ClientDataset::distinct_train_labels() const {
    return static_cast<std::size_t>(
        std::count_if(label_histogram.begin(), label_histogram.end(), [](std::size_t c) { return c > 0; }));
}

std::vector<std::size_t> histogram_of(const std::vector<Example>& examples, std::size_t class_count) {
    std::vector<std::size_t> h(class_count, 0);
    for (const auto& e : examples) h.at(static_cast<std::size_t>(e.label))++;
    return h;
}

} // namespace fedcedar
