#pragma once

#include <span>
#include <vector>

namespace fedcedar {

// Group label per item; items identified by id.
struct Partition {
    std::vector<int> item_ids;
    std::vector<int> labels;

    static Partition over_indices(std::vector<int> labels);
};

// Fraction of unordered item pairs on which the two partitions agree (both
// together or both apart). Throws InvalidArgument on differing item sets or
// fewer than two items.
double rand_index(const Partition& a, const Partition& b);
double rand_index(std::span<const int> a, std::span<const int> b);

// Unweighted mean; throws EmptyInput on an empty list.
double mean_accuracy(std::span<const double> per_client);

} // namespace fedcedar
