#pragma once

// Scalar search, feasibility bisection and set-partition enumeration.

#include <cstdint>
#include <functional>
#include <vector>

namespace relaynet {

struct SearchSpec {
    double lo = 0.0;
    double hi = 1.0;
    double tolerance = 1e-10;
    /// 0 selects ceil(log((hi - lo)/tolerance)/log(phi)) + 2.
    int max_iterations = 0;

    void validate() const;
};

struct ScalarOptimum {
    double arg = 0.0;
    double value = 0.0;
    int iterations = 0;
};

/// Golden-section maximisation on [lo, hi]. The interval endpoints are also
/// evaluated; among equal values the smallest argument wins. f is never
/// called outside [lo, hi]. A NaN from f raises NumericalError.
ScalarOptimum golden_max(const std::function<double(double)>& f, const SearchSpec& spec);

int golden_iteration_bound(const SearchSpec& spec);

struct Tolerance {
    double absolute = 0.0;
    double relative = 0.0;
};

/// Smallest x in [lo, hi] for a predicate that is false below some threshold
/// and true above it. Returns lo when pred(lo) holds; throws InfeasibleError
/// when pred(hi) fails. The result satisfies pred, result - width does not,
/// where width = max(absolute, relative * |result|).
double bisect_min_feasible(const std::function<bool(double)>& pred, double lo, double hi, Tolerance tol);

inline constexpr int kDefaultPartitionCap = 8;

/// One set partition of {0, ..., n-1}: its restricted growth string and its
/// blocks (each ascending, blocks ordered by smallest element).
struct SetPartition {
    std::vector<int> rgs;
    std::vector<std::vector<int>> blocks;
};

/// Enumerates set partitions in lexicographic restricted-growth-string order.
/// Single consumer; make another instance to enumerate again.
class SetPartitionEnumerator {
public:
    explicit SetPartitionEnumerator(int n, int cap = kDefaultPartitionCap);

    /// Writes the next partition into `out`; false once exhausted.
    bool next(SetPartition& out);

private:
    int n_;
    bool started_ = false;
    bool done_ = false;
    std::vector<int> rgs_;
    std::vector<int> prefix_max_;
};

/// All Bell(n) partitions, in enumeration order.
std::vector<SetPartition> set_partitions(int n, int cap = kDefaultPartitionCap);

std::uint64_t bell_number(int n);

} // namespace relaynet
