#include "relaynet/opt_core.hpp"

#include "relaynet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace relaynet {

namespace {
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;
} // namespace

void SearchSpec::validate() const
{
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw UsageError("search interval requires finite lo < hi");
    if (!(tolerance > 0.0))
        throw UsageError("search tolerance must be positive");
}

int golden_iteration_bound(const SearchSpec& spec)
{
    const double ratio = (spec.hi - spec.lo) / spec.tolerance;
    if (ratio <= 1.0)
        return 2;
    return static_cast<int>(std::ceil(std::log(ratio) / std::log(kPhi))) + 2;
}

ScalarOptimum golden_max(const std::function<double(double)>& f, const SearchSpec& spec)
{
    spec.validate();
    const int max_iter = spec.max_iterations > 0 ? spec.max_iterations : golden_iteration_bound(spec);

    auto eval = [&](double x) {
        x = std::clamp(x, spec.lo, spec.hi);
        const double v = f(x);
        if (std::isnan(v)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "objective returned NaN at argument " << x;
            throw NumericalError(msg.str());
        }
        return std::pair{x, v};
    };

    double a = spec.lo;
    double b = spec.hi;
    auto [c, fc] = eval(b - kInvPhi * (b - a));
    auto [d, fd] = eval(a + kInvPhi * (b - a));
    int iter = 0;
    while (b - a > spec.tolerance && iter < max_iter) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            std::tie(c, fc) = eval(b - kInvPhi * (b - a));
        } else {
            a = c;
            c = d;
            fc = fd;
            std::tie(d, fd) = eval(a + kInvPhi * (b - a));
        }
        ++iter;
    }

    const auto [lo, flo] = eval(spec.lo);
    const auto [hi, fhi] = eval(spec.hi);
    std::pair<double, double> candidates[] = {{lo, flo}, {c, fc}, {d, fd}, {hi, fhi}};
    ScalarOptimum best{candidates[0].first, candidates[0].second, iter};
    for (const auto& [x, v] : candidates) {
        if (v > best.value || (v == best.value && x < best.arg)) {
            best.arg = x;
            best.value = v;
        }
    }
    return best;
}

double bisect_min_feasible(const std::function<bool(double)>& pred, double lo, double hi, Tolerance tol)
{
    if (!(lo <= hi))
        throw UsageError("bisect_min_feasible requires lo <= hi");
    if (!(tol.absolute > 0.0 || tol.relative > 0.0))
        throw UsageError("bisect_min_feasible requires a positive tolerance");
    if (!pred(hi))
        throw InfeasibleError("predicate is infeasible at the upper end of the search interval");
    if (pred(lo))
        return lo;
    for (int iter = 0; iter < 4096; ++iter) {
        const double width = std::max(tol.absolute, tol.relative * std::abs(hi));
        if (hi - lo <= width)
            break;
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi)
            break;
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

SetPartitionEnumerator::SetPartitionEnumerator(int n, int cap) : n_(n)
{
    if (n < 1)
        throw UsageError("set partitions need at least one element");
    if (n > cap)
        throw CapacityError("set partition enumeration of " + std::to_string(n) +
                            " elements exceeds the cap of " + std::to_string(cap));
    rgs_.assign(static_cast<std::size_t>(n), 0);
    prefix_max_.assign(static_cast<std::size_t>(n), 0);
}

bool SetPartitionEnumerator::next(SetPartition& out)
{
    if (done_)
        return false;
    if (started_) {
        // prefix_max_[i] = max(rgs_[0..i-1]); rgs_[i] may grow up to prefix_max_[i] + 1.
        int i = n_ - 1;
        while (i > 0 && rgs_[static_cast<std::size_t>(i)] > prefix_max_[static_cast<std::size_t>(i)])
            --i;
        if (i == 0) {
            done_ = true;
            return false;
        }
        ++rgs_[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n_; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            rgs_[ju] = 0;
            prefix_max_[ju] = std::max(prefix_max_[ju - 1], rgs_[ju - 1]);
        }
    }
    started_ = true;

    out.rgs = rgs_;
    const int blocks = *std::max_element(rgs_.begin(), rgs_.end()) + 1;
    out.blocks.assign(static_cast<std::size_t>(blocks), {});
    for (int e = 0; e < n_; ++e)
        out.blocks[static_cast<std::size_t>(rgs_[static_cast<std::size_t>(e)])].push_back(e);
    return true;
}

std::vector<SetPartition> set_partitions(int n, int cap)
{
    SetPartitionEnumerator it(n, cap);
    std::vector<SetPartition> out;
    SetPartition p;
    while (it.next(p))
        out.push_back(p);
    return out;
}

std::uint64_t bell_number(int n)
{
    if (n < 0)
        throw UsageError("bell_number needs n >= 0");
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    for (int k = 0; k < n; ++k) {
        std::vector<std::uint64_t> next{row.back()};
        for (std::uint64_t v : row)
            next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

} // namespace relaynet
