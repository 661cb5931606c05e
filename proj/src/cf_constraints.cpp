#include "relaynet/cf_constraints.hpp"

#include "relaynet/errors.hpp"
#include "relaynet/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace relaynet {

namespace {

constexpr double kLargestStart = 1e250;

std::string join(const std::vector<int>& v)
{
    std::ostringstream out;
    for (std::size_t k = 0; k < v.size(); ++k)
        out << (k ? "," : "") << v[k];
    return out.str();
}

void check_cap(std::size_t relays, int cap)
{
    if (static_cast<int>(relays) > cap)
        throw CapacityError("constraint enumeration over " + std::to_string(relays) +
                            " relays exceeds the relay cap of " + std::to_string(cap));
}

std::vector<int> routing_targets(const RelayNetwork& net, const std::vector<int>& relays)
{
    std::vector<int> targets = relays;
    targets.push_back(net.node_count());
    std::sort(targets.begin(), targets.end());
    return targets;
}

std::vector<int> subset_of(const std::vector<int>& relays, unsigned mask)
{
    std::vector<int> s;
    for (std::size_t k = 0; k < relays.size(); ++k)
        if (mask & (1u << k))
            s.push_back(relays[k]);
    return s;
}

/// 1/2 ln(1 + sum_{i in block, i != r} g_ir P_i / (g_1r P1 + N_r)).
double block_term_nats(const RelayNetwork& net, const std::vector<int>& block, int target)
{
    double num = 0.0;
    for (int i : block)
        if (i != target)
            num += net.gain(i, target) * net.power(i);
    const double den = net.gain(1, target) * net.power(1) + net.noise(target);
    return 0.5 * std::log1p(num / den);
}

std::vector<int> candidates_for(const std::vector<int>& targets, const std::vector<int>& block)
{
    std::vector<int> out;
    for (int r : targets)
        if (std::find(block.begin(), block.end(), r) == block.end())
            out.push_back(r);
    return out;
}

double lhs_nats_for(const RelayNetwork& net, const std::vector<int>& subset, const QuantizationProfile& q)
{
    const double p1 = net.power(1);
    double log_noise = 0.0;
    double snr = 0.0;
    for (int s : subset) {
        const double qs = q.at(s);
        const double ns = net.noise(s);
        log_noise += std::log1p(ns / qs);
        snr += net.gain(1, s) / (ns + qs);
    }
    return 0.5 * (log_noise + std::log1p(p1 * snr));
}

} // namespace

const char* to_string(ConstraintMode mode) noexcept
{
    return mode == ConstraintMode::forall ? "forall" : "exists";
}

ConstraintMode constraint_mode_from_string(const std::string& name)
{
    if (name == "forall")
        return ConstraintMode::forall;
    if (name == "exists")
        return ConstraintMode::exists;
    throw UsageError("unknown constraint mode '" + name + "' (expected forall or exists)");
}

std::string ConstraintInstance::label() const
{
    std::ostringstream out;
    out << "S={" << join(subset) << "} B={";
    for (std::size_t m = 0; m < blocks.size(); ++m)
        out << (m ? "," : "") << "{" << join(blocks[m]) << "}";
    out << "} r=(" << join(routing) << ")";
    return out.str();
}

void for_each_constraint(const RelayNetwork& net, const std::vector<int>& relays, int relay_cap,
                         const std::function<void(const ConstraintInstance&)>& visit)
{
    check_cap(relays.size(), relay_cap);
    std::vector<int> sorted = relays;
    std::sort(sorted.begin(), sorted.end());
    const auto targets = routing_targets(net, sorted);
    const unsigned full = 1u << sorted.size();

    ConstraintInstance inst;
    for (unsigned mask = 1; mask < full; ++mask) {
        inst.subset = subset_of(sorted, mask);
        SetPartitionEnumerator parts(static_cast<int>(inst.subset.size()), relay_cap);
        SetPartition p;
        while (parts.next(p)) {
            inst.blocks.clear();
            std::vector<std::vector<int>> choices;
            for (const auto& block : p.blocks) {
                std::vector<int> nodes;
                for (int e : block)
                    nodes.push_back(inst.subset[static_cast<std::size_t>(e)]);
                choices.push_back(candidates_for(targets, nodes));
                inst.blocks.push_back(std::move(nodes));
            }
            const std::size_t m = choices.size();
            std::vector<std::size_t> idx(m, 0);
            while (true) {
                inst.routing.resize(m);
                for (std::size_t b = 0; b < m; ++b)
                    inst.routing[b] = choices[b][idx[b]];
                visit(inst);
                std::size_t b = m;
                while (b > 0) {
                    --b;
                    if (++idx[b] < choices[b].size())
                        break;
                    idx[b] = 0;
                    if (b == 0) {
                        b = m + 1;
                        break;
                    }
                }
                if (b == m + 1 || m == 0)
                    break;
            }
        }
    }
}

std::vector<ConstraintInstance> enumerate_constraints(const RelayNetwork& net, int relay_cap)
{
    std::vector<ConstraintInstance> out;
    for_each_constraint(net, net.relays(), relay_cap, [&](const ConstraintInstance& c) { out.push_back(c); });
    return out;
}

ConstraintInstance evaluate_constraint(const RelayNetwork& net, const QuantizationProfile& q,
                                       ConstraintInstance instance)
{
    double log_q = 0.0;
    for (int s : instance.subset)
        log_q += std::log(q.at(s));
    const double lhs = 0.5 * (std::log(lambda_det(net, instance.subset, q)) - log_q);
    double rhs = 0.0;
    for (std::size_t m = 0; m < instance.blocks.size(); ++m)
        rhs += block_term_nats(net, instance.blocks[m], instance.routing[m]);
    instance.lhs = from_nats(lhs);
    instance.rhs = from_nats(rhs);
    return instance;
}

ConstraintSystem::ConstraintSystem(const RelayNetwork& net, std::vector<int> active_relays, ConstraintMode mode,
                                   int relay_cap)
    : net_(&net), active_(std::move(active_relays)), mode_(mode)
{
    check_cap(active_.size(), relay_cap);
    std::sort(active_.begin(), active_.end());
    const auto targets = routing_targets(net, active_);
    const unsigned full = 1u << active_.size();
    rhs_.assign(full, 0.0);
    binding_.assign(full, {});
    const bool want_min = mode_ == ConstraintMode::forall;

    for (unsigned mask = 1; mask < full; ++mask) {
        ConstraintInstance best;
        best.subset = subset_of(active_, mask);
        double best_rhs = want_min ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity();
        SetPartitionEnumerator parts(static_cast<int>(best.subset.size()), relay_cap);
        SetPartition p;
        while (parts.next(p)) {
            double total = 0.0;
            std::vector<std::vector<int>> blocks;
            std::vector<int> routing;
            for (const auto& block : p.blocks) {
                std::vector<int> nodes;
                for (int e : block)
                    nodes.push_back(best.subset[static_cast<std::size_t>(e)]);
                double ext = want_min ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
                int ext_r = 0;
                for (int r : candidates_for(targets, nodes)) {
                    const double v = block_term_nats(net, nodes, r);
                    if (want_min ? v < ext : v > ext) {
                        ext = v;
                        ext_r = r;
                    }
                }
                total += ext;
                blocks.push_back(std::move(nodes));
                routing.push_back(ext_r);
            }
            if (want_min ? total < best_rhs : total > best_rhs) {
                best_rhs = total;
                best.blocks = std::move(blocks);
                best.routing = std::move(routing);
            }
        }
        rhs_[mask] = best_rhs;
        binding_[mask] = std::move(best);
    }
}

double ConstraintSystem::lhs_nats(unsigned mask, const QuantizationProfile& q) const
{
    return lhs_nats_for(*net_, binding_[mask].subset, q);
}

bool ConstraintSystem::feasible(const QuantizationProfile& q) const
{
    for (unsigned mask = 1; mask < rhs_.size(); ++mask)
        if (lhs_nats(mask, q) > rhs_[mask])
            return false;
    return true;
}

bool ConstraintSystem::feasible_involving(int node, const QuantizationProfile& q) const
{
    const auto it = std::find(active_.begin(), active_.end(), node);
    if (it == active_.end())
        return true;
    const unsigned bit = 1u << static_cast<unsigned>(it - active_.begin());
    for (unsigned mask = 1; mask < rhs_.size(); ++mask)
        if ((mask & bit) && lhs_nats(mask, q) > rhs_[mask])
            return false;
    return true;
}

ConstraintReport ConstraintSystem::report(const QuantizationProfile& q) const
{
    ConstraintReport rep;
    rep.mode = mode_;
    rep.subsets = rhs_.size() - 1;
    double worst = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < rhs_.size(); ++mask) {
        const double lhs = lhs_nats(mask, q);
        const double slack = rhs_[mask] - lhs;
        if (slack < 0.0)
            rep.pass = false;
        if (slack < worst) {
            worst = slack;
            ConstraintInstance inst = binding_[mask];
            inst.lhs = from_nats(lhs);
            inst.rhs = from_nats(rhs_[mask]);
            rep.tightest = std::move(inst);
        }
    }
    rep.slack = rep.tightest ? rep.tightest->slack() : 0.0;
    return rep;
}

ConstraintReport cf_constraints_check(const RelayNetwork& net, const QuantizationProfile& q,
                                      ConstraintOptions options)
{
    check_profile(net, q);
    std::vector<int> active;
    for (int k : net.relays())
        if (!q.silenced(k))
            active.push_back(k);
    return ConstraintSystem(net, active, options.mode, options.relay_cap).report(q);
}

namespace {

struct Tightening {
    bool converged = true;
    int sweeps = 0;
};

/// Smallest feasible value of one coordinate given the others, searched on
/// [0, hi] where hi is known to be feasible.
double min_feasible_coordinate(const ConstraintSystem& sys, QuantizationProfile& q, int node, double hi,
                               double tol)
{
    const double saved = q.at(node);
    auto pred = [&](double x) {
        if (!(x > 0.0))
            return false;
        q.set(node, x);
        return sys.feasible_involving(node, q);
    };
    const double best = bisect_min_feasible(pred, 0.0, hi, {0.0, tol});
    q.set(node, saved);
    return best;
}

Tightening tighten(const ConstraintSystem& sys, QuantizationProfile& q, const CfOptimizeOptions& opt)
{
    Tightening out;
    out.converged = false;
    for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
        out.sweeps = sweep;
        double max_change = 0.0;
        for (int k : sys.active_relays()) {
            const double old = q.at(k);
            const double now = min_feasible_coordinate(sys, q, k, old, opt.tolerance);
            q.set(k, now);
            max_change = std::max(max_change, (old - now) / old);
        }
        if (max_change <= opt.tolerance) {
            out.converged = true;
            break;
        }
    }
    return out;
}

double rate_of(const RelayNetwork& net, const QuantizationProfile& q)
{
    return cf_rate_given_q(net, q);
}

bool better(double rate_a, const QuantizationProfile& a, double rate_b, const QuantizationProfile& b)
{
    const double eps = 1e-15 * std::max(1.0, std::abs(rate_b));
    if (rate_a > rate_b + eps)
        return true;
    if (rate_a < rate_b - eps)
        return false;
    return a.values() < b.values();
}

/// Moves along the feasible frontier: lower Q_i by a factor, raise Q_j to
/// restore feasibility, re-tighten, keep the move if the rate improves.
Tightening frontier_search(const RelayNetwork& net, const ConstraintSystem& sys, QuantizationProfile& q,
                           const CfOptimizeOptions& opt)
{
    Tightening status;
    const auto& active = sys.active_relays();
    if (active.size() < 2)
        return status;
    double current = rate_of(net, q);
    for (double step = 2.0; step > 1e-7; step *= 0.5) {
        bool improved = true;
        for (int round = 0; improved && round < 1000; ++round) {
            improved = false;
            for (int i : active) {
                for (int j : active) {
                    if (i == j)
                        continue;
                    QuantizationProfile cand = q;
                    cand.set(i, q.at(i) * std::exp(-step));
                    double hi = cand.at(j);
                    while (!sys.feasible(cand) && hi < kLargestStart) {
                        hi *= 4.0;
                        cand.set(j, hi);
                    }
                    if (!sys.feasible(cand))
                        continue;
                    cand.set(j, min_feasible_coordinate(sys, cand, j, hi, opt.tolerance));
                    const Tightening t = tighten(sys, cand, opt);
                    const double r = rate_of(net, cand);
                    if (r > current + 1e-15 * std::max(1.0, current)) {
                        q = std::move(cand);
                        current = r;
                        improved = true;
                        status.converged = status.converged && t.converged;
                    }
                }
            }
        }
    }
    return status;
}

} // namespace

RateResult optimize_cf_q(const RelayNetwork& net, CfOptimizeOptions options)
{
    if (!(options.tolerance > 0.0) || options.max_sweeps < 1)
        throw UsageError("optimize_cf_q needs a positive tolerance and at least one sweep");
    const int t = net.node_count();

    // Silence relays whose singleton constraints no finite Q can satisfy.
    std::vector<int> active = net.relays();
    check_cap(active.size(), options.relay_cap);
    while (true) {
        ConstraintSystem probe(net, active, options.mode, options.relay_cap);
        std::vector<int> keep;
        for (std::size_t k = 0; k < active.size(); ++k)
            if (probe.rhs_nats(1u << k) > 0.0)
                keep.push_back(active[k]);
        if (keep.size() == active.size())
            break;
        active = std::move(keep);
    }
    const ConstraintSystem sys(net, active, options.mode, options.relay_cap);

    QuantizationProfile q = QuantizationProfile::uniform(t, std::numeric_limits<double>::infinity());
    double max_noise = 0.0;
    for (int j = 2; j <= t; ++j)
        max_noise = std::max(max_noise, net.noise(j));
    double start = 1e6 * max_noise;
    auto fill = [&](double value) {
        for (int k : active)
            q.set(k, value);
    };
    fill(start);
    while (!sys.feasible(q)) {
        start *= 1e3;
        if (start > kLargestStart)
            throw InfeasibleError("optimize_cf_q: no feasible starting profile (internal error)");
        fill(start);
    }

    RateResult result;
    result.strategy = Strategy::compress_forward_t2;

    // Start A: all coordinates large, then tighten one at a time.
    QuantizationProfile qa = q;
    Tightening ta = tighten(sys, qa, options);
    const Tightening fa = frontier_search(net, sys, qa, options);
    QuantizationProfile best = qa;
    double best_rate = rate_of(net, qa);
    result.converged = ta.converged && fa.converged;
    result.sweeps = ta.sweeps;

    // Start B: smallest feasible uniform profile, then tighten.
    if (active.size() > 1) {
        QuantizationProfile qb = q;
        const double scale = bisect_min_feasible(
            [&](double x) {
                if (!(x > 0.0))
                    return false;
                QuantizationProfile trial = q;
                for (int k : active)
                    trial.set(k, x);
                return sys.feasible(trial);
            },
            0.0, start, {0.0, options.tolerance});
        for (int k : active)
            qb.set(k, scale);
        const Tightening tb = tighten(sys, qb, options);
        const Tightening fb = frontier_search(net, sys, qb, options);
        const double rate_b = rate_of(net, qb);
        if (better(rate_b, qb, best_rate, best)) {
            best = qb;
            best_rate = rate_b;
            result.converged = tb.converged && fb.converged;
            result.sweeps = tb.sweeps;
        }
    }

    result.rate = cf_rate_given_q(net, best);
    const ConstraintReport rep = sys.report(best);
    result.binding = rep.tightest ? rep.tightest->label() : "none";
    result.quantization = std::move(best);
    return result;
}

} // namespace relaynet
