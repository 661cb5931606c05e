#include "relaynet/experiments.hpp"

#include "relaynet/errors.hpp"
#include "relaynet/gaussian_info.hpp"
#include "relaynet/opt_core.hpp"
#include "relaynet/units.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <thread>

namespace relaynet {

const char* to_string(SweepVariable v) noexcept
{
    switch (v) {
    case SweepVariable::d12: return "d12";
    case SweepVariable::d23: return "d23";
    case SweepVariable::p2: return "P2";
    }
    return "?";
}

SweepVariable sweep_variable_from_string(const std::string& name)
{
    if (name == "d12")
        return SweepVariable::d12;
    if (name == "d23")
        return SweepVariable::d23;
    if (name == "P2" || name == "p2")
        return SweepVariable::p2;
    throw ValidationError("unknown swept variable '" + name + "' (expected d12, d23 or P2)");
}

std::vector<double> linear_grid(double lo, double hi, int points)
{
    if (points < 1 || !std::isfinite(lo) || !std::isfinite(hi) || (points > 1 && !(hi > lo)))
        throw ValidationError("linear grid needs lo < hi and at least one point");
    if (points == 1)
        return {lo};
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k)
        g[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (points - 1);
    g.back() = hi;
    return g;
}

std::vector<double> log_grid(double lo, double hi, int points)
{
    if (!(lo > 0.0))
        throw ValidationError("log grid needs a positive lower end");
    auto g = linear_grid(std::log10(lo), std::log10(hi), points);
    for (auto& v : g)
        v = std::pow(10.0, v);
    g.front() = lo;
    if (points > 1)
        g.back() = hi;
    return g;
}

RateResult evaluate_strategy(const RelayNetwork& net, Strategy s, ConstraintMode mode, int relay_cap)
{
    switch (s) {
    case Strategy::cut_set: return cutset_single_relay(net);
    case Strategy::decode_forward: return df_single_relay(net);
    case Strategy::compress_forward: return cf_single_relay(net);
    case Strategy::compress_forward_t2: {
        CfOptimizeOptions opt;
        opt.mode = mode;
        opt.relay_cap = relay_cap;
        return optimize_cf_q(net, opt);
    }
    case Strategy::multihop: return multihop_tdma(net);
    case Strategy::broadcast_cut: return broadcast_cut(net);
    }
    throw UsageError("unhandled strategy");
}

void SweepSpec::validate() const
{
    if (grid.empty())
        throw ValidationError("sweep grid is empty");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!std::isfinite(grid[k]))
            throw ValidationError("sweep grid value " + format_number(grid[k]) + " is not finite");
        if (k > 0 && !(grid[k] > grid[k - 1]))
            throw ValidationError("sweep grid must be strictly increasing (at index " + std::to_string(k) + ")");
    }
    if (strategies.empty())
        throw ValidationError("sweep has no strategies");
    if (base) {
        if (variable != SweepVariable::p2)
            throw ValidationError("a sweep over an explicit network can only vary P2");
        if (base->node_count() != 3)
            throw ValidationError("sweeps need a single relay network (T = 3)");
    } else {
        model.validate();
        if (!(d13 > 0.0) || !std::isfinite(d13))
            throw ValidationError("d13 must be positive and finite");
        if (variable == SweepVariable::p2 && (relay_position < 0.0 || relay_position > d13))
            throw ValidationError("relay position must lie in [0, d13]");
    }
    const bool divergent = !base && model.kind != PathLossKind::mpl;
    for (double v : grid) {
        switch (variable) {
        case SweepVariable::p2:
            if (!(v > 0.0))
                throw ValidationError("swept P2 values must be positive");
            break;
        case SweepVariable::d12:
        case SweepVariable::d23:
            if (v < 0.0 || v > d13)
                throw ValidationError(std::string("swept ") + to_string(variable) + " = " + format_number(v) +
                                      " lies outside [0, d13]");
            if (divergent && (v == 0.0 || v == d13))
                throw ValidationError("zero distance under a divergent path loss model");
            break;
        }
    }
    network_at(grid.front());
}

RelayNetwork SweepSpec::network_at(double value) const
{
    if (base)
        return base->with_power(2, value);
    double d12 = relay_position;
    double power2 = p2;
    switch (variable) {
    case SweepVariable::p2: power2 = value; break;
    case SweepVariable::d12: d12 = value; break;
    case SweepVariable::d23: d12 = d13 - value; break;
    }
    return single_relay_line(p1, power2, n2, n3, d12, d13, model);
}

double normalized_gap(double rate, double reference) noexcept
{
    if (!(reference > 0.0))
        return 0.0;
    return std::clamp(1.0 - rate / reference, 0.0, 1.0);
}

namespace {

SweepRow evaluate_row(const SweepSpec& spec, double value)
{
    SweepRow row;
    row.swept = value;
    const RelayNetwork net = spec.network_at(value);
    row.cut_set = cutset_single_relay(net).rate;
    for (Strategy s : spec.strategies) {
        RateResult r = evaluate_strategy(net, s, spec.mode, spec.relay_cap);
        row.gaps.push_back(normalized_gap(r.rate, row.cut_set));
        row.rates.push_back(std::move(r));
    }
    return row;
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec)
{
    spec.validate();
    const std::size_t n = spec.grid.size();
    std::vector<SweepRow> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::size_t workers = spec.threads > 0 ? static_cast<std::size_t>(spec.threads)
                                           : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                rows[k] = evaluate_row(spec, spec.grid[k]);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return rows;
}

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v < 0 ? "-inf" : "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string short_name(Strategy s)
{
    std::string name = column_name(s);
    return name.substr(2);
}

} // namespace

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows)
{
    out << "# relaynet sweep, swept=" << to_string(spec.variable) << ", unit=" << unit_name(log_base())
        << ", mode=" << to_string(spec.mode) << '\n';
    if (spec.base) {
        out << "# explicit network, P1=" << format_number(spec.base->power(1)) << '\n';
    } else {
        out << "# model=" << to_string(spec.model.kind);
        if (spec.model.kind == PathLossKind::friis)
            out << " G=" << format_number(spec.model.antenna_gain) << " f=" << format_number(spec.model.frequency);
        else
            out << " kappa=" << format_number(spec.model.kappa) << " eta=" << format_number(spec.model.eta);
        out << " P1=" << format_number(spec.p1) << " P2=" << format_number(spec.p2)
            << " N2=" << format_number(spec.n2) << " N3=" << format_number(spec.n3)
            << " d13=" << format_number(spec.d13) << " relay=" << format_number(spec.relay_position) << '\n';
    }
    out << "swept";
    for (Strategy s : spec.strategies)
        out << ',' << column_name(s);
    for (Strategy s : spec.strategies)
        if (s != Strategy::cut_set)
            out << ",gap_" << short_name(s);
    for (Strategy s : spec.strategies)
        if (s != Strategy::cut_set)
            out << ",log10_gap_" << short_name(s);
    out << '\n';
    for (const auto& row : rows) {
        out << format_number(row.swept);
        for (const auto& r : row.rates)
            out << ',' << format_number(r.rate);
        for (std::size_t k = 0; k < row.rates.size(); ++k)
            if (spec.strategies[k] != Strategy::cut_set)
                out << ',' << format_number(row.gaps[k]);
        for (std::size_t k = 0; k < row.rates.size(); ++k)
            if (spec.strategies[k] != Strategy::cut_set)
                out << ',' << format_number(std::log10(row.gaps[k]));
        out << '\n';
    }
}

std::vector<std::string> write_gnuplot(const std::string& prefix, const SweepSpec& spec,
                                       const std::vector<SweepRow>& rows)
{
    std::vector<std::string> paths;
    for (std::size_t k = 0; k < spec.strategies.size(); ++k) {
        const std::string path = prefix + "_" + to_string(spec.strategies[k]) + ".dat";
        std::ofstream f(path);
        if (!f)
            throw ValidationError("cannot write " + path);
        f << "# " << to_string(spec.variable) << " gap_" << short_name(spec.strategies[k]) << '\n';
        for (const auto& row : rows)
            f << format_number(row.swept) << ' ' << format_number(row.gaps[k]) << '\n';
        paths.push_back(path);
    }
    return paths;
}

// ---------------------------------------------------------------------------
// Asymptotic probes

const char* to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::approaches: return "approaches";
    case Verdict::bounded_away: return "bounded_away";
    case Verdict::unknown: return "unknown";
    }
    return "?";
}

const char* to_string(Claim c) noexcept
{
    switch (c) {
    case Claim::approaches: return "approaches";
    case Claim::bounded_away: return "bounded_away";
    case Claim::not_approaching: return "not_approaching";
    case Claim::none: return "none";
    }
    return "?";
}

Verdict classify(const std::vector<double>& gaps, const ProbeThresholds& t)
{
    if (gaps.empty())
        return Verdict::unknown;
    const double last = gaps.back();
    if (last > t.floor)
        return Verdict::bounded_away;
    if (last >= t.approach)
        return Verdict::unknown;
    // Gaps at rounding level count as already converged.
    const double zero = 1e-9 * t.approach;
    const std::size_t tail = static_cast<std::size_t>(std::max(t.monotone_tail, 1));
    if (gaps.size() < tail)
        return Verdict::unknown;
    for (std::size_t k = gaps.size() - tail + 1; k < gaps.size(); ++k)
        if (!(gaps[k] < gaps[k - 1] || gaps[k] <= zero))
            return Verdict::unknown;
    return Verdict::approaches;
}

bool claim_matches(Claim expected, Verdict got) noexcept
{
    switch (expected) {
    case Claim::approaches: return got == Verdict::approaches;
    case Claim::bounded_away: return got == Verdict::bounded_away;
    case Claim::not_approaching: return got != Verdict::approaches;
    case Claim::none: return true;
    }
    return false;
}

const std::vector<std::string>& probe_case_ids()
{
    static const std::vector<std::string> ids{"1a", "1b", "1c", "2", "3", "4", "5", "6", "7", "8"};
    return ids;
}

namespace {

const std::vector<double> kDistances{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
const std::vector<double> kPowers{1e1, 1e2, 1e3, 1e4, 1e5, 1e6};

struct Leg {
    Strategy strategy;
    Claim claim;
    std::string direction;
    std::vector<double> probe;
    std::function<RelayNetwork(double)> at;
};

class Prober {
public:
    Prober(std::string id, const ProbeSettings& s) : id_(std::move(id)), s_(s) {}

    RelayNetwork line(PathLossKind kind, double d12, double p2) const
    {
        const PathLossModel m = kind == PathLossKind::mpl ? PathLossModel::mpl(s_.kappa, s_.eta)
                                                          : PathLossModel::spl(s_.kappa, s_.eta);
        return single_relay_line(s_.p1, p2, s_.noise, s_.noise, d12, s_.d13, m);
    }

    double g12(double d12) const { return s_.kappa * std::pow(d12, -s_.eta); }

    AsymptoticVerdict run(PathLossKind kind, const Leg& leg) const
    {
        AsymptoticVerdict v;
        v.case_id = id_;
        v.model = kind;
        v.strategy = leg.strategy;
        v.direction = leg.direction;
        v.probe = leg.probe;
        v.expected = leg.claim;
        for (double x : leg.probe) {
            const RelayNetwork net = leg.at(x);
            const double cs = cutset_single_relay(net).rate;
            v.gaps.push_back(normalized_gap(evaluate_strategy(net, leg.strategy).rate, cs));
        }
        v.verdict = classify(v.gaps, s_.thresholds);
        v.matches = claim_matches(v.expected, v.verdict);
        return v;
    }

    const ProbeSettings& settings() const { return s_; }

private:
    std::string id_;
    ProbeSettings s_;
};

std::string fmt(double v) { return format_number(v); }

/// Cases 1a-1c: d12 -> 0 with P2 tied to g12 through `couple`.
std::vector<Leg> coupled_legs(const Prober& pr, const std::string& tie, const std::function<double(double)>& couple,
                              Claim cf_coupled, bool cf_split)
{
    const double d0 = kDistances.front();
    const double frozen_p2 = couple(pr.g12(d0));
    auto spl = PathLossKind::spl;
    std::vector<Leg> legs;
    legs.push_back({Strategy::decode_forward, Claim::approaches, "d12->0 (P2=" + fmt(frozen_p2) + ")", kDistances,
                    [&pr, spl, frozen_p2](double d) { return pr.line(spl, d, frozen_p2); }});
    legs.push_back({Strategy::decode_forward, Claim::not_approaching, "P2->inf (d12=" + fmt(d0) + ")", kPowers,
                    [&pr, spl, d0](double p) { return pr.line(spl, d0, p); }});
    if (cf_split) {
        legs.push_back({Strategy::compress_forward, Claim::not_approaching, "d12->0 (P2=" + fmt(frozen_p2) + ")",
                        kDistances, [&pr, spl, frozen_p2](double d) { return pr.line(spl, d, frozen_p2); }});
        legs.push_back({Strategy::compress_forward, Claim::approaches, "P2->inf (d12=" + fmt(d0) + ")", kPowers,
                        [&pr, spl, d0](double p) { return pr.line(spl, d0, p); }});
    } else {
        legs.push_back({Strategy::compress_forward, cf_coupled, "d12->0 with " + tie, kDistances,
                        [&pr, spl, couple](double d) { return pr.line(spl, d, couple(pr.g12(d))); }});
    }
    return legs;
}

} // namespace

std::vector<AsymptoticVerdict> asymptotic_probe(const std::string& case_id, const ProbeSettings& settings)
{
    const auto& ids = probe_case_ids();
    if (std::find(ids.begin(), ids.end(), case_id) == ids.end())
        throw UsageError("unknown probe case '" + case_id + "' (expected 1a, 1b, 1c or 2..8)");

    const Prober pr(case_id, settings);
    const auto spl = PathLossKind::spl;
    const auto mpl = PathLossKind::mpl;
    const double k1 = 1.0;   // finite relay power
    const double k2 = 0.5;   // fixed relay position
    const double d13 = settings.d13;
    std::vector<AsymptoticVerdict> out;
    auto run_all = [&](PathLossKind kind, const std::vector<Leg>& legs) {
        for (const auto& leg : legs)
            out.push_back(pr.run(kind, leg));
    };

    if (case_id == "1a") {
        run_all(spl, coupled_legs(pr, "P2=g12^2", [](double g) { return g * g; }, Claim::approaches, false));
    } else if (case_id == "1b") {
        run_all(spl, coupled_legs(pr, "P2=g12", [](double g) { return g; }, Claim::none, false));
    } else if (case_id == "1c") {
        run_all(spl, coupled_legs(pr, "P2=sqrt(g12)", [](double g) { return std::sqrt(g); }, Claim::none, true));
    } else if (case_id == "2") {
        auto at = [&pr, spl, k2](double p) { return pr.line(spl, k2, p); };
        const std::string dir = "P2->inf (d12=" + fmt(k2) + ")";
        run_all(spl, {{Strategy::decode_forward, Claim::bounded_away, dir, kPowers, at},
                      {Strategy::compress_forward, Claim::approaches, dir, kPowers, at}});
    } else if (case_id == "3") {
        auto at = [&pr, spl, d13](double d23) { return pr.line(spl, d13 - d23, 1.0 / d23); };
        const std::string dir = "d23->0 with P2=1/d23";
        run_all(spl, {{Strategy::decode_forward, Claim::bounded_away, dir, kDistances, at},
                      {Strategy::compress_forward, Claim::approaches, dir, kDistances, at}});
    } else if (case_id == "4") {
        auto at = [&pr, spl, k1](double d) { return pr.line(spl, d, k1); };
        const std::string dir = "d12->0 (P2=" + fmt(k1) + ")";
        run_all(spl, {{Strategy::decode_forward, Claim::approaches, dir, kDistances, at},
                      {Strategy::compress_forward, Claim::bounded_away, dir, kDistances, at}});
    } else if (case_id == "5") {
        auto at = [&pr, spl, k1](double d) { return pr.line(spl, d, k1); };
        const std::string dir = "fixed (d12=" + fmt(k2) + ", P2=" + fmt(k1) + ")";
        run_all(spl, {{Strategy::decode_forward, Claim::bounded_away, dir, {k2}, at},
                      {Strategy::compress_forward, Claim::bounded_away, dir, {k2}, at}});
    } else if (case_id == "6") {
        auto at = [&pr, spl, k1, d13](double d23) { return pr.line(spl, d13 - d23, k1); };
        const std::string dir = "d23->0 (P2=" + fmt(k1) + ")";
        run_all(spl, {{Strategy::decode_forward, Claim::bounded_away, dir, kDistances, at},
                      {Strategy::compress_forward, Claim::approaches, dir, kDistances, at}});
    } else {
        const bool growing = case_id == "7";
        for (int k = 1; k <= 9; ++k) {
            const double d12 = 0.1 * k * d13;
            if (growing) {
                auto at = [&pr, mpl, d12](double p) { return pr.line(mpl, d12, p); };
                const std::string dir = "P2->inf (d12=" + fmt(d12) + ")";
                run_all(mpl, {{Strategy::decode_forward, Claim::bounded_away, dir, kPowers, at},
                              {Strategy::compress_forward, Claim::approaches, dir, kPowers, at}});
            } else {
                auto at = [&pr, mpl, k1](double d) { return pr.line(mpl, d, k1); };
                const std::string dir = "fixed (d12=" + fmt(d12) + ", P2=" + fmt(k1) + ")";
                run_all(mpl, {{Strategy::decode_forward, Claim::bounded_away, dir, {d12}, at},
                              {Strategy::compress_forward, Claim::bounded_away, dir, {d12}, at}});
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {
constexpr double kThresholdPerDecade = 20.0;
}

ThresholdResult power_threshold(const ThresholdSpec& spec, double d23, double target_fraction)
{
    if (!(target_fraction > 0.0 && target_fraction < 1.0))
        throw ValidationError("target fraction must lie in (0, 1)");
    spec.model.validate();
    if (!(d23 >= 0.0 && d23 <= spec.d13))
        throw ValidationError("d23 must lie in [0, d13]");
    if (!(spec.floor > 0.0 && spec.ceiling > spec.floor))
        throw ValidationError("threshold search needs 0 < floor < ceiling");

    auto fraction = [&](double p2) {
        const RelayNetwork net = single_relay_line(spec.p1, p2, spec.n2, spec.n3, spec.d13 - d23, spec.d13,
                                                   spec.model);
        const double cs = cutset_single_relay(net).rate;
        return cs > 0.0 ? cf_single_relay(net).rate / cs : 1.0;
    };
    const double lo = spec.floor * spec.p1;
    const double hi = spec.ceiling * spec.p1;
    const double top = fraction(hi);
    if (top < target_fraction) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "target fraction %.6g not reached below P2 = %.6g (achieved %.6g)", target_fraction, hi, top);
        throw InfeasibleError(buf);
    }
    // The ratio dips before it recovers (both rates collapse onto the direct
    // link as P2 -> 0), so look for the last point below target on a log grid
    // and bisect just above it.
    const int points = static_cast<int>(std::ceil(kThresholdPerDecade * std::log10(hi / lo))) + 1;
    const auto grid = log_grid(lo, hi, points);
    std::ptrdiff_t below = -1;
    for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(grid.size()) - 1; k >= 0; --k)
        if (fraction(grid[static_cast<std::size_t>(k)]) < target_fraction) {
            below = k;
            break;
        }
    ThresholdResult r;
    if (below < 0) {
        r.p2 = lo;
    } else {
        const auto k = static_cast<std::size_t>(below);
        r.p2 = bisect_min_feasible([&](double p2) { return fraction(p2) >= target_fraction; }, grid[k], grid[k + 1],
                                   {0.0, spec.relative_tolerance});
    }
    r.fraction = fraction(r.p2);
    return r;
}

} // namespace relaynet
