#pragma once

#include "relaynet/cf_constraints.hpp"
#include "relaynet/channel_model.hpp"
#include "relaynet/strategy_rates.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace relaynet {

enum class SweepVariable { d12, d23, p2 };

const char* to_string(SweepVariable v) noexcept;
SweepVariable sweep_variable_from_string(const std::string& name);

std::vector<double> linear_grid(double lo, double hi, int points);
std::vector<double> log_grid(double lo, double hi, int points);

/// Evaluates one strategy on a network. cf_t2 and cinf accept any T, the
/// others need T = 3.
RateResult evaluate_strategy(const RelayNetwork& net, Strategy s,
                             ConstraintMode mode = ConstraintMode::forall,
                             int relay_cap = kDefaultPartitionCap);

/// Collinear single relay sweep: source at 0, relay at d12, destination at
/// d13. With `base` set, only P2 may be swept and the base gains are kept.
struct SweepSpec {
    PathLossModel model = PathLossModel::mpl();
    double p1 = 1.0;
    double p2 = 1.0;
    double n2 = 1.0;
    double n3 = 1.0;
    double d13 = 1.0;
    double relay_position = 0.5;
    SweepVariable variable = SweepVariable::p2;
    std::vector<double> grid;
    std::vector<Strategy> strategies{Strategy::cut_set, Strategy::decode_forward, Strategy::compress_forward,
                                     Strategy::compress_forward_t2, Strategy::multihop};
    ConstraintMode mode = ConstraintMode::forall;
    int relay_cap = kDefaultPartitionCap;
    /// 0 picks the hardware concurrency.
    int threads = 0;
    std::optional<RelayNetwork> base;

    /// Throws ValidationError.
    void validate() const;
    /// Network at one grid value.
    RelayNetwork network_at(double value) const;
};

struct SweepRow {
    double swept = 0.0;
    /// Aligned with SweepSpec::strategies.
    std::vector<RateResult> rates;
    /// 1 - R/R_CS clamped to [0, 1], aligned with rates.
    std::vector<double> gaps;
    double cut_set = 0.0;
};

/// 1 - rate/reference clamped to [0, 1]; 0 when the reference is not positive.
double normalized_gap(double rate, double reference) noexcept;

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// "%.12g", with -inf/inf/nan spelled out.
std::string format_number(double v);

/// Comment lines with the parameters, a header row, one row per point.
void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows);

/// One "<prefix>_<strategy>.dat" file per strategy: swept value and gap.
std::vector<std::string> write_gnuplot(const std::string& prefix, const SweepSpec& spec,
                                       const std::vector<SweepRow>& rows);

enum class Verdict { approaches, bounded_away, unknown };
/// What the verdict tables state for one entry. not_approaching covers
/// entries that only rule out convergence; none marks "Unknown" entries.
enum class Claim { approaches, bounded_away, not_approaching, none };

const char* to_string(Verdict v) noexcept;
const char* to_string(Claim c) noexcept;

struct ProbeThresholds {
    double approach = 1e-3;
    double floor = 1e-2;
    int monotone_tail = 3;
};

struct ProbeSettings {
    ProbeThresholds thresholds;
    double kappa = 1.0;
    double eta = 2.0;
    double p1 = 1.0;
    double noise = 1.0;
    double d13 = 1.0;
};

struct AsymptoticVerdict {
    std::string case_id;
    PathLossKind model = PathLossKind::spl;
    Strategy strategy = Strategy::decode_forward;
    /// Which limit is probed, e.g. "d12->0 (P2=100)".
    std::string direction;
    std::vector<double> probe;
    std::vector<double> gaps;
    Verdict verdict = Verdict::unknown;
    Claim expected = Claim::none;
    bool matches = true;
};

Verdict classify(const std::vector<double>& gaps, const ProbeThresholds& t);
bool claim_matches(Claim expected, Verdict got) noexcept;

/// Case ids 1a, 1b, 1c, 2..8.
const std::vector<std::string>& probe_case_ids();

/// Probes one case of the relay distance/power study. Throws UsageError for
/// unknown ids.
std::vector<AsymptoticVerdict> asymptotic_probe(const std::string& case_id, const ProbeSettings& settings = {});

/// Collinear single relay template for power_threshold.
struct ThresholdSpec {
    PathLossModel model = PathLossModel::mpl();
    double p1 = 1.0;
    double n2 = 1.0;
    double n3 = 1.0;
    double d13 = 1.0;
    /// Search range as multiples of P1.
    double floor = 1e-6;
    double ceiling = 1e6;
    double relative_tolerance = 1e-6;
};

struct ThresholdResult {
    double p2 = 0.0;
    double fraction = 0.0;
};

/// Smallest P2 from which on R_CF/R_CS stays >= target: the last point below
/// target on a 20-per-decade log grid over [floor, ceiling] * P1 is located,
/// then refined by bisection. Throws InfeasibleError with the achieved
/// fraction when the ceiling is not enough.
ThresholdResult power_threshold(const ThresholdSpec& spec, double d23, double target_fraction);

} // namespace relaynet
