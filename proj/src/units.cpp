#include "relaynet/units.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

namespace relaynet {

namespace {
std::atomic<LogBase> g_log_base{LogBase::two};
}

LogBase log_base() noexcept { return g_log_base.load(std::memory_order_relaxed); }

void set_log_base(LogBase base) noexcept { g_log_base.store(base, std::memory_order_relaxed); }

ScopedLogBase::ScopedLogBase(LogBase base) noexcept : previous_(log_base()) { set_log_base(base); }

ScopedLogBase::~ScopedLogBase() { set_log_base(previous_); }

double from_nats(double nats) noexcept
{
    return log_base() == LogBase::two ? nats / std::numbers::ln2 : nats;
}

double from_bits(double bits) noexcept
{
    return log_base() == LogBase::two ? bits : bits * std::numbers::ln2;
}

const char* unit_name(LogBase base) noexcept
{
    return base == LogBase::two ? "bits/use" : "nats/use";
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

} // namespace relaynet
