#pragma once

namespace relaynet {

/// Logarithm base used for every rate the library reports.
enum class LogBase { two, e };

/// Process-wide rate unit. Bits (base 2) by default.
LogBase log_base() noexcept;
void set_log_base(LogBase base) noexcept;

/// Restores the previous log base on destruction.
class ScopedLogBase {
public:
    explicit ScopedLogBase(LogBase base) noexcept;
    ~ScopedLogBase();
    ScopedLogBase(const ScopedLogBase&) = delete;
    ScopedLogBase& operator=(const ScopedLogBase&) = delete;

private:
    LogBase previous_;
};

/// Converts a quantity measured in nats into the current rate unit.
double from_nats(double nats) noexcept;

/// Converts a quantity measured in bits into the current rate unit.
double from_bits(double bits) noexcept;

const char* unit_name(LogBase base) noexcept;

double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

} // namespace relaynet
