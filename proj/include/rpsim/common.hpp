#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rpsim {

// All durations are microseconds, all probabilities dimensionless.
using usec = double;
using prob = double;

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : SimError {
    using SimError::SimError;
};

struct BudgetExceeded : ConfigError {
    using ConfigError::ConfigError;
};

struct SegmentCapExceeded : ConfigError {
    using ConfigError::ConfigError;
};

struct TooManySegments : ConfigError {
    using ConfigError::ConfigError;
};

struct InsufficientDataTiles : ConfigError {
    using ConfigError::ConfigError;
};

struct CalibrationError : SimError {
    using SimError::SimError;
};

struct UnknownOpError : SimError {
    using SimError::SimError;
};

struct CircuitError : SimError {
    using SimError::SimError;
};

struct ScheduleError : SimError {
    using SimError::SimError;
};

struct NoFeasibleConfig : SimError {
    using SimError::SimError;
};

struct IoError : SimError {
    using SimError::SimError;
};

} // namespace rpsim
