#pragma once

#include <stdexcept>
#include <string>

namespace pspso {

/// A caller broke a documented precondition (out-of-bounds position, wrong dimension, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Invalid algorithm, problem or experiment configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The evaluation budget of a landscape is spent. Optimizers treat this as termination.
class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

/// A metric was requested before any data was recorded.
class UndefinedMetric : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace pspso
