#pragma once

#include <stdexcept>
#include <string>

namespace ranwire {

// Malformed input files (architecture files, datasets, checkpoints).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// A request that exceeds an enumeration/sampling capacity limit.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Dataset generation could not satisfy its constraints (e.g. connectivity).
class GenerationError : public std::runtime_error {
public:
    explicit GenerationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Normalization requested for an all-zero distribution.
class DegenerateDistributionError : public std::runtime_error {
public:
    explicit DegenerateDistributionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Training aborted on a non-finite loss.
class TrainAbortError : public std::runtime_error {
public:
    TrainAbortError(const std::string& msg, int epoch, double lr, int batch_id)
        : std::runtime_error(msg), epoch(epoch), lr(lr), batch_id(batch_id) {}
    int epoch;
    double lr;
    int batch_id;
};

}  // namespace ranwire
