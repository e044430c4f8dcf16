#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "expcost/cost_model.hpp"
#include "expcost/syntax.hpp"

namespace expcost {

struct TraceResult {
    enum class Kind { Finished, Timeout, Stuck } kind = Kind::Timeout;
    std::optional<Value> value;  // Finished
    double cost = 0.0;           // total on Finished, partial otherwise
    std::uint64_t steps = 0;
    std::string stuck_reason;
};

// Deterministic counter-based stream: rand N outcomes drawn uniformly via
// unbiased rejection.
class RngStream {
public:
    explicit RngStream(std::uint64_t s0, std::uint64_t s1) : s0_(s0), s1_(s1) {}
    std::uint64_t next_u64();
    // uniform draw from {0..n}
    std::uint64_t uniform(std::uint64_t n);

private:
    std::uint64_t s0_;
    std::uint64_t s1_;
};

// Per-trial substream derived by hashing (seed, trial); trials are
// independent of execution order.
RngStream trial_stream(std::uint64_t seed, std::uint64_t trial);

// Follows one trace of the semantics, accumulating cost(e) at each step.
TraceResult sample_trace(const Config& rho, const CostModel& m, RngStream& rng,
                         std::uint64_t step_limit);

struct Estimate {
    std::uint64_t trials = 0;
    double mean = 0.0;
    double variance = 0.0;
    double ci95_halfwidth = 0.0;
    std::uint64_t timeouts = 0;
    std::uint64_t stuck = 0;
    std::uint64_t seed = 0;
};

// Independent trials on per-trial substreams; bit-for-bit reproducible given
// (seed, trials, step_limit). Timeout and stuck traces are excluded from the
// mean and counted separately.
Estimate estimate(const Config& rho, const CostModel& m, std::uint64_t trials, std::uint64_t seed,
                  std::uint64_t step_limit);

}  // namespace expcost
