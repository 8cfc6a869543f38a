#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "coopnorm/value.hpp"

namespace coopnorm {

enum class SimRegime { Cooperate, Deviate, Autarky };

const char* to_string(SimRegime r);

struct SimConfig {
    /// Periods simulated per replication; 0 derives it from truncation_tolerance.
    std::size_t horizon = 0;
    double truncation_tolerance = 1e-4;
    std::size_t replications = 20000;
    std::uint64_t seed = 12345;
    unsigned workers = 1;
};

struct SimEstimate {
    double mean = 0.0;
    double std_error = 0.0;  ///< sample standard deviation / sqrt(R)
    double truncation_bound = 0.0;
    std::size_t horizon = 0;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of one replication, a function of its coordinates only.
std::uint64_t replication_seed(std::uint64_t base, std::uint64_t replication, SimRegime regime, std::size_t type);

/// Smallest T with delta^T * u_range / (1 - delta) <= tolerance (1 when delta = 0).
std::size_t horizon_for_tolerance(double delta, double u_range, double tolerance);

/// Position path of one player, path[0] = start, length `horizon`.
std::vector<std::size_t> simulate_positions(std::size_t n, double m, std::size_t start, std::size_t horizon,
                                            std::uint64_t seed);

/// Largest n accepted by simulate_states.
inline constexpr std::size_t kMaxSimStatePlayers = 4;

/// Path over ranking-state indices (see ranking_states), length `horizon`.
std::vector<std::size_t> simulate_states(std::size_t n, double m, std::size_t start_state, std::size_t horizon,
                                         std::uint64_t seed);

/**
 * Monte Carlo estimate of a type's discounted utility under one regime.
 *
 * Cooperate: everyone follows the norm in every period. Deviate: the type
 * contributes nothing in period 0 while the others follow the norm, then all
 * contribute nothing forever. Autarky: nobody ever contributes. Each
 * replication follows an independent position path that starts at the type's
 * position and is truncated after the horizon.
 */
SimEstimate estimate_value(SimRegime regime, const Scenario& s, std::size_t type, const SimConfig& cfg);

}  // namespace coopnorm
