#ifndef SQZAMP_ORACLE_HPP
#define SQZAMP_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "sqzamp/chain.hpp"

namespace sqzamp {

struct OracleConfig {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 0;
    PhaseNoiseMode phase_noise_mode = PhaseNoiseMode::deterministic;
    std::uint64_t batch_size = 65536;
};

struct OracleEstimate {
    double v_minus_hat = 0.0;
    double v_plus_hat = 0.0;
    double stderr_minus = 0.0;
    double stderr_plus = 0.0;
    std::uint64_t n_used = 0;
};

// Counter-based random stream: every draw is a pure function of
// (seed, port id, sample index, draw index), so batching and parallel
// evaluation cannot change the result.
namespace rng {

std::uint64_t mix64(std::uint64_t z);
std::uint64_t stream_word(std::uint64_t seed, std::uint32_t port,
                          std::uint64_t sample, std::uint32_t draw);
double uniform01(std::uint64_t seed, std::uint32_t port, std::uint64_t sample,
                 std::uint32_t draw);
// Standard normal via Box-Muller on draws (2*pair, 2*pair+1).
double standard_normal(std::uint64_t seed, std::uint32_t port,
                       std::uint64_t sample, std::uint32_t pair);

}  // namespace rng

// Monte Carlo estimate of the detected variances: per sample, standard-normal
// quadrature pairs are drawn at every vacuum port (and phase-noise angles when
// the mode is gaussian_rms) and pushed through the transfer chain.
// The config's phase_noise_mode overrides the setup's.
OracleEstimate estimate_variance(const ChainSetup& setup,
                                 const OracleConfig& cfg);

// Estimates at each checkpoint taken from a single sample stream.
std::vector<OracleEstimate> convergence_report(
    const ChainSetup& setup, const OracleConfig& cfg,
    const std::vector<std::uint64_t>& checkpoints);

}  // namespace sqzamp

#endif  // SQZAMP_ORACLE_HPP
