/**
 * @file montecarlo.hpp
 * @brief Batch trajectory runner and mutual-information estimates.
 *
 * Each trajectory owns two RNG streams, one for drawing its source symbol
 * and one for the detector noise. Both seeds are pure functions of
 * (master seed, trajectory index, purpose), so results do not depend on the
 * number of workers or on scheduling.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homodyne/ensemble.hpp"
#include "homodyne/policy.hpp"
#include "homodyne/trajectory.hpp"

namespace homodyne {

enum class StreamPurpose : std::uint64_t { noise = 0, symbol = 1 };

/// SplitMix64 finalizer; a bijection on 64-bit words.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/**
 * Seed of one per-trajectory stream:
 * splitmix64(splitmix64(master) + 2 * index + purpose).
 *
 * For a fixed master seed the map (index, purpose) -> seed is injective for
 * index < 2^63, since both the inner sum and splitmix64 are.
 */
[[nodiscard]] std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                               std::uint64_t trajectory_index,
                                               StreamPurpose purpose) noexcept;

struct BatchOptions {
    std::size_t workers = 1;
    /// Share noise streams across policies. Symbol streams are always shared.
    bool common_random_numbers = false;
};

/// Master seed of the noise streams for one policy (salted unless CRN is on).
[[nodiscard]] std::uint64_t noise_master_seed(std::uint64_t master_seed, PolicyKind kind,
                                              bool common_random_numbers) noexcept;

/// Index into `priors` selected by the uniform variate drawn from `rng`.
[[nodiscard]] std::size_t draw_symbol(std::span<const double> priors, Rng &rng);

struct BatchStatistics {
    std::size_t n_trajectories = 0;
    double mean_gain = 0.0;
    /// Sample standard deviation (n - 1 denominator); empty for n < 2.
    std::optional<double> std_gain;
    /// 2 * std_gain / sqrt(n); empty for n < 2.
    std::optional<double> ci_half_width;
    std::vector<std::size_t> per_symbol_counts;
    /// Mean gain of trajectories started in each symbol; empty when never drawn.
    std::vector<std::optional<double>> per_symbol_means;

    SimConfig config;
    PolicySpec policy;
    std::string ensemble_label;
    BatchOptions options;
};

/// Calls fn(i) for i in [0, n) on up to `workers` threads; rethrows the first worker exception.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)> &fn);

/// Mean, spread and per-symbol breakdown of n >= 1 trajectories (throws for n = 0).
[[nodiscard]] BatchStatistics run_batch(const Ensemble &ensemble, const PolicySpec &policy,
                                        const SimConfig &cfg, std::size_t n_trajectories,
                                        const BatchOptions &options = {});

/// Statistical sanity checks on a finished batch; returns one message per violation.
[[nodiscard]] std::vector<std::string> check_batch_invariants(const BatchStatistics &stats,
                                                              const Ensemble &ensemble);

struct PolicyComparison {
    std::string ensemble_label;
    double mean_photons = 0.0;
    double heterodyne_limit = 0.0; ///< log2(1 + <n>)
    double holevo = 0.0;
    BatchStatistics heterodyne;
    BatchStatistics wiseman;
    BatchStatistics lmmi;
};

/// Heterodyne, Wiseman and LMMI batches on one ensemble plus the reference rows.
[[nodiscard]] PolicyComparison compare_policies(const Ensemble &ensemble, const SimConfig &cfg,
                                                std::size_t n_trajectories,
                                                const BatchOptions &options = {},
                                                std::size_t fock_nmax = 100);

} // namespace homodyne
