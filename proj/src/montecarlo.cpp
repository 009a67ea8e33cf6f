#include "homodyne/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "homodyne/information.hpp"

namespace homodyne {

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t trajectory_index,
                                 StreamPurpose purpose) noexcept {
    const std::uint64_t base = splitmix64(master_seed);
    return splitmix64(base + 2 * trajectory_index + static_cast<std::uint64_t>(purpose));
}

std::uint64_t noise_master_seed(std::uint64_t master_seed, PolicyKind kind,
                                bool common_random_numbers) noexcept {
    if (common_random_numbers) {
        return master_seed;
    }
    return splitmix64(master_seed ^ (0xa076'1d64'78bd'642fULL * (static_cast<std::uint64_t>(kind) + 1)));
}

std::size_t draw_symbol(std::span<const double> priors, Rng &rng) {
    // 53 random mantissa bits; portable across standard libraries.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double cumulative = 0.0;
    for (std::size_t k = 0; k < priors.size(); ++k) {
        cumulative += priors[k];
        if (u < cumulative) {
            return k;
        }
    }
    // u landed in the rounding gap above the last partial sum.
    for (std::size_t k = priors.size(); k-- > 0;) {
        if (priors[k] > 0.0) {
            return k;
        }
    }
    return priors.size() - 1;
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)> &fn) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= n || failed.load(std::memory_order_relaxed)) {
                        return;
                    }
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) {
                            error = std::current_exception();
                        }
                        failed = true;
                    }
                }
            });
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

BatchStatistics run_batch(const Ensemble &ensemble, const PolicySpec &policy,
                          const SimConfig &cfg, std::size_t n_trajectories,
                          const BatchOptions &options) {
    if (n_trajectories == 0) {
        throw std::invalid_argument("run_batch: need at least one trajectory");
    }
    cfg.validate();
    policy.validate();

    const std::uint64_t noise_master =
        noise_master_seed(cfg.seed, policy.kind, options.common_random_numbers);
    SimConfig traj_cfg = cfg;
    traj_cfg.log_record = false;

    std::vector<double> gains(n_trajectories);
    std::vector<std::size_t> symbols(n_trajectories);
    parallel_for(n_trajectories, options.workers, [&](std::size_t i) {
        Rng symbol_rng(derive_stream_seed(cfg.seed, i, StreamPurpose::symbol));
        const std::size_t k = draw_symbol(ensemble.priors(), symbol_rng);
        Rng noise_rng(derive_stream_seed(noise_master, i, StreamPurpose::noise));
        const auto result = run_trajectory(ensemble, k, policy, traj_cfg, noise_rng);
        gains[i] = result.total_gain;
        symbols[i] = k;
    });

    BatchStatistics stats;
    stats.n_trajectories = n_trajectories;
    stats.config = cfg;
    stats.policy = policy;
    stats.ensemble_label = ensemble.label();
    stats.options = options;

    // Index-ordered reduction keeps the result independent of the worker count.
    const double n = static_cast<double>(n_trajectories);
    stats.mean_gain = std::accumulate(gains.begin(), gains.end(), 0.0) / n;
    if (n_trajectories >= 2) {
        double ss = 0.0;
        for (double g : gains) {
            ss += (g - stats.mean_gain) * (g - stats.mean_gain);
        }
        const double sd = std::sqrt(ss / (n - 1.0));
        stats.std_gain = sd;
        stats.ci_half_width = 2.0 * sd / std::sqrt(n);
    }

    stats.per_symbol_counts.assign(ensemble.size(), 0);
    std::vector<double> sums(ensemble.size(), 0.0);
    for (std::size_t i = 0; i < n_trajectories; ++i) {
        ++stats.per_symbol_counts[symbols[i]];
        sums[symbols[i]] += gains[i];
    }
    stats.per_symbol_means.resize(ensemble.size());
    for (std::size_t k = 0; k < ensemble.size(); ++k) {
        if (stats.per_symbol_counts[k] > 0) {
            stats.per_symbol_means[k] = sums[k] / static_cast<double>(stats.per_symbol_counts[k]);
        }
    }
    return stats;
}

std::vector<std::string> check_batch_invariants(const BatchStatistics &stats,
                                                const Ensemble &ensemble) {
    std::vector<std::string> violations;
    auto fail = [&](const std::string &msg) { violations.push_back(msg); };

    if (!std::isfinite(stats.mean_gain)) {
        fail("mean gain is not finite");
        return violations;
    }
    if (stats.std_gain && stats.ci_half_width) {
        const double expected = 2.0 * *stats.std_gain /
                                std::sqrt(static_cast<double>(stats.n_trajectories));
        if (*stats.ci_half_width != expected) {
            fail("confidence half-width differs from 2*std/sqrt(n)");
        }
    }
    const double se = stats.std_gain
                          ? *stats.std_gain / std::sqrt(static_cast<double>(stats.n_trajectories))
                          : 0.0;
    const double entropy = shannon_entropy(ensemble.priors());
    if (stats.mean_gain < -5.0 * se - 1e-9) {
        std::ostringstream os;
        os << "mean gain " << stats.mean_gain << " is significantly negative";
        fail(os.str());
    }
    if (stats.mean_gain > entropy + 5.0 * se + 1e-9) {
        std::ostringstream os;
        os << "mean gain " << stats.mean_gain << " exceeds the source entropy " << entropy;
        fail(os.str());
    }
    return violations;
}

PolicyComparison compare_policies(const Ensemble &ensemble, const SimConfig &cfg,
                                  std::size_t n_trajectories, const BatchOptions &options,
                                  std::size_t fock_nmax) {
    PolicyComparison out;
    out.ensemble_label = ensemble.label();
    out.mean_photons = mean_photon_number(ensemble);
    out.heterodyne_limit = capacity_heterodyne(out.mean_photons);
    out.holevo = holevo_information(ensemble, fock_nmax);
    out.heterodyne = run_batch(ensemble, PolicySpec::heterodyne(), cfg, n_trajectories, options);
    out.wiseman = run_batch(ensemble, PolicySpec::wiseman(), cfg, n_trajectories, options);
    out.lmmi = run_batch(ensemble, PolicySpec::lmmi(), cfg, n_trajectories, options);
    return out;
}

} // namespace homodyne
