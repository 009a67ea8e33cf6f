/**
 * @file trajectory.hpp
 * @brief Monte Carlo simulation of one adaptive homodyne measurement.
 *
 * Time is in units of the cavity lifetime. In step i (t = i*dt) the
 * detector integrates the charge
 *
 *     dQ = 2 exp(-t/2) Re[alpha exp(-i phi)] dt + sqrt(dt) g,   g ~ N(0, 1)
 *
 * for the true amplitude alpha, and the posterior over ensemble indices is
 * updated with the Gaussian likelihood of dQ under every alpha_k.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "homodyne/ensemble.hpp"
#include "homodyne/information.hpp"
#include "homodyne/policy.hpp"

namespace homodyne {

using Rng = std::mt19937_64;

struct SimConfig {
    double dt = 5e-3;
    double t_max = 10.0;
    std::uint64_t seed = 0;
    /// Keep the full (t, phi, dQ, posterior) record of each trajectory.
    bool log_record = false;
    /// Test hook: replace the Wiener increment by 0.
    bool zero_noise = false;

    /// Throws std::invalid_argument unless dt > 0, t_max > 0 and t_max/dt is an integer within 1e-9.
    void validate() const;
    /// Number of measurement steps, t_max / dt.
    [[nodiscard]] std::int64_t steps() const;
};

struct RecordEntry {
    double t = 0.0;
    double phase = 0.0;
    double charge = 0.0;
    /// Posterior after the Bayes update of this step.
    std::vector<double> posterior;
};

/// Running sums for the POVM functionals A and B.
///
/// A accumulates dQ exp(i phi - t/2). B accumulates -exp(2 i phi) times the
/// exact integral of exp(-s) over the step, exp(-t) (1 - exp(-dt)), so that
/// |B| <= 1 - exp(-t_max) < 1 holds for any finite record.
class AbAccumulator {
  public:
    explicit AbAccumulator(double dt);

    void add(double t, double phase, double charge);

    [[nodiscard]] std::complex<double> a() const noexcept { return a_; }
    [[nodiscard]] std::complex<double> b() const noexcept { return b_; }

  private:
    double step_weight_;
    std::complex<double> a_{};
    std::complex<double> b_{};
};

struct TrajectoryState {
    std::int64_t step = 0;
    double time = 0.0;
    ProbabilityVector posterior;
    /// Natural log of the posterior, kept alongside it so the update needs no log().
    std::vector<double> log_posterior;
    double phase = 0.0;
    double last_charge = 0.0;
    AbAccumulator ab;
    std::optional<std::vector<RecordEntry>> record;
};

struct TrajectoryResult {
    std::size_t true_index = 0;
    /// Sum of per-step entropy reductions, in bits.
    double total_gain = 0.0;
    double initial_entropy = 0.0;
    double final_entropy = 0.0;
    ProbabilityVector final_posterior;
    std::complex<double> projector_a{};
    std::complex<double> projector_b{};
    std::optional<std::vector<RecordEntry>> record;
};

/// Mean charge 2 exp(-t/2) Re[alpha exp(-i phase)] dt.
[[nodiscard]] double expected_charge(CoherentAmplitude alpha, double phase, double t, double dt);

/// expected_charge plus a Wiener increment of variance dt drawn from `rng`.
[[nodiscard]] double sample_photocharge(CoherentAmplitude alpha, double phase, double t, double dt,
                                        Rng &rng);

/**
 * Posterior after observing `charge`, proportional to
 * p_k exp[(charge * A_k - A_k^2 / 2) / dt] with A_k = expected_charge(alpha_k, ...).
 *
 * The exponent is shifted by its maximum before exponentiation, so the
 * normalizer is at least the largest prior term and never underflows.
 */
[[nodiscard]] ProbabilityVector bayes_update(std::span<const double> posterior, double charge,
                                             const Ensemble &ensemble, double phase, double t,
                                             double dt);

/// H(before) - H(after), in bits. Negative for an outcome that raises uncertainty.
[[nodiscard]] double info_gain(std::span<const double> before, std::span<const double> after);

/// Simulates the measurement of ensemble[true_index] from t = 0 to t_max.
[[nodiscard]] TrajectoryResult run_trajectory(const Ensemble &ensemble, std::size_t true_index,
                                              const PolicySpec &policy, const SimConfig &cfg,
                                              Rng &rng);

} // namespace homodyne
