/**
 * @file ensemble.hpp
 * @brief Coherent-state ensembles and their phase-space statistics.
 *
 * An ensemble is an ordered list of coherent states |alpha_k> with prior
 * probabilities p_k. The position k identifies the source symbol everywhere
 * downstream (posteriors, per-symbol reports, POVM samples), so builders fix
 * a canonical order.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace homodyne {

/// Complex coherent amplitude; real part is quadrature X, imaginary part Y.
using CoherentAmplitude = std::complex<double>;

struct EnsembleEntry {
    double prior = 0.0;
    CoherentAmplitude amplitude{};
};

/**
 * Immutable weighted list of coherent states.
 *
 * Construction validates: at least one entry, finite amplitudes, priors
 * non-negative and summing to one within 1e-12. Violations throw
 * std::invalid_argument.
 */
class Ensemble {
  public:
    static constexpr double kPriorTolerance = 1e-12;

    Ensemble(std::string label, std::vector<EnsembleEntry> entries);

    [[nodiscard]] const std::string &label() const noexcept { return label_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] const std::vector<EnsembleEntry> &entries() const noexcept {
        return entries_;
    }
    [[nodiscard]] const std::vector<double> &priors() const noexcept { return priors_; }
    [[nodiscard]] const std::vector<CoherentAmplitude> &amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] const EnsembleEntry &operator[](std::size_t k) const { return entries_.at(k); }

  private:
    std::string label_;
    std::vector<EnsembleEntry> entries_;
    // Split views of entries_ for the hot loops.
    std::vector<double> priors_;
    std::vector<CoherentAmplitude> amplitudes_;
};

/// Second central moments of (X, Y) under a set of weights.
struct QuadratureStats {
    double var_x = 0.0;
    double var_y = 0.0;
    double cov_xy = 0.0;
};

/// m equiprobable states amplitude * exp(2*pi*i*k/m), k = 1..m.
[[nodiscard]] Ensemble make_psk(std::size_t m, double amplitude);

/// 16 equiprobable states on the {-1.5,-0.5,0.5,1.5}^2 grid, row-major from (-1.5,-1.5).
[[nodiscard]] Ensemble make_qam16();

/// Vacuum plus amplitudes 1,2,3 at phases 0, 2pi/3, 4pi/3; ten equiprobable states.
[[nodiscard]] Ensemble make_star();

/// Builtin ensemble by name: "8psk", "16qam" or "star". Throws on unknown names.
[[nodiscard]] Ensemble make_builtin(const std::string &name);

/// Sum_k p_k |alpha_k|^2.
[[nodiscard]] double mean_photon_number(const Ensemble &e);

/**
 * Weighted covariance of the quadratures. Weights must sum to one within
 * 1e-9 and have the same length as the amplitudes.
 *
 * Uses the two-pass form so that near-point-mass posteriors keep accurate
 * (tiny) variances instead of cancellation noise.
 */
[[nodiscard]] QuadratureStats quadrature_stats(std::span<const double> weights,
                                               std::span<const CoherentAmplitude> amplitudes);

[[nodiscard]] QuadratureStats quadrature_stats(const Ensemble &e);

/// Copy of e with every amplitude multiplied by exp(i*theta).
[[nodiscard]] Ensemble rotated(const Ensemble &e, double theta);

/// Copy of e with the priors replaced (validated like any ensemble).
[[nodiscard]] Ensemble with_priors(const Ensemble &e, std::span<const double> priors);

} // namespace homodyne
