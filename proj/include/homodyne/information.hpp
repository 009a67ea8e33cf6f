/**
 * @file information.hpp
 * @brief Entropies, capacity bounds and the Holevo information of a
 * coherent-state ensemble.
 *
 * Every quantity here is reported in bits.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "homodyne/ensemble.hpp"

namespace homodyne {

using ProbabilityVector = std::vector<double>;

/// True when every weight is >= 0 and the weights sum to 1 within tol.
[[nodiscard]] bool is_probability_vector(std::span<const double> p, double tol = 1e-9);

/// -sum p log2 p; zero weights contribute nothing.
[[nodiscard]] double shannon_entropy(std::span<const double> p);

/// Heterodyne limit log2(1 + n). Throws for n < 0.
[[nodiscard]] double capacity_heterodyne(double mean_photons);

/// Squeezed-state homodyne limit log2(1 + 2n). Throws for n < 0.
[[nodiscard]] double capacity_homodyne_squeezed(double mean_photons);

/// Upper bound on the Holevo information, log2(1+n) + n log2(1+1/n); 0 at n = 0.
[[nodiscard]] double capacity_holevo_bound(double mean_photons);

struct CapacityPoint {
    double mean_photons;
    double heterodyne;
    double homodyne_squeezed;
    double holevo_bound;
};

/// The three bounds on the grid n_i = max_photons * i / steps, i = 1..steps.
[[nodiscard]] std::vector<CapacityPoint> capacity_curve(double max_photons, std::size_t steps);

/// Coefficients of |alpha> in the Fock basis for n = 0..n_max.
[[nodiscard]] std::vector<std::complex<double>> coherent_fock_vector(CoherentAmplitude alpha,
                                                                     std::size_t n_max);

/**
 * chi(E) = -Tr rho log2 rho for rho = sum_k p_k |alpha_k><alpha_k| in a
 * Fock space truncated at n_max photons.
 *
 * Throws std::domain_error when the truncation keeps less than 1 - 1e-8 of
 * any state's norm, or when the spectrum has an eigenvalue below -1e-9.
 */
[[nodiscard]] double holevo_information(const Ensemble &e, std::size_t n_max = 100);

} // namespace homodyne
