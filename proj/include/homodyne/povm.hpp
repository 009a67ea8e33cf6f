/**
 * @file povm.hpp
 * @brief Squeezed-state projectors reconstructed from a measurement record.
 *
 * Any LO phase history turns the photocurrent record into two functionals
 * A and B; the corresponding POVM element is the projector onto the squeezed
 * state |alpha, xi> with
 *
 *     alpha = (A + B conj(A)) / (1 - |B|^2),   xi = -(B / |B|) artanh|B|.
 *
 * For plotting, a projector is drawn as the 1/e contour of its Wigner
 * function: coherent states are circles of radius 1/2.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "homodyne/ensemble.hpp"
#include "homodyne/policy.hpp"
#include "homodyne/trajectory.hpp"

namespace homodyne {

struct PovmProjector {
    CoherentAmplitude alpha{};
    /// Squeezing parameter r exp(i theta).
    std::complex<double> xi{};
};

struct WignerEllipse {
    double center_x = 0.0;
    double center_y = 0.0;
    double semi_major = 0.5;
    double semi_minor = 0.5;
    /// Direction of the major (anti-squeezed) axis, in [0, pi).
    double orientation = 0.0;
};

struct PovmSample {
    std::size_t true_index = 0;
    PovmProjector projector;
    WignerEllipse ellipse;
};

/// Replays a record through the same accumulator the engine uses; returns (A, B).
[[nodiscard]] std::pair<std::complex<double>, std::complex<double>>
accumulate_ab(std::span<const RecordEntry> record, double dt);

/// Throws std::domain_error when |B| >= 1.
[[nodiscard]] PovmProjector projector_params(std::complex<double> a, std::complex<double> b);

[[nodiscard]] WignerEllipse wigner_ellipse(const PovmProjector &p);

/**
 * Runs n_samples trajectories with true states drawn from the priors and
 * returns their projectors. Seeding follows run_batch, so sample i sees the
 * same symbol and noise streams as trajectory i of a batch with the same
 * master seed and policy.
 */
[[nodiscard]] std::vector<PovmSample> sample_povm(const Ensemble &ensemble,
                                                  const PolicySpec &policy, const SimConfig &cfg,
                                                  std::size_t n_samples, std::size_t workers = 1,
                                                  bool common_random_numbers = false);

} // namespace homodyne
