/**
 * @file policy.hpp
 * @brief Local-oscillator phase policies.
 *
 * A policy maps what is known before a measurement step (step index, the
 * previous phase and charge, the current posterior) to the LO phase used
 * for that step. Phases are kept unwrapped; heterodyne_phase() is the only
 * function that reduces modulo 2*pi, for reporting.
 */
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "homodyne/ensemble.hpp"

namespace homodyne {

enum class PolicyKind { heterodyne, wiseman, lmmi, fixed };

[[nodiscard]] std::string_view to_string(PolicyKind kind) noexcept;

/// Parses "heterodyne", "wiseman", "lmmi" or "fixed"; throws std::invalid_argument otherwise.
[[nodiscard]] PolicyKind parse_policy_kind(std::string_view name);

struct PolicySpec {
    PolicyKind kind = PolicyKind::lmmi;
    /// Phase advance per step of the discrete heterodyne approximation.
    double heterodyne_step = 0.1;
    double wiseman_initial_phase = 0.0;
    double fixed_phase = 0.0;

    /// Throws std::invalid_argument on a non-positive heterodyne step or non-finite values.
    void validate() const;

    static PolicySpec heterodyne(double step = 0.1) {
        return {PolicyKind::heterodyne, step, 0.0, 0.0};
    }
    static PolicySpec wiseman(double initial_phase = 0.0) {
        return {PolicyKind::wiseman, 0.1, initial_phase, 0.0};
    }
    static PolicySpec lmmi() { return {PolicyKind::lmmi, 0.1, 0.0, 0.0}; }
    static PolicySpec fixed(double phase) { return {PolicyKind::fixed, 0.1, 0.0, phase}; }
};

/// step_index * step_size reduced to [0, 2*pi).
[[nodiscard]] double heterodyne_phase(std::int64_t step_index, double step_size);

/// prev_phase + last_charge / sqrt(max(t, dt)); the dt floor covers the t = 0 step.
[[nodiscard]] double wiseman_phase(double prev_phase, double last_charge, double t, double dt);

/**
 * Phase maximizing the expected single-step information gain:
 * 0.5 * Arg[(var_x - var_y) + 2i cov_xy] under the posterior, in (-pi/2, pi/2].
 *
 * When the Arg operand vanishes (isotropic spread, e.g. 8PSK at t = 0) every
 * phase is equally informative and `fallback` is returned.
 */
[[nodiscard]] double lmmi_phase(std::span<const double> posterior, const Ensemble &ensemble,
                                double fallback = 0.0);

/// 2 var_x cos^2 + 2 var_y sin^2 + 4 cov_xy sin cos, i.e. twice the projected-quadrature variance.
[[nodiscard]] double dispersion_objective(std::span<const double> posterior,
                                          const Ensemble &ensemble, double phase);

/// Small-signal mutual information of one step, (<A^2> - <A>^2) / (2 dt), in nats.
[[nodiscard]] double linearized_step_info(std::span<const double> posterior,
                                          const Ensemble &ensemble, double phase, double t,
                                          double dt);

/// Everything a policy may look at when choosing the phase of the next step.
struct PhaseQuery {
    std::int64_t step = 0; ///< index of the step about to be measured
    double dt = 0.0;
    double previous_phase = 0.0; ///< phase of step - 1 (ignored at step 0)
    double last_charge = 0.0;    ///< charge of step - 1 (ignored at step 0)
    std::span<const double> posterior;
    const Ensemble *ensemble = nullptr;
};

/// Unwrapped LO phase for the step described by `query`.
[[nodiscard]] double select_phase(const PolicySpec &spec, const PhaseQuery &query);

} // namespace homodyne
