#include "homodyne/policy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace homodyne {

std::string_view to_string(PolicyKind kind) noexcept {
    switch (kind) {
    case PolicyKind::heterodyne:
        return "heterodyne";
    case PolicyKind::wiseman:
        return "wiseman";
    case PolicyKind::lmmi:
        return "lmmi";
    case PolicyKind::fixed:
        return "fixed";
    }
    return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
    for (auto kind : {PolicyKind::heterodyne, PolicyKind::wiseman, PolicyKind::lmmi,
                      PolicyKind::fixed}) {
        if (name == to_string(kind)) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown policy '" + std::string(name) +
                                "' (expected heterodyne, wiseman, lmmi or fixed)");
}

void PolicySpec::validate() const {
    if (!(heterodyne_step > 0.0) || !std::isfinite(heterodyne_step)) {
        throw std::invalid_argument("heterodyne step must be a positive finite number");
    }
    if (!std::isfinite(wiseman_initial_phase) || !std::isfinite(fixed_phase)) {
        throw std::invalid_argument("policy phases must be finite");
    }
}

double heterodyne_phase(std::int64_t step_index, double step_size) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double phase = std::fmod(static_cast<double>(step_index) * step_size, two_pi);
    if (phase < 0.0) {
        phase += two_pi;
    }
    return phase;
}

double wiseman_phase(double prev_phase, double last_charge, double t, double dt) {
    return prev_phase + last_charge / std::sqrt(std::max(t, dt));
}

double lmmi_phase(std::span<const double> posterior, const Ensemble &ensemble, double fallback) {
    const auto s = quadrature_stats(posterior, ensemble.amplitudes());
    const std::complex<double> operand(s.var_x - s.var_y, 2.0 * s.cov_xy);
    // Relative threshold: rounding in the variances of a symmetric
    // ensemble leaves an operand of order 1e-16 * spread.
    const double spread = s.var_x + s.var_y;
    if (spread <= 0.0 || std::abs(operand) <= 1e-12 * spread) {
        return fallback;
    }
    return 0.5 * std::arg(operand);
}

double dispersion_objective(std::span<const double> posterior, const Ensemble &ensemble,
                            double phase) {
    const auto s = quadrature_stats(posterior, ensemble.amplitudes());
    const double c = std::cos(phase);
    const double sn = std::sin(phase);
    const double value = 2.0 * s.var_x * c * c + 2.0 * s.var_y * sn * sn + 4.0 * s.cov_xy * sn * c;
    return std::max(value, 0.0);
}

double linearized_step_info(std::span<const double> posterior, const Ensemble &ensemble,
                            double phase, double t, double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("linearized_step_info: dt must be positive");
    }
    const auto &amps = ensemble.amplitudes();
    if (posterior.size() != amps.size()) {
        throw std::invalid_argument("linearized_step_info: posterior size mismatch");
    }
    const double scale = 2.0 * std::exp(-0.5 * t) * dt;
    const double c = std::cos(phase);
    const double sn = std::sin(phase);
    double mean = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        mean += posterior[k] * scale * (amps[k].real() * c + amps[k].imag() * sn);
    }
    double var = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        const double d = scale * (amps[k].real() * c + amps[k].imag() * sn) - mean;
        var += posterior[k] * d * d;
    }
    return var / (2.0 * dt);
}

double select_phase(const PolicySpec &spec, const PhaseQuery &query) {
    switch (spec.kind) {
    case PolicyKind::heterodyne:
        return static_cast<double>(query.step) * spec.heterodyne_step;
    case PolicyKind::fixed:
        return spec.fixed_phase;
    case PolicyKind::wiseman:
        if (query.step == 0) {
            return spec.wiseman_initial_phase;
        }
        return wiseman_phase(query.previous_phase, query.last_charge,
                             static_cast<double>(query.step - 1) * query.dt, query.dt);
    case PolicyKind::lmmi:
        if (query.ensemble == nullptr) {
            throw std::invalid_argument("lmmi policy needs the ensemble");
        }
        return lmmi_phase(query.posterior, *query.ensemble,
                          query.step == 0 ? 0.0 : query.previous_phase);
    }
    throw std::logic_error("select_phase: unhandled policy kind");
}

} // namespace homodyne
