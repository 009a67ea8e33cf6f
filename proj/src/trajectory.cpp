#include "homodyne/trajectory.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace homodyne {

namespace {

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

/// Entropy in bits from a log posterior (natural log).
double entropy_from_log(std::span<const double> post, std::span<const double> log_post) {
    double h = 0.0;
    for (std::size_t k = 0; k < post.size(); ++k) {
        if (post[k] > 0.0) {
            h -= post[k] * log_post[k];
        }
    }
    return h * kInvLn2;
}

/// In-place Bayes step on (log_post, post); `means` holds A_k for this step.
void bayes_step(std::span<double> log_post, std::span<double> post,
                std::span<const double> means, double charge, double dt) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < post.size(); ++k) {
        log_post[k] += (charge * means[k] - 0.5 * means[k] * means[k]) / dt;
        peak = std::max(peak, log_post[k]);
    }
    assert(std::isfinite(peak));
    double norm = 0.0;
    for (std::size_t k = 0; k < post.size(); ++k) {
        log_post[k] -= peak;
        post[k] = std::exp(log_post[k]);
        norm += post[k];
    }
    // The peak entry contributes exp(0) = 1, so norm >= 1.
    const double log_norm = std::log(norm);
    for (std::size_t k = 0; k < post.size(); ++k) {
        post[k] /= norm;
        log_post[k] -= log_norm;
    }
}

std::vector<double> log_of(std::span<const double> p) {
    std::vector<double> out(p.size());
    std::transform(p.begin(), p.end(), out.begin(), [](double w) {
        return w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity();
    });
    return out;
}

} // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("dt must be positive");
    }
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw std::invalid_argument("t_max must be positive");
    }
    const double ratio = t_max / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
        throw std::invalid_argument("t_max must be an integer multiple of dt");
    }
}

std::int64_t SimConfig::steps() const {
    return static_cast<std::int64_t>(std::llround(t_max / dt));
}

AbAccumulator::AbAccumulator(double dt) : step_weight_(-std::expm1(-dt)) {}

void AbAccumulator::add(double t, double phase, double charge) {
    a_ += charge * std::polar(std::exp(-0.5 * t), phase);
    b_ -= std::polar(std::exp(-t) * step_weight_, 2.0 * phase);
}

double expected_charge(CoherentAmplitude alpha, double phase, double t, double dt) {
    return 2.0 * std::exp(-0.5 * t) *
           (alpha.real() * std::cos(phase) + alpha.imag() * std::sin(phase)) * dt;
}

double sample_photocharge(CoherentAmplitude alpha, double phase, double t, double dt, Rng &rng) {
    std::normal_distribution<double> gauss;
    return expected_charge(alpha, phase, t, dt) + std::sqrt(dt) * gauss(rng);
}

ProbabilityVector bayes_update(std::span<const double> posterior, double charge,
                               const Ensemble &ensemble, double phase, double t, double dt) {
    if (posterior.size() != ensemble.size()) {
        throw std::invalid_argument("bayes_update: posterior size mismatch");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("bayes_update: dt must be positive");
    }
    std::vector<double> means(ensemble.size());
    for (std::size_t k = 0; k < means.size(); ++k) {
        means[k] = expected_charge(ensemble.amplitudes()[k], phase, t, dt);
    }
    ProbabilityVector post(posterior.begin(), posterior.end());
    auto log_post = log_of(post);
    bayes_step(log_post, post, means, charge, dt);
    return post;
}

double info_gain(std::span<const double> before, std::span<const double> after) {
    return shannon_entropy(before) - shannon_entropy(after);
}

TrajectoryResult run_trajectory(const Ensemble &ensemble, std::size_t true_index,
                                const PolicySpec &policy, const SimConfig &cfg, Rng &rng) {
    cfg.validate();
    policy.validate();
    if (true_index >= ensemble.size()) {
        throw std::out_of_range("run_trajectory: true_index outside the ensemble");
    }

    const std::size_t n_states = ensemble.size();
    const auto &amps = ensemble.amplitudes();
    const CoherentAmplitude truth = amps[true_index];
    const double dt = cfg.dt;
    const double sqrt_dt = std::sqrt(dt);
    const std::int64_t n_steps = cfg.steps();

    TrajectoryState state{.step = 0,
                          .time = 0.0,
                          .posterior = ensemble.priors(),
                          .log_posterior = log_of(ensemble.priors()),
                          .phase = 0.0,
                          .last_charge = 0.0,
                          .ab = AbAccumulator(dt),
                          .record = std::nullopt};
    if (cfg.log_record) {
        state.record.emplace();
        state.record->reserve(static_cast<std::size_t>(n_steps));
    }

    TrajectoryResult result;
    result.true_index = true_index;
    result.initial_entropy = shannon_entropy(state.posterior);

    std::normal_distribution<double> gauss;
    std::vector<double> means(n_states);
    double entropy = result.initial_entropy;

    for (std::int64_t i = 0; i < n_steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        state.step = i;
        state.time = t;

        const PhaseQuery query{.step = i,
                               .dt = dt,
                               .previous_phase = state.phase,
                               .last_charge = state.last_charge,
                               .posterior = state.posterior,
                               .ensemble = &ensemble};
        const double phase = select_phase(policy, query);

        const double c = std::cos(phase);
        const double s = std::sin(phase);
        const double scale = 2.0 * std::exp(-0.5 * t) * dt;
        const double noise = gauss(rng);
        const double charge = scale * (truth.real() * c + truth.imag() * s) +
                              (cfg.zero_noise ? 0.0 : sqrt_dt * noise);

        state.ab.add(t, phase, charge);

        for (std::size_t k = 0; k < n_states; ++k) {
            means[k] = scale * (amps[k].real() * c + amps[k].imag() * s);
        }
        bayes_step(state.log_posterior, state.posterior, means, charge, dt);

        const double next_entropy = entropy_from_log(state.posterior, state.log_posterior);
        result.total_gain += entropy - next_entropy;
        entropy = next_entropy;

        state.phase = phase;
        state.last_charge = charge;
        if (state.record) {
            state.record->push_back({t, phase, charge, state.posterior});
        }
    }

    result.final_entropy = entropy;
    result.final_posterior = std::move(state.posterior);
    result.projector_a = state.ab.a();
    result.projector_b = state.ab.b();
    result.record = std::move(state.record);
    return result;
}

} // namespace homodyne
