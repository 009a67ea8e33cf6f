#include "homodyne/povm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "homodyne/montecarlo.hpp"

namespace homodyne {

std::pair<std::complex<double>, std::complex<double>>
accumulate_ab(std::span<const RecordEntry> record, double dt) {
    AbAccumulator acc(dt);
    for (const auto &step : record) {
        acc.add(step.t, step.phase, step.charge);
    }
    return {acc.a(), acc.b()};
}

PovmProjector projector_params(std::complex<double> a, std::complex<double> b) {
    const double b_abs = std::abs(b);
    if (!(b_abs < 1.0)) {
        throw std::domain_error("projector_params: |B| = " + std::to_string(b_abs) +
                                " must be < 1");
    }
    PovmProjector p;
    p.alpha = (a + b * std::conj(a)) / (1.0 - b_abs * b_abs);
    if (b_abs > 0.0) {
        p.xi = -(b / b_abs) * std::atanh(b_abs);
    }
    return p;
}

WignerEllipse wigner_ellipse(const PovmProjector &p) {
    const double r = std::abs(p.xi);
    if (!std::isfinite(r)) {
        throw std::domain_error("wigner_ellipse: squeezing parameter is not finite");
    }
    WignerEllipse e;
    e.center_x = p.alpha.real();
    e.center_y = p.alpha.imag();
    e.semi_major = 0.5 * std::exp(r);
    e.semi_minor = 0.5 * std::exp(-r);
    double orientation = 0.0;
    if (r > 0.0) {
        orientation = std::fmod(0.5 * std::arg(p.xi) + 0.5 * std::numbers::pi, std::numbers::pi);
        if (orientation < 0.0) {
            orientation += std::numbers::pi;
        }
    }
    e.orientation = orientation;
    return e;
}

std::vector<PovmSample> sample_povm(const Ensemble &ensemble, const PolicySpec &policy,
                                    const SimConfig &cfg, std::size_t n_samples,
                                    std::size_t workers, bool common_random_numbers) {
    if (n_samples == 0) {
        throw std::invalid_argument("sample_povm: need at least one sample");
    }
    cfg.validate();
    policy.validate();

    const std::uint64_t noise_master =
        noise_master_seed(cfg.seed, policy.kind, common_random_numbers);
    SimConfig traj_cfg = cfg;
    traj_cfg.log_record = false;

    std::vector<PovmSample> samples(n_samples);
    parallel_for(n_samples, workers, [&](std::size_t i) {
        Rng symbol_rng(derive_stream_seed(cfg.seed, i, StreamPurpose::symbol));
        const std::size_t k = draw_symbol(ensemble.priors(), symbol_rng);
        Rng noise_rng(derive_stream_seed(noise_master, i, StreamPurpose::noise));
        const auto result = run_trajectory(ensemble, k, policy, traj_cfg, noise_rng);
        auto &sample = samples[i];
        sample.true_index = k;
        sample.projector = projector_params(result.projector_a, result.projector_b);
        sample.ellipse = wigner_ellipse(sample.projector);
    });
    return samples;
}

} // namespace homodyne
