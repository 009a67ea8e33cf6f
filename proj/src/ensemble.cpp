#include "homodyne/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace homodyne {

Ensemble::Ensemble(std::string label, std::vector<EnsembleEntry> entries)
    : label_(std::move(label)), entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw std::invalid_argument("ensemble must contain at least one state");
    }
    double total = 0.0;
    for (const auto &entry : entries_) {
        if (!std::isfinite(entry.amplitude.real()) || !std::isfinite(entry.amplitude.imag())) {
            throw std::invalid_argument("ensemble amplitude is not finite");
        }
        if (!std::isfinite(entry.prior) || entry.prior < 0.0) {
            throw std::invalid_argument("ensemble prior must be a finite non-negative number");
        }
        total += entry.prior;
    }
    if (std::abs(total - 1.0) > kPriorTolerance) {
        throw std::invalid_argument("ensemble priors must sum to 1 (got " + std::to_string(total) +
                                    ")");
    }
    priors_.reserve(entries_.size());
    amplitudes_.reserve(entries_.size());
    for (const auto &entry : entries_) {
        priors_.push_back(entry.prior);
        amplitudes_.push_back(entry.amplitude);
    }
}

Ensemble make_psk(std::size_t m, double amplitude) {
    if (m == 0) {
        throw std::invalid_argument("make_psk: m must be at least 1");
    }
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw std::invalid_argument("make_psk: amplitude must be finite and non-negative");
    }
    std::vector<EnsembleEntry> entries;
    entries.reserve(m);
    const double prior = 1.0 / static_cast<double>(m);
    for (std::size_t k = 1; k <= m; ++k) {
        const double phase =
            2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
        entries.push_back({prior, std::polar(amplitude, phase)});
    }
    return Ensemble(std::to_string(m) + "psk", std::move(entries));
}

Ensemble make_qam16() {
    constexpr double levels[] = {-1.5, -0.5, 0.5, 1.5};
    std::vector<EnsembleEntry> entries;
    entries.reserve(16);
    for (double y : levels) {
        for (double x : levels) {
            entries.push_back({1.0 / 16.0, {x, y}});
        }
    }
    return Ensemble("16qam", std::move(entries));
}

Ensemble make_star() {
    std::vector<EnsembleEntry> entries;
    entries.reserve(10);
    entries.push_back({0.1, {0.0, 0.0}});
    for (int lobe = 0; lobe < 3; ++lobe) {
        const double phase = 2.0 * std::numbers::pi * lobe / 3.0;
        for (int a = 1; a <= 3; ++a) {
            entries.push_back({0.1, std::polar(static_cast<double>(a), phase)});
        }
    }
    // Ten copies of 0.1 do not sum to exactly 1 in binary; the ensemble
    // tolerance absorbs the 1 ulp difference.
    return Ensemble("star", std::move(entries));
}

Ensemble make_builtin(const std::string &name) {
    if (name == "8psk") {
        return make_psk(8, std::sqrt(2.0));
    }
    if (name == "16qam") {
        return make_qam16();
    }
    if (name == "star") {
        return make_star();
    }
    throw std::invalid_argument("unknown builtin ensemble '" + name +
                                "' (expected 8psk, 16qam or star)");
}

double mean_photon_number(const Ensemble &e) {
    double n = 0.0;
    for (const auto &entry : e.entries()) {
        n += entry.prior * std::norm(entry.amplitude);
    }
    return n;
}

QuadratureStats quadrature_stats(std::span<const double> weights,
                                 std::span<const CoherentAmplitude> amplitudes) {
    if (weights.size() != amplitudes.size()) {
        throw std::invalid_argument("quadrature_stats: weights and amplitudes differ in length");
    }
    double total = 0.0;
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        total += weights[k];
        mean_x += weights[k] * amplitudes[k].real();
        mean_y += weights[k] * amplitudes[k].imag();
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("quadrature_stats: weights are not normalized");
    }
    QuadratureStats s;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const double dx = amplitudes[k].real() - mean_x;
        const double dy = amplitudes[k].imag() - mean_y;
        s.var_x += weights[k] * dx * dx;
        s.var_y += weights[k] * dy * dy;
        s.cov_xy += weights[k] * dx * dy;
    }
    return s;
}

QuadratureStats quadrature_stats(const Ensemble &e) {
    return quadrature_stats(e.priors(), e.amplitudes());
}

Ensemble rotated(const Ensemble &e, double theta) {
    const auto phase = std::polar(1.0, theta);
    std::vector<EnsembleEntry> entries = e.entries();
    for (auto &entry : entries) {
        entry.amplitude *= phase;
    }
    return Ensemble(e.label(), std::move(entries));
}

Ensemble with_priors(const Ensemble &e, std::span<const double> priors) {
    if (priors.size() != e.size()) {
        throw std::invalid_argument("with_priors: size mismatch");
    }
    std::vector<EnsembleEntry> entries = e.entries();
    for (std::size_t k = 0; k < entries.size(); ++k) {
        entries[k].prior = priors[k];
    }
    return Ensemble(e.label(), std::move(entries));
}

} // namespace homodyne
