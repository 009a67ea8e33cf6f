#include "homodyne/information.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace homodyne {

namespace {

void require_non_negative(double n, const char *what) {
    if (!(n >= 0.0)) {
        throw std::invalid_argument(std::string(what) + ": mean photon number must be >= 0");
    }
}

} // namespace

bool is_probability_vector(std::span<const double> p, double tol) {
    if (p.empty()) {
        return false;
    }
    double total = 0.0;
    for (double w : p) {
        if (!(w >= 0.0)) {
            return false;
        }
        total += w;
    }
    return std::abs(total - 1.0) <= tol;
}

double shannon_entropy(std::span<const double> p) {
    double h = 0.0;
    for (double w : p) {
        if (w > 0.0) {
            h -= w * std::log2(w);
        }
    }
    return h;
}

double capacity_heterodyne(double mean_photons) {
    require_non_negative(mean_photons, "capacity_heterodyne");
    return std::log2(1.0 + mean_photons);
}

double capacity_homodyne_squeezed(double mean_photons) {
    require_non_negative(mean_photons, "capacity_homodyne_squeezed");
    return std::log2(1.0 + 2.0 * mean_photons);
}

double capacity_holevo_bound(double mean_photons) {
    require_non_negative(mean_photons, "capacity_holevo_bound");
    if (mean_photons == 0.0) {
        return 0.0;
    }
    return std::log2(1.0 + mean_photons) + mean_photons * std::log2(1.0 + 1.0 / mean_photons);
}

std::vector<CapacityPoint> capacity_curve(double max_photons, std::size_t steps) {
    if (!(max_photons > 0.0) || steps == 0) {
        throw std::invalid_argument("capacity_curve: need max_photons > 0 and steps >= 1");
    }
    std::vector<CapacityPoint> curve;
    curve.reserve(steps);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double n = max_photons * static_cast<double>(i) / static_cast<double>(steps);
        curve.push_back({n, capacity_heterodyne(n), capacity_homodyne_squeezed(n),
                         capacity_holevo_bound(n)});
    }
    return curve;
}

std::vector<std::complex<double>> coherent_fock_vector(CoherentAmplitude alpha,
                                                       std::size_t n_max) {
    std::vector<std::complex<double>> c(n_max + 1);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 0; n < n_max; ++n) {
        c[n + 1] = c[n] * alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return c;
}

double holevo_information(const Ensemble &e, std::size_t n_max) {
    const auto dim = static_cast<Eigen::Index>(n_max + 1);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);

    for (const auto &entry : e.entries()) {
        const auto coeffs = coherent_fock_vector(entry.amplitude, n_max);
        const Eigen::Map<const Eigen::VectorXcd> v(coeffs.data(), dim);
        const double kept = v.squaredNorm();
        if (kept < 1.0 - 1e-8) {
            throw std::domain_error("holevo_information: Fock truncation at n_max = " +
                                    std::to_string(n_max) + " keeps only " +
                                    std::to_string(kept) + " of a state's norm");
        }
        if (entry.prior > 0.0) {
            rho.noalias() += entry.prior * (v * v.adjoint());
        }
    }
    rho = 0.5 * (rho + rho.adjoint()).eval();

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("holevo_information: eigendecomposition failed");
    }
    double chi = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double lambda = solver.eigenvalues()[i];
        if (lambda < -1e-9) {
            throw std::domain_error("holevo_information: density matrix has eigenvalue " +
                                    std::to_string(lambda));
        }
        if (lambda > 0.0) {
            chi -= lambda * std::log2(lambda);
        }
    }
    return chi;
}

} // namespace homodyne
