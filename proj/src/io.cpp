#include "homodyne/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace homodyne {

namespace {

json optional_real(const std::optional<double> &v) {
    return v ? json(*v) : json(nullptr);
}

double reduce_phase(double phase) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(phase, two_pi);
    return r < 0.0 ? r + two_pi : r;
}

} // namespace

std::string format_real(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_real: conversion failed");
    }
    return {buf.data(), end};
}

Ensemble ensemble_from_json(const json &j) {
    if (!j.is_object() || !j.contains("entries") || !j.at("entries").is_array()) {
        throw std::invalid_argument("ensemble definition needs an \"entries\" array");
    }
    std::string label = j.value("label", std::string("custom"));
    std::vector<EnsembleEntry> entries;
    for (const auto &item : j.at("entries")) {
        if (!item.is_object()) {
            throw std::invalid_argument("ensemble entry must be an object");
        }
        for (const char *key : {"p", "re", "im"}) {
            if (!item.contains(key) || !item.at(key).is_number()) {
                throw std::invalid_argument(std::string("ensemble entry needs numeric \"") + key +
                                            "\"");
            }
        }
        entries.push_back({item.at("p").get<double>(),
                           {item.at("re").get<double>(), item.at("im").get<double>()}});
    }
    return Ensemble(std::move(label), std::move(entries));
}

json ensemble_to_json(const Ensemble &e) {
    json entries = json::array();
    for (const auto &entry : e.entries()) {
        entries.push_back(
            {{"p", entry.prior}, {"re", entry.amplitude.real()}, {"im", entry.amplitude.imag()}});
    }
    return {{"label", e.label()}, {"entries", std::move(entries)}};
}

Ensemble load_ensemble_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open ensemble file " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception &ex) {
        throw std::runtime_error("cannot parse ensemble file " + path.string() + ": " + ex.what());
    }
    return ensemble_from_json(j);
}

json to_json(const SimConfig &cfg) {
    return {{"dt", cfg.dt}, {"t_max", cfg.t_max}, {"seed", cfg.seed}, {"steps", cfg.steps()}};
}

json to_json(const PolicySpec &policy) {
    return {{"kind", std::string(to_string(policy.kind))},
            {"heterodyne_step", policy.heterodyne_step},
            {"wiseman_initial_phase", policy.wiseman_initial_phase},
            {"fixed_phase", policy.fixed_phase}};
}

json to_json(const BatchStatistics &stats) {
    json means = json::array();
    for (const auto &m : stats.per_symbol_means) {
        means.push_back(optional_real(m));
    }
    return {{"ensemble", stats.ensemble_label},
            {"policy", to_json(stats.policy)},
            {"config", to_json(stats.config)},
            {"workers", stats.options.workers},
            {"common_random_numbers", stats.options.common_random_numbers},
            {"n_trajectories", stats.n_trajectories},
            {"mean_gain", stats.mean_gain},
            {"std_gain", optional_real(stats.std_gain)},
            {"ci_half_width", optional_real(stats.ci_half_width)},
            {"per_symbol_counts", stats.per_symbol_counts},
            {"per_symbol_means", std::move(means)}};
}

json to_json(const PolicyComparison &cmp) {
    return {{"ensemble", cmp.ensemble_label},
            {"mean_photons", cmp.mean_photons},
            {"heterodyne_limit_I1", cmp.heterodyne_limit},
            {"holevo_chi", cmp.holevo},
            {"heterodyne", to_json(cmp.heterodyne)},
            {"wiseman", to_json(cmp.wiseman)},
            {"lmmi", to_json(cmp.lmmi)}};
}

void write_bounds_csv(std::ostream &out, std::span<const CapacityPoint> curve) {
    out << "n,I1,I2,I3\n";
    for (const auto &p : curve) {
        out << format_real(p.mean_photons) << ',' << format_real(p.heterodyne) << ','
            << format_real(p.homodyne_squeezed) << ',' << format_real(p.holevo_bound) << '\n';
    }
}

void write_povm_csv(std::ostream &out, std::span<const PovmSample> samples) {
    out << "x,y,semi_major,semi_minor,orientation_rad,xi_abs,xi_arg,true_index\n";
    for (const auto &s : samples) {
        const auto &e = s.ellipse;
        out << format_real(e.center_x) << ',' << format_real(e.center_y) << ','
            << format_real(e.semi_major) << ',' << format_real(e.semi_minor) << ','
            << format_real(e.orientation) << ',' << format_real(std::abs(s.projector.xi)) << ','
            << format_real(std::arg(s.projector.xi)) << ',' << s.true_index << '\n';
    }
}

void write_record_csv(std::ostream &out, std::span<const RecordEntry> record,
                      std::size_t n_states) {
    out << "t,phi,dQ";
    for (std::size_t k = 1; k <= n_states; ++k) {
        out << ",p_" << k;
    }
    out << '\n';
    for (const auto &r : record) {
        out << format_real(r.t) << ',' << format_real(reduce_phase(r.phase)) << ','
            << format_real(r.charge);
        for (double p : r.posterior) {
            out << ',' << format_real(p);
        }
        out << '\n';
    }
}

void write_batch_csv(std::ostream &out, const BatchStatistics &stats) {
    out << "ensemble,policy,n,mean_gain,std_gain,ci_half_width\n";
    out << stats.ensemble_label << ',' << to_string(stats.policy.kind) << ','
        << stats.n_trajectories << ',' << format_real(stats.mean_gain) << ','
        << (stats.std_gain ? format_real(*stats.std_gain) : "") << ','
        << (stats.ci_half_width ? format_real(*stats.ci_half_width) : "") << '\n';
}

std::string format_comparison_table(std::span<const PolicyComparison> rows) {
    constexpr int label_width = 22;
    constexpr int cell_width = 16;
    std::ostringstream os;
    os << std::fixed;

    auto interval = [](const BatchStatistics &s) {
        std::ostringstream cell;
        cell << std::fixed << std::setprecision(3) << s.mean_gain;
        if (s.ci_half_width) {
            cell << " +- " << *s.ci_half_width;
        }
        return cell.str();
    };

    os << std::left << std::setw(label_width) << "Ensemble";
    for (const auto &r : rows) {
        os << std::right << std::setw(cell_width) << r.ensemble_label;
    }
    os << '\n';
    auto numeric_row = [&](const char *label, auto getter, int precision) {
        os << std::left << std::setw(label_width) << label;
        for (const auto &r : rows) {
            os << std::right << std::setw(cell_width) << std::setprecision(precision) << getter(r);
        }
        os << '\n';
    };
    auto interval_row = [&](const char *label, auto getter) {
        os << std::left << std::setw(label_width) << label;
        for (const auto &r : rows) {
            os << std::right << std::setw(cell_width) << interval(getter(r));
        }
        os << '\n';
    };
    numeric_row("<n>", [](const PolicyComparison &r) { return r.mean_photons; }, 1);
    numeric_row("I1(<n>), bits", [](const PolicyComparison &r) { return r.heterodyne_limit; }, 3);
    numeric_row("chi(E), bits", [](const PolicyComparison &r) { return r.holevo; }, 3);
    interval_row("I_het, bits", [](const PolicyComparison &r) -> const BatchStatistics & {
        return r.heterodyne;
    });
    interval_row("I_wiseman, bits", [](const PolicyComparison &r) -> const BatchStatistics & {
        return r.wiseman;
    });
    interval_row("I_lmmi, bits",
                 [](const PolicyComparison &r) -> const BatchStatistics & { return r.lmmi; });
    return os.str();
}

} // namespace homodyne
