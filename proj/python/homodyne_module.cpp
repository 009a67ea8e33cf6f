// Python bindings for the homodyne core library.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "homodyne/ensemble.hpp"
#include "homodyne/information.hpp"
#include "homodyne/io.hpp"
#include "homodyne/montecarlo.hpp"
#include "homodyne/policy.hpp"
#include "homodyne/povm.hpp"
#include "homodyne/trajectory.hpp"

namespace py = pybind11;
using namespace homodyne;

namespace {

Ensemble make_ensemble(const std::string &label, const std::vector<double> &priors,
                       const std::vector<CoherentAmplitude> &amplitudes) {
    if (priors.size() != amplitudes.size()) {
        throw std::invalid_argument("priors and amplitudes differ in length");
    }
    std::vector<EnsembleEntry> entries;
    entries.reserve(priors.size());
    for (std::size_t k = 0; k < priors.size(); ++k) {
        entries.push_back({priors[k], amplitudes[k]});
    }
    return Ensemble(label, std::move(entries));
}

} // namespace

PYBIND11_MODULE(_homodyne, m) {
    m.doc() = "Adaptive homodyne detection of coherent-state ensembles";

    py::class_<Ensemble>(m, "Ensemble")
        .def(py::init(&make_ensemble), py::arg("label"), py::arg("priors"), py::arg("amplitudes"))
        .def_property_readonly("label", &Ensemble::label)
        .def_property_readonly("priors", &Ensemble::priors)
        .def_property_readonly("amplitudes", &Ensemble::amplitudes)
        .def("__len__", &Ensemble::size)
        .def("__repr__", [](const Ensemble &e) {
            return "<Ensemble '" + e.label() + "' with " + std::to_string(e.size()) + " states>";
        });

    m.def("make_psk", &make_psk, py::arg("m"), py::arg("amplitude"));
    m.def("make_qam16", &make_qam16);
    m.def("make_star", &make_star);
    m.def("make_builtin", &make_builtin, py::arg("name"));
    m.def("load_ensemble_file", &load_ensemble_file, py::arg("path"));
    m.def("ensemble_to_json",
          [](const Ensemble &e) { return ensemble_to_json(e).dump(); }, py::arg("ensemble"));
    m.def("rotated", &rotated, py::arg("ensemble"), py::arg("theta"));
    m.def("mean_photon_number", &mean_photon_number, py::arg("ensemble"));

    m.def("shannon_entropy", [](const std::vector<double> &p) { return shannon_entropy(p); },
          py::arg("p"));
    m.def("capacity_heterodyne", &capacity_heterodyne, py::arg("mean_photons"));
    m.def("capacity_homodyne_squeezed", &capacity_homodyne_squeezed, py::arg("mean_photons"));
    m.def("capacity_holevo_bound", &capacity_holevo_bound, py::arg("mean_photons"));
    m.def("holevo_information", &holevo_information, py::arg("ensemble"), py::arg("n_max") = 100,
          py::call_guard<py::gil_scoped_release>());

    py::enum_<PolicyKind>(m, "PolicyKind")
        .value("heterodyne", PolicyKind::heterodyne)
        .value("wiseman", PolicyKind::wiseman)
        .value("lmmi", PolicyKind::lmmi)
        .value("fixed", PolicyKind::fixed);

    py::class_<PolicySpec>(m, "PolicySpec")
        .def(py::init<>())
        .def_readwrite("kind", &PolicySpec::kind)
        .def_readwrite("heterodyne_step", &PolicySpec::heterodyne_step)
        .def_readwrite("wiseman_initial_phase", &PolicySpec::wiseman_initial_phase)
        .def_readwrite("fixed_phase", &PolicySpec::fixed_phase)
        .def_static("heterodyne", &PolicySpec::heterodyne, py::arg("step") = 0.1)
        .def_static("wiseman", &PolicySpec::wiseman, py::arg("initial_phase") = 0.0)
        .def_static("lmmi", &PolicySpec::lmmi)
        .def_static("fixed", &PolicySpec::fixed, py::arg("phase"))
        .def_static("parse", [](const std::string &name) {
            PolicySpec spec;
            spec.kind = parse_policy_kind(name);
            return spec;
        });

    m.def("lmmi_phase",
          [](const std::vector<double> &posterior, const Ensemble &e, double fallback) {
              return lmmi_phase(posterior, e, fallback);
          },
          py::arg("posterior"), py::arg("ensemble"), py::arg("fallback") = 0.0);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init([](double dt, double t_max, std::uint64_t seed) {
                 SimConfig cfg;
                 cfg.dt = dt;
                 cfg.t_max = t_max;
                 cfg.seed = seed;
                 cfg.validate();
                 return cfg;
             }),
             py::arg("dt") = 5e-3, py::arg("t_max") = 10.0, py::arg("seed") = 0)
        .def_readwrite("dt", &SimConfig::dt)
        .def_readwrite("t_max", &SimConfig::t_max)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("log_record", &SimConfig::log_record)
        .def_property_readonly("steps", &SimConfig::steps);

    m.def("bayes_update",
          [](const std::vector<double> &posterior, double charge, const Ensemble &e, double phase,
             double t, double dt) { return bayes_update(posterior, charge, e, phase, t, dt); },
          py::arg("posterior"), py::arg("charge"), py::arg("ensemble"), py::arg("phase"),
          py::arg("t"), py::arg("dt"));

    py::class_<RecordEntry>(m, "RecordEntry")
        .def_readonly("t", &RecordEntry::t)
        .def_readonly("phase", &RecordEntry::phase)
        .def_readonly("charge", &RecordEntry::charge)
        .def_readonly("posterior", &RecordEntry::posterior);

    py::class_<TrajectoryResult>(m, "TrajectoryResult")
        .def_readonly("true_index", &TrajectoryResult::true_index)
        .def_readonly("total_gain", &TrajectoryResult::total_gain)
        .def_readonly("initial_entropy", &TrajectoryResult::initial_entropy)
        .def_readonly("final_entropy", &TrajectoryResult::final_entropy)
        .def_readonly("final_posterior", &TrajectoryResult::final_posterior)
        .def_readonly("projector_a", &TrajectoryResult::projector_a)
        .def_readonly("projector_b", &TrajectoryResult::projector_b)
        .def_readonly("record", &TrajectoryResult::record);

    m.def("run_trajectory",
          [](const Ensemble &e, std::size_t index, const PolicySpec &policy, const SimConfig &cfg,
             std::uint64_t seed) {
              Rng rng(seed);
              return run_trajectory(e, index, policy, cfg, rng);
          },
          py::arg("ensemble"), py::arg("true_index"), py::arg("policy"), py::arg("config"),
          py::arg("seed"), py::call_guard<py::gil_scoped_release>());

    py::class_<BatchStatistics>(m, "BatchStatistics")
        .def_readonly("n_trajectories", &BatchStatistics::n_trajectories)
        .def_readonly("mean_gain", &BatchStatistics::mean_gain)
        .def_readonly("std_gain", &BatchStatistics::std_gain)
        .def_readonly("ci_half_width", &BatchStatistics::ci_half_width)
        .def_readonly("per_symbol_counts", &BatchStatistics::per_symbol_counts)
        .def_readonly("per_symbol_means", &BatchStatistics::per_symbol_means)
        .def_readonly("ensemble_label", &BatchStatistics::ensemble_label)
        .def_readonly("policy", &BatchStatistics::policy)
        .def_readonly("config", &BatchStatistics::config)
        .def("to_json", [](const BatchStatistics &s) { return to_json(s).dump(); });

    m.def("run_batch",
          [](const Ensemble &e, const PolicySpec &policy, const SimConfig &cfg, std::size_t n,
             std::size_t workers, bool crn) {
              return run_batch(e, policy, cfg, n,
                               {.workers = workers, .common_random_numbers = crn});
          },
          py::arg("ensemble"), py::arg("policy"), py::arg("config"), py::arg("n"),
          py::arg("workers") = 1, py::arg("crn") = false, py::call_guard<py::gil_scoped_release>());

    m.def("check_batch_invariants", &check_batch_invariants, py::arg("stats"),
          py::arg("ensemble"));

    py::class_<PolicyComparison>(m, "PolicyComparison")
        .def_readonly("ensemble_label", &PolicyComparison::ensemble_label)
        .def_readonly("mean_photons", &PolicyComparison::mean_photons)
        .def_readonly("heterodyne_limit", &PolicyComparison::heterodyne_limit)
        .def_readonly("holevo", &PolicyComparison::holevo)
        .def_readonly("heterodyne", &PolicyComparison::heterodyne)
        .def_readonly("wiseman", &PolicyComparison::wiseman)
        .def_readonly("lmmi", &PolicyComparison::lmmi);

    m.def("compare_policies",
          [](const Ensemble &e, const SimConfig &cfg, std::size_t n, std::size_t workers,
             std::size_t fock_nmax) {
              return compare_policies(e, cfg, n, {.workers = workers}, fock_nmax);
          },
          py::arg("ensemble"), py::arg("config"), py::arg("n"), py::arg("workers") = 1,
          py::arg("fock_nmax") = 100, py::call_guard<py::gil_scoped_release>());

    m.def("format_comparison_table", [](const std::vector<PolicyComparison> &rows) {
        return format_comparison_table(rows);
    });

    py::class_<PovmProjector>(m, "PovmProjector")
        .def_readonly("alpha", &PovmProjector::alpha)
        .def_readonly("xi", &PovmProjector::xi);

    py::class_<WignerEllipse>(m, "WignerEllipse")
        .def_readonly("center_x", &WignerEllipse::center_x)
        .def_readonly("center_y", &WignerEllipse::center_y)
        .def_readonly("semi_major", &WignerEllipse::semi_major)
        .def_readonly("semi_minor", &WignerEllipse::semi_minor)
        .def_readonly("orientation", &WignerEllipse::orientation);

    py::class_<PovmSample>(m, "PovmSample")
        .def_readonly("true_index", &PovmSample::true_index)
        .def_readonly("projector", &PovmSample::projector)
        .def_readonly("ellipse", &PovmSample::ellipse);

    m.def("projector_params", &projector_params, py::arg("a"), py::arg("b"));
    m.def("wigner_ellipse", &wigner_ellipse, py::arg("projector"));
    m.def("sample_povm", &sample_povm, py::arg("ensemble"), py::arg("policy"), py::arg("config"),
          py::arg("n_samples"), py::arg("workers") = 1, py::arg("crn") = false,
          py::call_guard<py::gil_scoped_release>());
}
