#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sqzlab/errors.hpp"
#include "sqzlab/io.hpp"
#include "sqzlab/pipeline.hpp"

namespace py = pybind11;
using namespace sqzlab;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multimode squeezed-light laboratory core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<DegenerateDataError>(m, "DegenerateDataError",
                                              PyExc_RuntimeError);

  py::enum_<Fringe>(m, "Fringe")
      .value("bright", Fringe::Bright)
      .value("dark", Fringe::Dark)
      .value("vacuum", Fringe::AmplifiedVacuum);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("theta_min", &ExperimentConfig::theta_min)
      .def_readwrite("theta_max", &ExperimentConfig::theta_max)
      .def_readwrite("n_points", &ExperimentConfig::n_points)
      .def_readwrite("squeezer_gain", &ExperimentConfig::squeezer_gain)
      .def_readwrite("squeezer_gain_stripe", &ExperimentConfig::squeezer_gain_stripe)
      .def_readwrite("amplifier_gain", &ExperimentConfig::amplifier_gain)
      .def_readwrite("n_simulate", &ExperimentConfig::n_simulate)
      .def_readwrite("n_keep", &ExperimentConfig::n_keep)
      .def_readwrite("n_report", &ExperimentConfig::n_report)
      .def_readwrite("eta_pre", &ExperimentConfig::eta_pre)
      .def_readwrite("eta_detect", &ExperimentConfig::eta_detect)
      .def_readwrite("n_frames", &ExperimentConfig::n_frames)
      .def_readwrite("seeds", &ExperimentConfig::seeds)
      .def_readwrite("pump_rel_std", &ExperimentConfig::pump_rel_std)
      .def_readwrite("shot_noise", &ExperimentConfig::shot_noise)
      .def_readwrite("n_phases", &ExperimentConfig::n_phases)
      .def_readwrite("output_dir", &ExperimentConfig::output_dir)
      .def("validate", &ExperimentConfig::validate)
      .def("serialize", &ExperimentConfig::serialize)
      .def("hash", &ExperimentConfig::hash)
      .def_static("parse", &ExperimentConfig::parse)
      .def_static("load", &ExperimentConfig::load);

  py::class_<AngularGrid>(m, "AngularGrid")
      .def_readonly("theta_min", &AngularGrid::theta_min)
      .def_readonly("theta_max", &AngularGrid::theta_max)
      .def_readonly("n_points", &AngularGrid::n_points)
      .def("spacing", &AngularGrid::spacing);

  py::class_<ModeBasis>(m, "ModeBasis")
      .def_readonly("modes", &ModeBasis::modes)
      .def_readonly("sigma", &ModeBasis::sigma)
      .def_readonly("grid", &ModeBasis::grid);

  py::class_<InterferometerModel>(m, "InterferometerModel")
      .def_property_readonly(
          "g", [](const InterferometerModel& mdl) { return mdl.g.entries; })
      .def_property_readonly(
          "squeezer_basis",
          [](const InterferometerModel& mdl) { return mdl.squeezer.basis; })
      .def_property_readonly(
          "amplifier_basis",
          [](const InterferometerModel& mdl) { return mdl.amplifier.basis; })
      .def_readonly("loss_eta", &InterferometerModel::loss_eta)
      .def_readonly("fringe", &InterferometerModel::fringe);

  py::class_<FrameEnsemble>(m, "FrameEnsemble")
      .def_readonly("frames", &FrameEnsemble::frames)
      .def_readonly("grid", &FrameEnsemble::grid)
      .def("total_mean", &FrameEnsemble::total_mean);

  py::class_<ModeReconstruction>(m, "ModeReconstruction")
      .def_readonly("weights", &ModeReconstruction::weights)
      .def_readonly("modes", &ModeReconstruction::modes)
      .def_readonly("residual", &ModeReconstruction::residual)
      .def_readonly("clamped_mass", &ModeReconstruction::clamped_mass);

  py::class_<FringeReconstruction>(m, "FringeReconstruction")
      .def_property_readonly(
          "weights",
          [](const FringeReconstruction& r) { return r.summary.weights; })
      .def_property_readonly(
          "total_mean",
          [](const FringeReconstruction& r) { return r.summary.total_mean; })
      .def_readonly("aligned", &FringeReconstruction::aligned);

  py::class_<ModeSqueezing>(m, "ModeSqueezing")
      .def_readonly("s_db", &ModeSqueezing::s_db)
      .def_readonly("as_db", &ModeSqueezing::as_db)
      .def_readonly("s_err_db", &ModeSqueezing::s_err_db)
      .def_readonly("as_err_db", &ModeSqueezing::as_err_db)
      .def_readonly("measurable", &ModeSqueezing::measurable);

  py::class_<SqueezingReport>(m, "SqueezingReport")
      .def_readonly("modes", &SqueezingReport::modes);

  py::class_<ModeTruth>(m, "ModeTruth")
      .def_readonly("s_db", &ModeTruth::s_db)
      .def_readonly("as_db", &ModeTruth::as_db);

  py::class_<PhaseScanResult>(m, "PhaseScanResult")
      .def_readonly("phases", &PhaseScanResult::phases)
      .def_readonly("normalized", &PhaseScanResult::normalized)
      .def_readonly("minimum", &PhaseScanResult::minimum)
      .def_readonly("maximum", &PhaseScanResult::maximum)
      .def_readonly("visibility", &PhaseScanResult::visibility);

  py::class_<FullAnalysis>(m, "FullAnalysis")
      .def_readonly("pooled", &FullAnalysis::pooled)
      .def_readonly("per_seed", &FullAnalysis::per_seed)
      .def_readonly("truth", &FullAnalysis::truth)
      .def_readonly("collinear_scan", &FullAnalysis::collinear_scan);

  m.def("build_model", &build_model, py::arg("config"), py::arg("fringe"));
  m.def("build_collinear_model", &build_collinear_model, py::arg("config"),
        py::arg("fringe"));
  m.def(
      "acquire_ensemble",
      [](const InterferometerModel& model, const ExperimentConfig& cfg,
         Fringe fringe, std::uint64_t seed) {
        return acquire_ensemble(model, make_acquisition(cfg, fringe, seed));
      },
      py::arg("model"), py::arg("config"), py::arg("fringe"), py::arg("seed"),
      py::call_guard<py::gil_scoped_release>());
  m.def("reconstruct_fringe", &reconstruct_fringe, py::arg("ensemble"),
        py::arg("model"), py::arg("n_keep"),
        py::call_guard<py::gil_scoped_release>());
  m.def("analyze_seed", &analyze_seed, py::arg("config"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_full_analysis", &run_full_analysis, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());
  m.def("ground_truth_squeezing", &ground_truth_squeezing, py::arg("model"));
  m.def("collinear_squeezing", &collinear_squeezing, py::arg("gain"), py::arg("eta"));
  m.def("mode_photon_numbers", &mode_photon_numbers, py::arg("model"));
  m.def(
      "phase_scan",
      [](const InterferometerModel& model, const std::vector<double>& phases) {
        const QuadratureState sv =
            squeeze(vacuum_state(model.squeezer.spectrum.size()),
                    model.squeezer.spectrum);
        return phase_scan(model, sv, phases);
      },
      py::arg("model"), py::arg("phases"));
  m.def("write_ensemble", &write_ensemble, py::arg("ensemble"), py::arg("path"));
  m.def("read_ensemble", &read_ensemble, py::arg("path"));
}
