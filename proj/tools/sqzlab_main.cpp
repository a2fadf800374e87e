// sqzlab command-line driver: simulate | reconstruct | report | full | scan-phase
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sqzlab/config.hpp"
#include "sqzlab/errors.hpp"
#include "sqzlab/io.hpp"
#include "sqzlab/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sqzlab;

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::int64_t seed_override = -1;
  bool dry_run = false;
};

ExperimentConfig load_config(const CliOptions& opt) {
  ExperimentConfig cfg =
      opt.config_path.empty() ? ExperimentConfig{} : ExperimentConfig::load(opt.config_path);
  if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
  if (opt.seed_override >= 0)
    cfg.seeds = {static_cast<std::uint64_t>(opt.seed_override)};
  cfg.validate();
  return cfg;
}

std::string ensemble_path(const ExperimentConfig& cfg, Fringe fr, std::uint64_t seed) {
  return (fs::path(cfg.output_dir) /
          ("ensemble_" + std::string(fringe_name(fr)) + "_seed" + std::to_string(seed) + ".sqzf"))
      .string();
}

std::string recon_path(const ExperimentConfig& cfg, Fringe fr, std::uint64_t seed) {
  return (fs::path(cfg.output_dir) /
          ("recon_" + std::string(fringe_name(fr)) + "_seed" + std::to_string(seed) + ".json"))
      .string();
}

void ensure_out_dir(const ExperimentConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw DataError("cannot create output directory: " + cfg.output_dir);
}

int worker_count() {
  if (const char* env = std::getenv("SQZLAB_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

template <typename Job>
void run_jobs(const std::vector<Job>& jobs) {
  const int workers = std::min<int>(worker_count(), static_cast<int>(jobs.size()));
  if (workers <= 1) {
    for (const auto& j : jobs) j();
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < jobs.size(); i += workers) {
        try {
          jobs[i]();
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void cmd_simulate(const ExperimentConfig& cfg, bool dry_run, RunManifest& manifest) {
  std::vector<std::function<void()>> jobs;
  std::mutex manifest_mutex;
  for (std::uint64_t seed : cfg.seeds) {
    for (Fringe fr : {Fringe::Bright, Fringe::Dark, Fringe::AmplifiedVacuum}) {
      const std::string path = ensemble_path(cfg, fr, seed);
      if (dry_run) {
        std::cout << "would write " << path << "\n";
        continue;
      }
      jobs.emplace_back([&, fr, seed, path] {
        const InterferometerModel model = build_model(cfg, fr);
        const FrameEnsemble ens = acquire_ensemble(model, make_acquisition(cfg, fr, seed));
        write_ensemble(ens, path);
        std::lock_guard<std::mutex> lock(manifest_mutex);
        manifest.add_file(path);
        std::cout << "wrote " << path << "\n";
      });
    }
  }
  run_jobs(jobs);
}

void write_recon_json(const ExperimentConfig& cfg, const FrameEnsemble& ens,
                      const FringeReconstruction& rec, const std::string& path) {
  json j;
  j["fringe"] = fringe_name(ens.config.fringe);
  j["seed"] = ens.config.seed;
  j["n_frames"] = ens.n_frames();
  j["n_keep"] = cfg.n_keep;
  j["total_mean"] = rec.summary.total_mean;
  j["weights"] = std::vector<double>(rec.summary.weights.begin(), rec.summary.weights.end());
  j["residual"] = rec.aligned.residual;
  j["clamped_mass"] = rec.aligned.clamped_mass;
  j["negative_fraction"] = rec.aligned.negative_fraction;
  j["assignment"] = rec.alignment.assignment;
  j["alignment_ambiguous"] = rec.alignment.ambiguous;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << "\n";
}

void cmd_reconstruct(const ExperimentConfig& cfg, const std::vector<std::string>& files,
                     bool dry_run, RunManifest& manifest) {
  std::vector<std::string> inputs = files;
  if (inputs.empty())
    for (std::uint64_t seed : cfg.seeds)
      for (Fringe fr : {Fringe::Bright, Fringe::Dark, Fringe::AmplifiedVacuum})
        inputs.push_back(ensemble_path(cfg, fr, seed));

  for (const std::string& in_path : inputs) {
    if (dry_run) {
      std::cout << "would reconstruct " << in_path << "\n";
      continue;
    }
    const FrameEnsemble ens = read_ensemble(in_path);
    const AngularGrid expected = make_grid(cfg.theta_min, cfg.theta_max, cfg.n_points);
    if (!(ens.grid == expected))
      throw DataError("grid in " + in_path + " does not match the config");
    const InterferometerModel model = build_model(cfg, ens.config.fringe);
    const FringeReconstruction rec = reconstruct_fringe(ens, model, cfg.n_keep);
    const std::string out_path = recon_path(cfg, ens.config.fringe, ens.config.seed);
    write_recon_json(cfg, ens, rec, out_path);

    const std::string modes_path = out_path.substr(0, out_path.size() - 5) + "_modes.csv";
    export_matrix_csv(rec.aligned.modes, modes_path, "reconstructed modes, row per mode");
    manifest.add_file(out_path);
    manifest.add_file(modes_path);
    std::cout << "wrote " << out_path << "\n";
  }
}

FringeSummary read_recon_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("missing reconstruction file: " + path);
  json j;
  in >> j;
  FringeSummary s;
  const auto w = j.at("weights").get<std::vector<double>>();
  s.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
  const double sum = s.weights.sum();
  if (sum > 0.0) s.weights /= sum;
  s.total_mean = j.at("total_mean").get<double>();
  return s;
}

void cmd_report(const ExperimentConfig& cfg, bool dry_run, RunManifest& manifest) {
  if (dry_run) {
    std::cout << "would write report.json, report.csv, phase_scan.csv in "
              << cfg.output_dir << "\n";
    return;
  }
  const InterferometerModel model = build_model(cfg, Fringe::Bright);
  const std::vector<ModeTruth> truth = ground_truth_squeezing(model);

  std::vector<SqueezingReport> reports;
  for (std::uint64_t seed : cfg.seeds) {
    TripleDataset triple;
    for (Fringe fr : {Fringe::Bright, Fringe::Dark, Fringe::AmplifiedVacuum}) {
      const std::string path = recon_path(cfg, fr, seed);
      if (!fs::exists(path))
        throw DataError("incomplete triple for seed " + std::to_string(seed) +
                        ": missing " + std::string(fringe_name(fr)) + " fringe (" + path + ")");
      FringeSummary s = read_recon_summary(path);
      switch (fr) {
        case Fringe::Bright: triple.bright = std::move(s); break;
        case Fringe::Dark: triple.dark = std::move(s); break;
        case Fringe::AmplifiedVacuum: triple.vacuum = std::move(s); break;
      }
    }
    // Only the kept interferometer modes enter the ratio sums.
    triple.g = model.g.entries.leftCols(cfg.n_keep);
    reports.push_back(extract_squeezing(triple, cfg.vacuum_floor));
  }
  const SqueezingReport pooled = pool_reports(reports);

  // Flat CSV for Fig.-5 style plotting.
  const std::string csv_path = (fs::path(cfg.output_dir) / "report.csv").string();
  {
    std::ofstream out(csv_path);
    out << "mode,S_dB,S_err,AS_dB,AS_err,S_truth,AS_truth\n";
    char line[256];
    for (int l = 0; l < cfg.n_report && l < (int)pooled.modes.size(); ++l) {
      std::snprintf(line, sizeof(line), "%d,%.2f,%.2f,%.2f,%.2f,%.2f,%.2f\n", l,
                    pooled.modes[l].s_db, pooled.modes[l].s_err_db, pooled.modes[l].as_db,
                    pooled.modes[l].as_err_db, truth[l].s_db, truth[l].as_db);
      out << line;
    }
  }

  // Collinear phase scan, Fig.-2c analogue.
  const InterferometerModel collinear = build_collinear_model(cfg, Fringe::Bright);
  const QuadratureState sv = squeeze(vacuum_state(1), collinear.squeezer.spectrum);
  std::vector<double> phases(cfg.n_phases);
  for (int i = 0; i < cfg.n_phases; ++i) phases[i] = M_PI * i / (cfg.n_phases - 1);
  const PhaseScanResult scan = phase_scan(collinear, sv, phases);
  const std::string scan_path = (fs::path(cfg.output_dir) / "phase_scan.csv").string();
  {
    std::ofstream out(scan_path);
    out.precision(12);
    out << "phi,normalized_intensity\n";
    for (std::size_t i = 0; i < scan.phases.size(); ++i)
      out << scan.phases[i] << "," << scan.normalized[i] << "\n";
  }

  json j;
  j["config_hash"] = cfg.hash();
  j["visibility_collinear"] = scan.visibility;
  j["n_seeds"] = cfg.seeds.size();
  j["uncertainties_available"] = cfg.seeds.size() >= 2;
  j["modes"] = json::array();
  for (int l = 0; l < cfg.n_report && l < (int)pooled.modes.size(); ++l) {
    j["modes"].push_back({{"mode", l},
                          {"S_dB", pooled.modes[l].s_db},
                          {"S_err_dB", cfg.seeds.size() >= 2 ? json(pooled.modes[l].s_err_db) : json()},
                          {"AS_dB", pooled.modes[l].as_db},
                          {"AS_err_dB", cfg.seeds.size() >= 2 ? json(pooled.modes[l].as_err_db) : json()},
                          {"S_truth_dB", truth[l].s_db},
                          {"AS_truth_dB", truth[l].as_db},
                          {"measurable", pooled.modes[l].measurable}});
  }
  const std::string json_path = (fs::path(cfg.output_dir) / "report.json").string();
  std::ofstream out(json_path);
  out << j.dump(2) << "\n";
  out.close();

  manifest.add_file(csv_path);
  manifest.add_file(scan_path);
  manifest.add_file(json_path);
  std::cout << "wrote " << json_path << "\n";
}

void cmd_scan_phase(const ExperimentConfig& cfg, bool dry_run, RunManifest& manifest) {
  if (dry_run) {
    std::cout << "would write phase_scan.csv in " << cfg.output_dir << "\n";
    return;
  }
  const InterferometerModel collinear = build_collinear_model(cfg, Fringe::Bright);
  const QuadratureState sv = squeeze(vacuum_state(1), collinear.squeezer.spectrum);
  std::vector<double> phases(cfg.n_phases);
  for (int i = 0; i < cfg.n_phases; ++i) phases[i] = M_PI * i / (cfg.n_phases - 1);
  const PhaseScanResult scan = phase_scan(collinear, sv, phases);
  const std::string scan_path = (fs::path(cfg.output_dir) / "phase_scan.csv").string();
  std::ofstream out(scan_path);
  out.precision(12);
  out << "phi,normalized_intensity\n";
  for (std::size_t i = 0; i < scan.phases.size(); ++i)
    out << scan.phases[i] << "," << scan.normalized[i] << "\n";
  out.close();
  manifest.add_file(scan_path);
  std::cout << "visibility = " << scan.visibility << "\n";
  std::cout << "wrote " << scan_path << "\n";
}

void finalize_manifest(const ExperimentConfig& cfg, RunManifest& manifest,
                       std::chrono::steady_clock::time_point start, bool dry_run) {
  if (dry_run) return;
  manifest.config_hash = cfg.hash();
  manifest.tool_version = kToolVersion;
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest.write((fs::path(cfg.output_dir) / "manifest.json").string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimode squeezed-vacuum simulation and reconstruction laboratory"};
  app.require_subcommand(1);

  CliOptions opt;
  app.add_option("--config", opt.config_path, "Path to the experiment config file");
  app.add_option("--out", opt.out_dir, "Output directory (overrides config)");
  app.add_option("--seed-override", opt.seed_override, "Replace the seed list by one seed");
  app.add_flag("--dry-run", opt.dry_run, "Print the execution plan without writing");

  auto* sim = app.add_subcommand("simulate", "Generate frame ensembles for all seeds and fringes");
  auto* rec = app.add_subcommand("reconstruct", "Run the covariance/SVD reconstruction");
  std::vector<std::string> rec_files;
  rec->add_option("files", rec_files, "Ensemble files (defaults to the simulate layout)");
  auto* rep = app.add_subcommand("report", "Combine reconstructions into a squeezing report");
  auto* full = app.add_subcommand("full", "simulate + reconstruct + report");
  auto* scan = app.add_subcommand("scan-phase", "Analytic collinear phase scan");

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig cfg = load_config(opt);
    if (!opt.dry_run) ensure_out_dir(cfg);
    RunManifest manifest;
    const auto start = std::chrono::steady_clock::now();

    if (sim->parsed()) {
      cmd_simulate(cfg, opt.dry_run, manifest);
    } else if (rec->parsed()) {
      cmd_reconstruct(cfg, rec_files, opt.dry_run, manifest);
    } else if (rep->parsed()) {
      cmd_report(cfg, opt.dry_run, manifest);
    } else if (full->parsed()) {
      try {
        cmd_simulate(cfg, opt.dry_run, manifest);
      } catch (const std::exception& e) {
        throw DataError("stage simulate failed: " + std::string(e.what()));
      }
      try {
        cmd_reconstruct(cfg, {}, opt.dry_run, manifest);
      } catch (const DataError&) {
        throw;
      } catch (const std::exception& e) {
        throw DataError("stage reconstruct failed: " + std::string(e.what()));
      }
      cmd_report(cfg, opt.dry_run, manifest);
    } else if (scan->parsed()) {
      cmd_scan_phase(cfg, opt.dry_run, manifest);
    }
    finalize_manifest(cfg, manifest, start, opt.dry_run);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ConfigError::exit_code;
  } catch (const DegenerateDataError& e) {
    std::cerr << "degenerate data: " << e.what() << "\n";
    return DegenerateDataError::exit_code;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return DataError::exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
