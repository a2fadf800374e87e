#include "sqzlab/gaussian_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqzlab/errors.hpp"

namespace sqzlab {

Eigen::VectorXd SchmidtSpectrum::eigenvalues() const {
  return gains.unaryExpr([](double r) {
    const double s = std::sinh(r);
    return s * s;
  });
}

SchmidtSpectrum SchmidtSpectrum::geometric(double r0, double q, int n_modes) {
  if (r0 < 0.0 || q < 0.0 || q > 1.0)
    throw ConfigError("SchmidtSpectrum::geometric: need r0 >= 0 and q in [0,1]");
  if (n_modes < 1) throw ConfigError("SchmidtSpectrum::geometric: n_modes >= 1");
  SchmidtSpectrum s;
  s.gains.resize(n_modes);
  double r = r0;
  for (int n = 0; n < n_modes; ++n) {
    s.gains[n] = r;
    r *= q;
  }
  return s;
}

double calibrate_r0(double collinear_gain, double q, const ModeBasis& basis) {
  if (collinear_gain < 0.0) throw ConfigError("calibrate_r0: gain must be >= 0");
  if (collinear_gain == 0.0) return 0.0;

  const Eigen::VectorXd u0 = basis.central_values();
  const double ref = u0[0] * u0[0];
  if (ref <= 0.0) throw DegenerateDataError("calibrate_r0: mode 0 vanishes at theta = 0");

  auto total = [&](double r0) {
    double acc = 0.0;
    double r = r0;
    for (int n = 0; n < basis.n_modes(); ++n) {
      const double c = (u0[n] * u0[n]) / ref;
      const double s = std::sinh(r);
      acc += s * s * c;
      r *= q;
    }
    return acc;
  };

  const double s = std::sinh(collinear_gain);
  const double target = s * s;

  double lo = 0.0, hi = collinear_gain;
  // total(G) >= sinh^2(G) since c_0 = 1 and every term is non-negative.
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

QuadratureState vacuum_state(int n_modes) {
  if (n_modes < 1) throw ConfigError("vacuum_state: n_modes must be >= 1");
  QuadratureState st;
  st.var_q = Eigen::VectorXd::Constant(n_modes, kVacuumVariance);
  st.var_p = Eigen::VectorXd::Constant(n_modes, kVacuumVariance);
  return st;
}

QuadratureState squeeze(const QuadratureState& state, const SchmidtSpectrum& spectrum) {
  if (state.size() != spectrum.size())
    throw DimensionError("squeeze: state and spectrum length mismatch");
  QuadratureState out = state;
  for (int n = 0; n < state.size(); ++n) {
    const double g = std::exp(2.0 * spectrum.gains[n]);
    out.var_q[n] *= g;
    out.var_p[n] /= g;
  }
  return out;
}

QuadratureState apply_loss(const QuadratureState& state, double eta) {
  if (eta < 0.0 || eta > 1.0) throw ConfigError("apply_loss: eta must be in [0,1]");
  QuadratureState out;
  out.var_q = eta * state.var_q.array() + (1.0 - eta) * kVacuumVariance;
  out.var_p = eta * state.var_p.array() + (1.0 - eta) * kVacuumVariance;
  return out;
}

const char* fringe_name(Fringe f) {
  switch (f) {
    case Fringe::Bright: return "bright";
    case Fringe::Dark: return "dark";
    case Fringe::AmplifiedVacuum: return "vacuum";
  }
  return "?";
}

Fringe fringe_from_name(const std::string& name) {
  if (name == "bright") return Fringe::Bright;
  if (name == "dark") return Fringe::Dark;
  if (name == "vacuum") return Fringe::AmplifiedVacuum;
  throw ConfigError("unknown fringe name: " + name);
}

QuadratureState map_through_overlap(const QuadratureState& state, const OverlapMatrix& g) {
  if (state.size() != g.entries.rows())
    throw DimensionError("map_through_overlap: state length does not match g rows");
  const Eigen::MatrixXd g2 = g.entries.cwiseProduct(g.entries);
  QuadratureState out;
  // Weight that g truncates away enters as vacuum.
  const Eigen::VectorXd deficit =
      kVacuumVariance * g.col_deficit.cwiseMax(Eigen::VectorXd::Zero(g2.cols()));
  out.var_q = g2.transpose() * state.var_q + deficit;
  out.var_p = g2.transpose() * state.var_p + deficit;
  return out;
}

namespace {

QuadratureState amplify(const QuadratureState& in, const SchmidtSpectrum& spectrum,
                        Fringe fringe) {
  // Bright fringe (and amplified vacuum) amplifies Q; dark fringe amplifies P.
  const SchmidtSpectrum& s = spectrum;
  if (fringe == Fringe::Dark) {
    QuadratureState flipped{in.var_p, in.var_q};
    QuadratureState amp = squeeze(flipped, s);
    return QuadratureState{amp.var_p, amp.var_q};
  }
  return squeeze(in, s);
}

}  // namespace

QuadratureState amplifier_input(const InterferometerModel& model) {
  if (model.fringe == Fringe::AmplifiedVacuum)
    return vacuum_state(model.amplifier.spectrum.size());
  const QuadratureState sq =
      squeeze(vacuum_state(model.squeezer.spectrum.size()), model.squeezer.spectrum);
  return map_through_overlap(apply_loss(sq, model.loss_eta), model.g);
}

QuadratureState propagate_quadratures(const InterferometerModel& model,
                                      const QuadratureState& input) {
  if (model.fringe == Fringe::AmplifiedVacuum) {
    return amplify(vacuum_state(model.amplifier.spectrum.size()),
                   model.amplifier.spectrum, Fringe::Bright);
  }
  const QuadratureState lossy = apply_loss(input, model.loss_eta);
  const QuadratureState mapped = map_through_overlap(lossy, model.g);
  return amplify(mapped, model.amplifier.spectrum, model.fringe);
}

QuadratureState interferometer_output(const InterferometerModel& model) {
  if (model.fringe == Fringe::AmplifiedVacuum)
    return propagate_quadratures(model, vacuum_state(model.amplifier.spectrum.size()));
  const QuadratureState sq =
      squeeze(vacuum_state(model.squeezer.spectrum.size()), model.squeezer.spectrum);
  return propagate_quadratures(model, sq);
}

Eigen::VectorXd opa_mean_photons(const QuadratureState& state,
                                 const SchmidtSpectrum& spectrum, double phi) {
  if (state.size() != spectrum.size())
    throw DimensionError("opa_mean_photons: state and spectrum length mismatch");
  const double c2 = std::cos(phi) * std::cos(phi);
  const double s2 = std::sin(phi) * std::sin(phi);
  Eigen::VectorXd n(state.size());
  for (int i = 0; i < state.size(); ++i) {
    const double vq = c2 * state.var_q[i] + s2 * state.var_p[i];
    const double vp = s2 * state.var_q[i] + c2 * state.var_p[i];
    const double g = std::exp(2.0 * spectrum.gains[i]);
    n[i] = g * vq + vp / g - 0.5;
  }
  return n;
}

PhaseScanResult phase_scan(const InterferometerModel& model, const QuadratureState& input,
                           const std::vector<double>& phases) {
  if (phases.empty()) throw ConfigError("phase_scan: phase list is empty");

  const QuadratureState at_amp =
      map_through_overlap(apply_loss(input, model.loss_eta), model.g);
  const QuadratureState vac = vacuum_state(model.amplifier.spectrum.size());

  PhaseScanResult res;
  res.phases = phases;
  res.normalized.reserve(phases.size());
  for (double phi : phases) {
    const double tot = opa_mean_photons(at_amp, model.amplifier.spectrum, phi).sum();
    const double ref = opa_mean_photons(vac, model.amplifier.spectrum, phi).sum();
    res.normalized.push_back(tot / ref);
  }
  res.minimum = *std::min_element(res.normalized.begin(), res.normalized.end());
  res.maximum = *std::max_element(res.normalized.begin(), res.normalized.end());
  res.visibility = (res.maximum - res.minimum) / (res.maximum + res.minimum);
  return res;
}

std::vector<ModeTruth> ground_truth_squeezing(const InterferometerModel& model) {
  const QuadratureState sq =
      squeeze(vacuum_state(model.squeezer.spectrum.size()), model.squeezer.spectrum);
  const QuadratureState lossy = apply_loss(sq, model.loss_eta);
  std::vector<ModeTruth> out(lossy.size());
  for (int l = 0; l < lossy.size(); ++l) {
    out[l].s_db = 10.0 * std::log10(lossy.var_p[l] / kVacuumVariance);
    out[l].as_db = 10.0 * std::log10(lossy.var_q[l] / kVacuumVariance);
  }
  return out;
}

ModeTruth collinear_squeezing(double gain, double eta) {
  ModeTruth t;
  t.s_db = 10.0 * std::log10(eta * std::exp(-2.0 * gain) + (1.0 - eta));
  t.as_db = 10.0 * std::log10(eta * std::exp(2.0 * gain) + (1.0 - eta));
  return t;
}

}  // namespace sqzlab
