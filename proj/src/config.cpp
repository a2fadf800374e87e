#include "sqzlab/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sqzlab/errors.hpp"

namespace sqzlab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "': not a number: '" + v + "'");
  }
}

int to_int(const std::string& v, const std::string& key, int line) {
  const double d = to_double(v, key, line);
  const int i = static_cast<int>(std::llround(d));
  if (d != double(i))
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "': not an integer: '" + v + "'");
  return i;
}

bool to_bool(const std::string& v, const std::string& key, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                    "': not a bool: '" + v + "'");
}

std::vector<std::uint64_t> to_seed_list(const std::string& v, const std::string& key,
                                        int line) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                        "': bad seed '" + item + "'");
    }
  }
  if (out.empty())
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "': empty seed list");
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(theta_min < theta_max)) throw ConfigError("grid: theta_min must be < theta_max");
  if (n_points < 2) throw ConfigError("grid: n_points must be >= 2");
  using P = std::pair<double, const char*>;
  for (P it : {P{squeezer_gain, "squeezer.gain"}, P{squeezer_gain_stripe, "squeezer.gain_stripe"},
               P{amplifier_gain, "amplifier.gain"}})
    if (it.first < 0.0) throw ConfigError(std::string(it.second) + " must be >= 0");
  for (P it : {P{squeezer_sigma0, "squeezer.sigma0"}, P{amplifier_sigma0, "amplifier.sigma0"}})
    if (it.first <= 0.0) throw ConfigError(std::string(it.second) + " must be > 0");
  for (P it : {P{squeezer_width_c, "squeezer.width_c"}, P{amplifier_width_c, "amplifier.width_c"}})
    if (it.first < 0.0) throw ConfigError(std::string(it.second) + " must be >= 0");
  for (P it : {P{squeezer_decay_q, "squeezer.decay_q"}, P{amplifier_decay_q, "amplifier.decay_q"}})
    if (it.first < 0.0 || it.first > 1.0)
      throw ConfigError(std::string(it.second) + " must be in [0,1]");
  if (n_simulate < 1) throw ConfigError("modes.n_simulate must be >= 1");
  if (n_keep < 1 || n_keep > n_simulate)
    throw ConfigError("modes.n_keep must be in [1, n_simulate]");
  if (n_report < 1 || n_report > n_keep)
    throw ConfigError("modes.n_report must be in [1, n_keep]");
  for (P it : {P{eta_pre, "loss.eta_pre"}, P{eta_detect, "loss.eta_detect"}})
    if (it.first < 0.0 || it.first > 1.0)
      throw ConfigError(std::string(it.second) + " must be in [0,1]");
  if (n_frames < 2) throw ConfigError("acquisition.n_frames must be >= 2");
  if (seeds.empty()) throw ConfigError("acquisition.seeds must be non-empty");
  if (pump_rel_std < 0.0) throw ConfigError("acquisition.pump_rel_std must be >= 0");
  if (n_phases < 2) throw ConfigError("scan.n_phases must be >= 2");
  if (vacuum_floor < 0.0) throw ConfigError("analysis.vacuum_floor must be >= 0");
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream out;
  out.precision(17);
  out << "[grid]\n"
      << "theta_min = " << theta_min << "\n"
      << "theta_max = " << theta_max << "\n"
      << "n_points = " << n_points << "\n\n"
      << "[squeezer]\n"
      << "gain = " << squeezer_gain << "\n"
      << "gain_stripe = " << squeezer_gain_stripe << "\n"
      << "sigma0 = " << squeezer_sigma0 << "\n"
      << "width_c = " << squeezer_width_c << "\n"
      << "decay_q = " << squeezer_decay_q << "\n\n"
      << "[amplifier]\n"
      << "gain = " << amplifier_gain << "\n"
      << "sigma0 = " << amplifier_sigma0 << "\n"
      << "width_c = " << amplifier_width_c << "\n"
      << "decay_q = " << amplifier_decay_q << "\n\n"
      << "[modes]\n"
      << "n_simulate = " << n_simulate << "\n"
      << "n_keep = " << n_keep << "\n"
      << "n_report = " << n_report << "\n\n"
      << "[loss]\n"
      << "eta_pre = " << eta_pre << "\n"
      << "eta_detect = " << eta_detect << "\n\n"
      << "[acquisition]\n"
      << "n_frames = " << n_frames << "\n"
      << "seeds = ";
  for (std::size_t i = 0; i < seeds.size(); ++i) out << (i ? "," : "") << seeds[i];
  out << "\n"
      << "pump_rel_std = " << pump_rel_std << "\n"
      << "shot_noise = " << (shot_noise ? "true" : "false") << "\n\n"
      << "[scan]\n"
      << "n_phases = " << n_phases << "\n\n"
      << "[output]\n"
      << "directory = " << output_dir << "\n\n"
      << "[analysis]\n"
      << "use_full_h = " << (use_full_h ? "true" : "false") << "\n"
      << "vacuum_floor = " << vacuum_floor << "\n";
  return out.str();
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t ExperimentConfig::hash() const {
  const std::string s = serialize();
  return fnv1a64(s.data(), s.size());
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  using Setter = std::function<void(ExperimentConfig&, const std::string&, int)>;
  static const std::map<std::string, Setter> schema = {
      {"grid.theta_min", [](auto& c, const auto& v, int ln) { c.theta_min = to_double(v, "theta_min", ln); }},
      {"grid.theta_max", [](auto& c, const auto& v, int ln) { c.theta_max = to_double(v, "theta_max", ln); }},
      {"grid.n_points", [](auto& c, const auto& v, int ln) { c.n_points = to_int(v, "n_points", ln); }},
      {"squeezer.gain", [](auto& c, const auto& v, int ln) { c.squeezer_gain = to_double(v, "gain", ln); }},
      {"squeezer.gain_stripe", [](auto& c, const auto& v, int ln) { c.squeezer_gain_stripe = to_double(v, "gain_stripe", ln); }},
      {"squeezer.sigma0", [](auto& c, const auto& v, int ln) { c.squeezer_sigma0 = to_double(v, "sigma0", ln); }},
      {"squeezer.width_c", [](auto& c, const auto& v, int ln) { c.squeezer_width_c = to_double(v, "width_c", ln); }},
      {"squeezer.decay_q", [](auto& c, const auto& v, int ln) { c.squeezer_decay_q = to_double(v, "decay_q", ln); }},
      {"amplifier.gain", [](auto& c, const auto& v, int ln) { c.amplifier_gain = to_double(v, "gain", ln); }},
      {"amplifier.sigma0", [](auto& c, const auto& v, int ln) { c.amplifier_sigma0 = to_double(v, "sigma0", ln); }},
      {"amplifier.width_c", [](auto& c, const auto& v, int ln) { c.amplifier_width_c = to_double(v, "width_c", ln); }},
      {"amplifier.decay_q", [](auto& c, const auto& v, int ln) { c.amplifier_decay_q = to_double(v, "decay_q", ln); }},
      {"modes.n_simulate", [](auto& c, const auto& v, int ln) { c.n_simulate = to_int(v, "n_simulate", ln); }},
      {"modes.n_keep", [](auto& c, const auto& v, int ln) { c.n_keep = to_int(v, "n_keep", ln); }},
      {"modes.n_report", [](auto& c, const auto& v, int ln) { c.n_report = to_int(v, "n_report", ln); }},
      {"loss.eta_pre", [](auto& c, const auto& v, int ln) { c.eta_pre = to_double(v, "eta_pre", ln); }},
      {"loss.eta_detect", [](auto& c, const auto& v, int ln) { c.eta_detect = to_double(v, "eta_detect", ln); }},
      {"acquisition.n_frames", [](auto& c, const auto& v, int ln) { c.n_frames = to_int(v, "n_frames", ln); }},
      {"acquisition.seeds", [](auto& c, const auto& v, int ln) { c.seeds = to_seed_list(v, "seeds", ln); }},
      {"acquisition.pump_rel_std", [](auto& c, const auto& v, int ln) { c.pump_rel_std = to_double(v, "pump_rel_std", ln); }},
      {"acquisition.shot_noise", [](auto& c, const auto& v, int ln) { c.shot_noise = to_bool(v, "shot_noise", ln); }},
      {"scan.n_phases", [](auto& c, const auto& v, int ln) { c.n_phases = to_int(v, "n_phases", ln); }},
      {"output.directory", [](auto& c, const auto& v, int) { c.output_dir = v; }},
      {"analysis.use_full_h", [](auto& c, const auto& v, int ln) { c.use_full_h = to_bool(v, "use_full_h", ln); }},
      {"analysis.vacuum_floor", [](auto& c, const auto& v, int ln) { c.vacuum_floor = to_double(v, "vacuum_floor", ln); }},
  };

  std::istringstream in(text);
  std::string line, section;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(ln) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(ln) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    const auto it = schema.find(full);
    if (it == schema.end())
      throw ConfigError("line " + std::to_string(ln) + ": unknown key '" + full + "'");
    it->second(cfg, value, ln);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::uint64_t checksum_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open for checksum: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
    h = fnv1a64(buf, static_cast<std::size_t>(in.gcount()), h);
  return h;
}

void RunManifest::add_file(const std::string& path) {
  ManifestEntry e;
  e.path = path;
  e.checksum = checksum_file(path);
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  e.bytes = static_cast<std::uint64_t>(in.tellg());
  artifacts.push_back(std::move(e));
}

void RunManifest::write(const std::string& path) const {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["tool_version"] = tool_version;
  j["wall_seconds"] = wall_seconds;
  j["artifacts"] = nlohmann::json::array();
  for (const auto& a : artifacts)
    j["artifacts"].push_back({{"path", a.path}, {"checksum", a.checksum}, {"bytes", a.bytes}});
  std::ofstream out(path);
  if (!out) throw DataError("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
}

bool RunManifest::verify(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open manifest: " + manifest_path);
  nlohmann::json j;
  in >> j;
  for (const auto& a : j.at("artifacts"))
    if (checksum_file(a.at("path").get<std::string>()) != a.at("checksum").get<std::uint64_t>())
      return false;
  return true;
}

}  // namespace sqzlab
