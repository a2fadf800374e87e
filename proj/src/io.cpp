#include "sqzlab/io.hpp"

#include <cstring>
#include <fstream>

#include "sqzlab/config.hpp"
#include "sqzlab/errors.hpp"

namespace sqzlab {

namespace {

constexpr char kMagic[4] = {'S', 'Q', 'Z', 'F'};

#pragma pack(push, 1)
struct EnsembleHeader {
  char magic[4];
  std::uint32_t version;
  std::uint32_t n_frames;
  std::uint32_t n_points;
  double theta_min;
  double theta_max;
  std::uint8_t fringe;
  double detection_eta;
  double pump_rel_std;
  std::uint64_t seed;
  std::uint8_t shot_noise;
  std::uint64_t payload_checksum;
};
#pragma pack(pop)

}  // namespace

void write_ensemble(const FrameEnsemble& ensemble, const std::string& path) {
  // Row-major payload regardless of Eigen's internal layout.
  const int nf = ensemble.n_frames(), np = ensemble.n_points();
  std::vector<double> payload(static_cast<std::size_t>(nf) * np);
  for (int r = 0; r < nf; ++r)
    for (int c = 0; c < np; ++c)
      payload[static_cast<std::size_t>(r) * np + c] = ensemble.frames(r, c);

  EnsembleHeader hdr{};
  std::memcpy(hdr.magic, kMagic, 4);
  hdr.version = kEnsembleFormatVersion;
  hdr.n_frames = static_cast<std::uint32_t>(nf);
  hdr.n_points = static_cast<std::uint32_t>(np);
  hdr.theta_min = ensemble.grid.theta_min;
  hdr.theta_max = ensemble.grid.theta_max;
  hdr.fringe = static_cast<std::uint8_t>(ensemble.config.fringe);
  hdr.detection_eta = ensemble.config.detection_eta;
  hdr.pump_rel_std = ensemble.config.pump_rel_std;
  hdr.seed = ensemble.config.seed;
  hdr.shot_noise = ensemble.config.shot_noise ? 1 : 0;
  hdr.payload_checksum = fnv1a64(payload.data(), payload.size() * sizeof(double));

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(&hdr), sizeof(hdr));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(double)));
  if (!out) throw DataError("short write: " + path);
}

FrameEnsemble read_ensemble(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open ensemble file: " + path);

  EnsembleHeader hdr{};
  in.read(reinterpret_cast<char*>(&hdr), sizeof(hdr));
  if (!in || std::memcmp(hdr.magic, kMagic, 4) != 0)
    throw DataError("bad magic in ensemble file: " + path);
  if (hdr.version != kEnsembleFormatVersion)
    throw DataError("unsupported ensemble format version in " + path);

  const std::size_t count = static_cast<std::size_t>(hdr.n_frames) * hdr.n_points;
  std::vector<double> payload(count);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw DataError("truncated ensemble file: " + path);
  if (fnv1a64(payload.data(), count * sizeof(double)) != hdr.payload_checksum)
    throw DataError("payload checksum mismatch in " + path);

  FrameEnsemble ens;
  ens.grid = AngularGrid{hdr.theta_min, hdr.theta_max, static_cast<int>(hdr.n_points)};
  ens.config.n_frames = static_cast<int>(hdr.n_frames);
  ens.config.fringe = static_cast<Fringe>(hdr.fringe);
  ens.config.detection_eta = hdr.detection_eta;
  ens.config.pump_rel_std = hdr.pump_rel_std;
  ens.config.seed = hdr.seed;
  ens.config.shot_noise = hdr.shot_noise != 0;
  ens.frames.resize(hdr.n_frames, hdr.n_points);
  for (std::uint32_t r = 0; r < hdr.n_frames; ++r)
    for (std::uint32_t c = 0; c < hdr.n_points; ++c)
      ens.frames(r, c) = payload[static_cast<std::size_t>(r) * hdr.n_points + c];
  return ens;
}

void export_ensemble_csv(const FrameEnsemble& ensemble, const std::string& path) {
  export_matrix_csv(ensemble.frames, path,
                    "frames=" + std::to_string(ensemble.n_frames()) +
                        " n_points=" + std::to_string(ensemble.n_points()) +
                        " fringe=" + fringe_name(ensemble.config.fringe) +
                        " seed=" + std::to_string(ensemble.config.seed));
}

}  // namespace sqzlab
