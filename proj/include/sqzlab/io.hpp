#ifndef SQZLAB_IO_HPP
#define SQZLAB_IO_HPP

#include <string>

#include "sqzlab/frame_synth.hpp"

namespace sqzlab {

// Frame ensemble container: magic "SQZF", little-endian header with version,
// dimensions, grid bounds, an echo of the acquisition config and a payload
// checksum, followed by row-major float64 frames.
inline constexpr std::uint32_t kEnsembleFormatVersion = 1;

void write_ensemble(const FrameEnsemble& ensemble, const std::string& path);
FrameEnsemble read_ensemble(const std::string& path);

/// CSV export for small ensembles: one frame per row.
void export_ensemble_csv(const FrameEnsemble& ensemble, const std::string& path);

}  // namespace sqzlab

#endif
