#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lcmwarp/complex_map.hpp"
#include "lcmwarp/views.hpp"

namespace lcmwarp {

struct AugmentPolicy {
  double probability = 0.5;
  // nullopt draws one of the four views uniformly per image.
  std::optional<Direction> fixed_view;
  std::uint64_t seed = 0;

  // Throws ConfigError when probability is outside [0,1] or not finite.
  void validate() const;
};

// Outcome of the seeded draws for the image at `index`; depends only on
// (policy.seed, index).
struct AugmentDraw {
  bool applied = false;
  Direction view = Direction::Left;
};
AugmentDraw draw_for_index(const AugmentPolicy& policy, std::uint64_t index);

struct AugmentSummary {
  std::size_t processed = 0;
  std::size_t transformed = 0;
  std::size_t failed = 0;
};

struct AugmentOptions {
  WarpMode mode = WarpMode::InverseBilinear;
  PadConfig pad;
  unsigned threads = 1;
};

// Files under `input_dir` (non-recursive) with a .png or .ppm extension,
// sorted by file name.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& input_dir);

// Applies the view synthesis to each image with probability
// policy.probability and copies the rest through byte for byte. Outputs
// keep their file names. Writes output_dir/manifest.jsonl with one line per
// input in sorted order. Per-file failures are reported on stderr, counted
// in `failed` and recorded in the manifest with an "error" field.
// Throws ConfigError for an invalid policy, DomainViolation for unsafe
// parameters and IoError when the directories
// cannot be used.
AugmentSummary augment_batch(const std::filesystem::path& input_dir,
                             const std::filesystem::path& output_dir, const AugmentPolicy& policy,
                             const LogParams& params, const AugmentOptions& options = {});

std::string_view to_string(WarpMode mode);

}  // namespace lcmwarp
