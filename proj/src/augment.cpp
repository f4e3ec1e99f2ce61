#include "lcmwarp/augment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "lcmwarp/errors.hpp"
#include "lcmwarp/image_io.hpp"
#include "lcmwarp/rng.hpp"

namespace lcmwarp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct FileResult {
  json record;
  bool ok = true;
  bool applied = false;
  std::string error;
};

FileResult process_one(const fs::path& input, const fs::path& output_dir, std::size_t index,
                       const AugmentPolicy& policy, const LogParams& params,
                       const AugmentOptions& options) {
  const AugmentDraw draw = draw_for_index(policy, index);
  const fs::path output = output_dir / input.filename();

  FileResult result;
  result.applied = draw.applied;
  result.record = {
      {"input", input.filename().string()},
      {"output", output.filename().string()},
      {"view", draw.applied ? json(std::string(to_string(draw.view))) : json(nullptr)},
      {"applied", draw.applied},
      {"params",
       {{"k", {params.k().real(), params.k().imag()}},
        {"c", {params.c().real(), params.c().imag()}}}},
      {"mode", std::string(to_string(options.mode))},
      {"seed", policy.seed},
      {"index", index},
  };
  try {
    if (draw.applied) {
      const ImageBuffer img = read_image(input);
      write_image(output, synthesize_view(img, ViewSpec::canonical(draw.view), params,
                                          options.mode, options.pad));
    } else {
      write_file(output, read_file(input));
    }
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = e.what();
    result.record["error"] = result.error;
  }
  return result;
}

}  // namespace

std::string_view to_string(WarpMode mode) {
  return mode == WarpMode::ForwardScatter ? "scatter" : "bilinear";
}

void AugmentPolicy::validate() const {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw ConfigError("probability must lie in [0,1], got " + std::to_string(probability));
  }
}

AugmentDraw draw_for_index(const AugmentPolicy& policy, std::uint64_t index) {
  SplitMix64 stream = SplitMix64::for_index(policy.seed, index);
  AugmentDraw draw;
  draw.applied = stream.uniform() < policy.probability;
  // The view draw is consumed unconditionally so the stream layout does not
  // depend on the outcome of the first draw.
  const auto pick = static_cast<std::size_t>(stream.uniform() * kAllDirections.size());
  draw.view = policy.fixed_view.value_or(kAllDirections[std::min<std::size_t>(pick, 3)]);
  return draw;
}

std::vector<fs::path> list_images(const fs::path& input_dir) {
  std::error_code ec;
  if (!fs::is_directory(input_dir, ec)) {
    throw IoError("input directory " + input_dir.string() + " is not readable");
  }
  std::vector<fs::path> files;
  fs::directory_iterator it(input_dir, ec);
  if (ec) throw IoError("cannot list " + input_dir.string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (!entry.is_regular_file()) continue;
    try {
      format_from_path(entry.path());
    } catch (const IoError&) {
      continue;
    }
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

AugmentSummary augment_batch(const fs::path& input_dir, const fs::path& output_dir,
                             const AugmentPolicy& policy, const LogParams& params,
                             const AugmentOptions& options) {
  policy.validate();
  params.require_domain_safe();
  if (options.threads == 0) throw ConfigError("thread count must be >= 1");
  const std::vector<fs::path> files = list_images(input_dir);

  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec || !fs::is_directory(output_dir)) {
    throw IoError("output directory " + output_dir.string() + " is not writable");
  }
  if (fs::equivalent(input_dir, output_dir, ec)) {
    throw ConfigError("output directory must differ from the input directory");
  }

  std::vector<FileResult> results(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      results[i] = process_one(files[i], output_dir, i, policy, params, options);
    }
  };
  const unsigned n_threads = std::min<unsigned>(
      options.threads, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  AugmentSummary summary;
  std::ofstream manifest(output_dir / "manifest.jsonl", std::ios::binary | std::ios::trunc);
  if (!manifest) throw IoError("cannot write manifest in " + output_dir.string());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const FileResult& r = results[i];
    manifest << r.record.dump() << '\n';
    if (!r.ok) {
      ++summary.failed;
      std::cerr << "warning: skipped " << files[i].filename().string() << ": " << r.error << '\n';
      continue;
    }
    ++summary.processed;
    if (r.applied) ++summary.transformed;
  }
  if (!manifest) throw IoError("manifest write failed in " + output_dir.string());
  return summary;
}

}  // namespace lcmwarp
