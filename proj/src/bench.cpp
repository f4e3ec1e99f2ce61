#include "lcmwarp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lcmwarp/errors.hpp"
#include "lcmwarp/grid_warp.hpp"
#include "lcmwarp/rng.hpp"

namespace lcmwarp::bench {

namespace {

struct CostRow {
  const char* name;
  std::uint64_t mpd;
  std::uint64_t lcm;
};

// FLOPs per pixel for each stage of the two pipelines.
constexpr CostRow kCostModel[] = {
    {"Meshgrid Creation", 2, 2},
    {"Complex Arithmetic for Transformation", 14, 0},
    {"Logarithmic Mapping", 0, 4},
    {"Scaling and Conversion to Image Coordinates", 0, 6},
    {"Grid Sampling (Bilinear Interpolation)", 7, 7},
};

void check_size(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw std::invalid_argument("image size must be >= 1");
}

ImageBuffer random_image(std::size_t width, std::size_t height, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> data(width * height * 3);
  for (double& v : data) v = rng.uniform();
  return ImageBuffer(width, height, 3, std::move(data));
}

}  // namespace

std::string_view to_string(TransformKind kind) { return kind == TransformKind::LCM ? "lcm" : "mpd"; }

TransformKind parse_kind(std::string_view name) {
  if (name == "lcm" || name == "log") return TransformKind::LCM;
  if (name == "mpd" || name == "mobius") return TransformKind::MPD;
  throw ConfigError("unknown transform '" + std::string(name) + "' (expected lcm|mpd)");
}

MobiusParams reference_mobius() {
  return MobiusParams({1.0, 0.0}, {0.2, 0.1}, {0.25, 0.1}, {1.0, 0.0});
}

FlopReport flop_report(TransformKind kind, std::size_t width, std::size_t height) {
  check_size(width, height);
  const std::uint64_t pixels = static_cast<std::uint64_t>(width) * height;
  FlopReport report{kind, width, height, {}, 0};
  for (const CostRow& row : kCostModel) {
    const std::uint64_t per_pixel = kind == TransformKind::LCM ? row.lcm : row.mpd;
    report.rows.push_back({row.name, per_pixel, per_pixel * pixels});
    report.total_flops += per_pixel * pixels;
  }
  return report;
}

double flop_reduction(std::size_t width, std::size_t height) {
  const auto mpd = static_cast<double>(flop_report(TransformKind::MPD, width, height).total_flops);
  const auto lcm = static_cast<double>(flop_report(TransformKind::LCM, width, height).total_flops);
  return (mpd - lcm) / mpd;
}

std::vector<FlopCurvePoint> flop_curve(std::span<const double> probabilities, std::size_t width,
                                       std::size_t height) {
  const auto lcm = static_cast<double>(flop_report(TransformKind::LCM, width, height).total_flops);
  const auto mpd = static_cast<double>(flop_report(TransformKind::MPD, width, height).total_flops);
  std::vector<FlopCurvePoint> curve;
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("probability must lie in [0,1], got " + std::to_string(p));
    }
    curve.push_back({p, p * lcm, p * mpd});
  }
  return curve;
}

std::string flop_curve_csv(std::span<const FlopCurvePoint> curve) {
  std::ostringstream out;
  out.precision(17);
  out << "p,lcm_flops,mpd_flops\n";
  for (const auto& pt : curve) out << pt.p << ',' << pt.lcm_flops << ',' << pt.mpd_flops << '\n';
  return out.str();
}

TimingStats summarize(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("no timing samples");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  TimingStats s;
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  const std::size_t mid = samples.size() / 2;
  s.median = samples.size() % 2 == 1 ? samples[mid] : 0.5 * (samples[mid - 1] + samples[mid]);
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * n));
  s.p95 = samples[std::max<std::size_t>(rank, 1) - 1];
  double ss = 0.0;
  for (double v : samples) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / n);
  return s;
}

TimingReport time_transform(TransformKind kind, std::size_t width, std::size_t height,
                            std::size_t iterations, std::uint64_t seed) {
  check_size(width, height);
  if (iterations == 0) throw std::invalid_argument("iterations must be >= 1");
  const ImageBuffer src = random_image(width, height, seed);
  const Transform transform =
      kind == TransformKind::LCM ? Transform(LogParams{}) : Transform(reference_mobius());
  const std::vector<double> fill(src.channels(), 0.0);

  auto run_once = [&] { return warp_bilinear(src, build_grid(width, height, transform), fill); };
  for (std::size_t i = 0; i < kWarmupRuns; ++i) run_once();

  std::vector<double> samples;
  samples.reserve(iterations);
  double checksum = 0.0;
  for (std::size_t i = 0; i < iterations; ++i) {
    const auto start = std::chrono::steady_clock::now();
    const ImageBuffer out = run_once();
    const auto stop = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double>(stop - start).count());
    if (i + 1 == iterations) {
      checksum = std::accumulate(out.data().begin(), out.data().end(), 0.0);
    }
  }

  TimingReport report;
  report.transform = kind;
  report.width = width;
  report.height = height;
  report.iterations = iterations;
  report.per_image_seconds = summarize(std::move(samples));
  report.flops_per_image = flop_report(kind, width, height).total_flops;
  report.output_checksum = checksum;
  return report;
}

nlohmann::json to_json(const FlopReport& flops, const std::optional<TimingReport>& timing) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : flops.rows) {
    rows.push_back({{"name", row.name}, {"per_pixel", row.per_pixel}, {"total", row.total}});
  }
  nlohmann::json out = {
      {"transform", std::string(to_string(flops.transform))},
      {"width", flops.width},
      {"height", flops.height},
      {"flops", {{"rows", rows}, {"total", flops.total_flops}}},
      {"reference", {{"paper_mpd_s", kReferenceMpdSeconds}, {"paper_lcm_s", kReferenceLcmSeconds}}},
  };
  if (timing) {
    const auto& t = *timing;
    out["timing"] = {{"mean_s", t.per_image_seconds.mean},
                     {"median_s", t.per_image_seconds.median},
                     {"p95_s", t.per_image_seconds.p95},
                     {"stddev_s", t.per_image_seconds.stddev},
                     {"iterations", t.iterations},
                     {"warmup", t.warmup},
                     {"threads", t.thread_count},
                     {"output_checksum", t.output_checksum}};
  } else {
    out["timing"] = nullptr;
  }
  return out;
}

nlohmann::json comparison_json(const FlopReport& lcm_flops, const std::optional<TimingReport>& lcm,
                               const FlopReport& mpd_flops, const std::optional<TimingReport>& mpd) {
  nlohmann::json out = {
      {"reports", {to_json(lcm_flops, lcm), to_json(mpd_flops, mpd)}},
      {"flop_reduction",
       static_cast<double>(mpd_flops.total_flops - lcm_flops.total_flops) /
           static_cast<double>(mpd_flops.total_flops)},
  };
  if (lcm && mpd) {
    const double reference_ratio = kReferenceLcmEpochHours / kReferenceMpdEpochHours;
    out["annotation"] = {
        {"measured_lcm_over_mpd", lcm->per_image_seconds.mean / mpd->per_image_seconds.mean},
        {"reference_epoch_ratio", reference_ratio},
        {"reference_epoch_saving", 1.0 - reference_ratio},
    };
  }
  return out;
}

}  // namespace lcmwarp::bench
