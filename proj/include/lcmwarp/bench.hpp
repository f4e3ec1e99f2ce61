#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lcmwarp/mobius.hpp"

namespace lcmwarp::bench {

enum class TransformKind { LCM, MPD };

std::string_view to_string(TransformKind kind);
// "lcm" or "mpd" / "mobius". Throws ConfigError.
TransformKind parse_kind(std::string_view name);

// Möbius coefficients used for the MPD side of timing runs: every
// coefficient has parts in [0,1] and |cz + d| >= 0.6 on [-1,1]^2.
MobiusParams reference_mobius();

// Published per-image wall times of the two pipelines on a single CPU core,
// kept as metadata only.
inline constexpr double kReferenceMpdSeconds = 0.24;
inline constexpr double kReferenceLcmSeconds = 0.22;
// Hours per training epoch (MPD, LCM); their ratio is the reported saving.
inline constexpr double kReferenceMpdEpochHours = 0.1667;
inline constexpr double kReferenceLcmEpochHours = 0.1528;

struct FlopRow {
  std::string name;
  std::uint64_t per_pixel = 0;
  std::uint64_t total = 0;
};

struct FlopReport {
  TransformKind transform = TransformKind::LCM;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<FlopRow> rows;
  std::uint64_t total_flops = 0;
};

// Analytic per-pixel cost model of the warp pipeline. Rows that do not apply
// to a transform are listed with per_pixel = 0. Throws std::invalid_argument
// for zero sizes.
FlopReport flop_report(TransformKind kind, std::size_t width, std::size_t height);

// (MPD - LCM) / MPD.
double flop_reduction(std::size_t width, std::size_t height);

struct FlopCurvePoint {
  double p = 0.0;
  double lcm_flops = 0.0;
  double mpd_flops = 0.0;
};

// Expected transform FLOPs per image when the transform fires with
// probability p. Throws std::invalid_argument for p outside [0,1].
std::vector<FlopCurvePoint> flop_curve(std::span<const double> probabilities, std::size_t width,
                                       std::size_t height);
std::string flop_curve_csv(std::span<const FlopCurvePoint> curve);

struct TimingStats {
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  double stddev = 0.0;
};

// Population statistics; p95 uses the nearest-rank method. Throws
// std::invalid_argument on an empty sample.
TimingStats summarize(std::vector<double> samples);

inline constexpr std::size_t kWarmupRuns = 3;

struct TimingReport {
  TransformKind transform = TransformKind::LCM;
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t iterations = 0;
  std::size_t warmup = kWarmupRuns;
  std::size_t thread_count = 1;
  TimingStats per_image_seconds;
  std::uint64_t flops_per_image = 0;
  // Sum of the last output image; identical for identical inputs.
  double output_checksum = 0.0;
};

// Times grid construction + bilinear warp of a seeded random RGB image on
// the calling thread: kWarmupRuns untimed runs, then `iterations` timed
// runs. Throws std::invalid_argument for iterations == 0 or zero sizes.
TimingReport time_transform(TransformKind kind, std::size_t width, std::size_t height,
                            std::size_t iterations, std::uint64_t seed);

nlohmann::json to_json(const FlopReport& flops, const std::optional<TimingReport>& timing);

// Combined report for an LCM/MPD pair, including the measured time ratio
// and the epoch-time ratio annotation when both timings are present.
nlohmann::json comparison_json(const FlopReport& lcm_flops, const std::optional<TimingReport>& lcm,
                               const FlopReport& mpd_flops, const std::optional<TimingReport>& mpd);

}  // namespace lcmwarp::bench
