// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails or overruns its time budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lcmwarp/bench.hpp"
#include "lcmwarp/cli.hpp"
#include "lcmwarp/complex_map.hpp"
#include "lcmwarp/grid_warp.hpp"
#include "lcmwarp/image_io.hpp"
#include "lcmwarp/views.hpp"
#include "oracles.hpp"

using namespace lcmwarp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

Outcome flop_fidelity() {
  const std::uint64_t mpd_rows[] = {2, 14, 0, 0, 7};
  const std::uint64_t lcm_rows[] = {2, 0, 4, 6, 7};
  std::size_t checked = 0;
  for (std::size_t h : {1u, 7u, 224u, 513u}) {
    for (std::size_t w : {1u, 7u, 224u, 513u}) {
      const std::uint64_t px = static_cast<std::uint64_t>(w) * h;
      const auto mpd = bench::flop_report(bench::TransformKind::MPD, w, h);
      const auto lcm = bench::flop_report(bench::TransformKind::LCM, w, h);
      if (mpd.total_flops != 23 * px || lcm.total_flops != 19 * px) {
        return {false, "total mismatch at " + std::to_string(w) + "x" + std::to_string(h)};
      }
      if (mpd.rows.size() != 5 || lcm.rows.size() != 5) return {false, "row count"};
      for (std::size_t i = 0; i < 5; ++i) {
        if (mpd.rows[i].per_pixel != mpd_rows[i] || lcm.rows[i].per_pixel != lcm_rows[i] ||
            mpd.rows[i].total != mpd_rows[i] * px || lcm.rows[i].total != lcm_rows[i] * px) {
          return {false, "row " + mpd.rows[i].name};
        }
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " sizes; 224x224 totals " +
                    std::to_string(bench::flop_report(bench::TransformKind::MPD, 224, 224).total_flops) +
                    " / " +
                    std::to_string(bench::flop_report(bench::TransformKind::LCM, 224, 224).total_flops)};
}

Outcome flop_reduction() {
  double worst = 0.0;
  double value = 0.0;
  for (std::size_t s : {1u, 7u, 224u, 513u}) {
    value = bench::flop_reduction(s, s);
    worst = std::max(worst, std::abs(value - 4.0 / 23.0));
  }
  return {worst <= 1e-5, fmt("reduction %.6f, max deviation from 4/23 %.1e", value, worst)};
}

Outcome timing_ordering() {
  std::string detail;
  for (int attempt = 1; attempt <= 2; ++attempt) {
    const auto mpd = bench::time_transform(bench::TransformKind::MPD, 224, 224, 100, 1);
    const auto lcm = bench::time_transform(bench::TransformKind::LCM, 224, 224, 100, 1);
    const double l = lcm.per_image_seconds.mean;
    const double m = mpd.per_image_seconds.mean;
    if (!detail.empty()) detail += "; ";
    detail += "run " + std::to_string(attempt) +
              fmt(": lcm %.3f ms, mpd %.3f ms, ratio %.3f", l * 1e3, m * 1e3, l / m);
    if (l <= m) return {true, detail};
  }
  return {false, detail};
}

Outcome conformality() {
  const LogParams p;
  const double h = 1e-4;
  const ConformalityReport report = conformality_report(p, 1000, 42, h);
  SplitMix64 rng(43);
  double worst_derivative = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Complex z(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    const Complex fd = estimate_jacobian(z, p, h).implied_derivative();
    worst_derivative = std::max(worst_derivative, std::abs(fd - log_conformal_derivative(z, p)));
  }
  const bool pass = report.max_cr_residual < 1e-3 && report.max_angle_error < 1e-3 &&
                    worst_derivative < 100 * h * h;
  return {pass, fmt("cr residual %.2e, angle error %.2e rad, derivative error %.2e",
                    report.max_cr_residual, report.max_angle_error, worst_derivative)};
}

Outcome nonlinearity() {
  const double shipped = nonlinearity_witness(LogParams{}, {1.0, 0.0}, {0.0, 1.0});
  const double unit = nonlinearity_witness(LogParams({1.0, 0.0}, {1.0, 0.0}), {1.0, 0.0}, {1.0, 0.0});
  const double expected = 0.2876820724517809274;  // |ln 3 - 2 ln 2|
  const bool pass = shipped > 0.1 && std::abs(unit - expected) <= 1e-6;
  return {pass, fmt("default pair gap %.6f, k=1 c=1 z=1 gap %.9f (error %.1e)", shipped, unit,
                    std::abs(unit - expected))};
}

Outcome warp_oracle() {
  SplitMix64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t channels = trial % 3 == 0 ? 1 : 3;
    const ImageBuffer src = oracle::random_image(16, 16, channels, rng);
    const SamplingGrid grid = oracle::random_grid(16, 16, rng);
    std::vector<double> fill(channels);
    for (double& v : fill) v = rng.uniform();
    const ImageBuffer got = warp_bilinear(src, grid, fill);
    worst = std::max(worst, max_abs_diff(got, oracle::bilinear(src, grid, fill)));
  }
  return {worst <= 1e-6, fmt("1000 trials, max abs error %.2e", worst)};
}

Outcome identity_and_group_laws() {
  SplitMix64 rng(7);
  const ImageBuffer img = oracle::smooth_image(40, 28, 3);
  const PadConfig pad;
  const MobiusParams identity;
  double worst_identity = 0.0;
  const ImageBuffer padded = pad_image(img, pad.margin, pad.policy);
  for (Direction d : kAllDirections) {
    const ImageBuffer v =
        synthesize_view(img, ViewSpec::canonical(d), identity, WarpMode::InverseBilinear, pad);
    worst_identity = std::max(worst_identity, mean_abs_diff(v, padded));
  }

  bool laws = true;
  for (int trial = 0; trial < 20; ++trial) {
    const ImageBuffer r = oracle::random_image(1 + trial % 7, 1 + trial % 5, 3, rng);
    laws = laws && flip(flip(r, FlipAxis::Horizontal), FlipAxis::Horizontal) == r;
    laws = laws && flip(flip(r, FlipAxis::Vertical), FlipAxis::Vertical) == r;
    laws = laws && rotate(rotate(rotate(rotate(r, 90), 90), 90), 90) == r;
    laws = laws && rotate(rotate(r, 90), 270) == r;
    laws = laws && rotate(rotate(r, 90), 90) == rotate(r, 180);
    laws = laws && rotate(r, 0) == r && rotate(r, 360) == r;
  }

  double worst_mirror = 0.0;
  const std::vector<Transform> transforms = {LogParams{}, LogParams({0.8, 0.3}, {2.5, -0.4}),
                                             bench::reference_mobius()};
  for (const Transform& t : transforms) {
    for (WarpMode mode : {WarpMode::InverseBilinear, WarpMode::ForwardScatter}) {
      const ViewSet v = synthesize_all_views(img, t, mode, pad);
      const ViewSet hv = synthesize_all_views(flip(img, FlipAxis::Horizontal), t, mode, pad);
      const ViewSet vv = synthesize_all_views(flip(img, FlipAxis::Vertical), t, mode, pad);
      worst_mirror = std::max(worst_mirror, max_abs_diff(v.right, flip(hv.left, FlipAxis::Horizontal)));
      worst_mirror = std::max(worst_mirror, max_abs_diff(v.bottom, flip(vv.top, FlipAxis::Vertical)));
    }
  }
  const bool pass = worst_identity <= 1e-6 && laws && worst_mirror <= 1e-6;
  return {pass, fmt("identity MAE %.2e, max mirror error %.2e", worst_identity, worst_mirror) +
                    (laws ? ", group laws exact" : ", group laws broken")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome augment_determinism() {
  const fs::path root = fs::temp_directory_path() / "lcmwarp_acceptance_augment";
  fs::remove_all(root);
  fs::create_directories(root / "in");
  SplitMix64 rng(99);
  for (int i = 0; i < 100; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "img%03d.ppm", i);
    write_image(root / "in" / name, oracle::random_image(32, 24, 3, rng));
  }
  std::string manifests[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path out = root / ("out" + std::to_string(run));
    std::ostringstream sink;
    std::ostringstream err;
    const int code = cli::run({"lcmwarp", "augment", "--in-dir", (root / "in").string(),
                               "--out-dir", out.string(), "--prob", "0.8", "--seed", "7"},
                              sink, err);
    if (code != 0) return {false, "augment exited " + std::to_string(code) + ": " + err.str()};
    manifests[run] = slurp(out / "manifest.jsonl");
  }
  std::size_t lines = 0;
  std::size_t applied = 0;
  std::istringstream in(manifests[0]);
  for (std::string line; std::getline(in, line);) {
    ++lines;
    if (line.find("\"applied\":true") != std::string::npos) ++applied;
  }
  fs::remove_all(root);
  const double fraction = static_cast<double>(applied) / 100.0;
  const bool identical = manifests[0] == manifests[1] && !manifests[0].empty();
  const bool pass = identical && lines == 100 && fraction >= 0.70 && fraction <= 0.90;
  return {pass, std::string(identical ? "manifests identical" : "manifests differ") +
                    fmt(", applied fraction %.2f over %.0f lines", fraction,
                        static_cast<double>(lines))};
}

Outcome singularity_handling() {
  std::size_t flagged = 0;
  bool exact = true;
  bool finite = true;
  bool filled = true;
  // The pole sits on pixel centers: z = 0 for 1/z on odd grids, and a chosen
  // off-center pixel for 1/(z - z0).
  std::vector<std::pair<std::size_t, MobiusParams>> cases;
  for (std::size_t n : {3u, 5u, 17u, 31u}) {
    cases.push_back({n, MobiusParams({0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0})});
  }
  const Complex z0 = normalize_coords(5, 9, 16, 16);
  cases.push_back({16, MobiusParams({1.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}, -z0)});
  cases.push_back({16, MobiusParams({0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, -2.0 * z0)});

  SplitMix64 rng(5);
  const std::vector<double> fill{0.25, 0.5, 0.75};
  for (const auto& [n, m] : cases) {
    const SamplingGrid grid = build_grid(n, n, m);
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t x = 0; x < n; ++x) {
        const bool pole = std::abs(m.c() * normalize_coords(x, y, n, n) + m.d()) <= 1e-12;
        flagged += pole;
        exact = exact && (grid.valid[y * n + x] == 0) == pole;
      }
    }
    const ImageBuffer src = oracle::random_image(n, n, 3, rng);
    const ImageBuffer out = warp_bilinear(src, grid, fill);
    for (double v : out.data()) finite = finite && std::isfinite(v);
    for (std::size_t i = 0; i < n * n; ++i) {
      if (grid.valid[i]) continue;
      for (std::size_t ch = 0; ch < 3; ++ch) filled = filled && out.data()[i * 3 + ch] == fill[ch];
    }
    std::size_t holes = 0;
    const ImageBuffer scattered = warp_scatter(src, m, fill, &holes);
    for (double v : scattered.data()) finite = finite && std::isfinite(v);
  }
  const bool pass = exact && finite && filled && flagged == cases.size();
  return {pass, std::to_string(flagged) + " pole pixels over " + std::to_string(cases.size()) +
                    " grids, flags " + (exact ? "exact" : "wrong") + ", outputs " +
                    (finite && filled ? "finite and filled" : "bad")};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "flop model totals and rows", 1.0, flop_fidelity},
      {2, "flop reduction", 1.0, flop_reduction},
      {3, "timing ordering lcm <= mpd", 120.0, timing_ordering},
      {4, "conformality", 5.0, conformality},
      {5, "non-linearity witness", 1.0, nonlinearity},
      {6, "bilinear oracle equivalence", 30.0, warp_oracle},
      {7, "identity and group laws", 30.0, identity_and_group_laws},
      {8, "augment determinism", 60.0, augment_determinism},
      {9, "singularity handling", 5.0, singularity_handling},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) {
      o.pass = false;
      o.detail += fmt(" (over budget of %.0f s)", c.budget_seconds);
    }
    failures += !o.pass;
    std::printf("%s criterion %d %-28s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
