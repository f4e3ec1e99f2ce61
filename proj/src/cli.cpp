#include "lcmwarp/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "lcmwarp/augment.hpp"
#include "lcmwarp/bench.hpp"
#include "lcmwarp/errors.hpp"
#include "lcmwarp/image_io.hpp"
#include "lcmwarp/views.hpp"

namespace lcmwarp::cli {

namespace fs = std::filesystem;

namespace {

Complex parse_complex(const std::string& flag, const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw ConfigError(flag + " expects re,im (e.g. 1,0), got '" + text + "'");
  }
  try {
    std::size_t used_re = 0;
    std::size_t used_im = 0;
    const std::string re = text.substr(0, comma);
    const std::string im = text.substr(comma + 1);
    const double r = std::stod(re, &used_re);
    const double i = std::stod(im, &used_im);
    if (used_re != re.size() || used_im != im.size()) throw std::invalid_argument(text);
    return {r, i};
  } catch (const std::logic_error&) {
    throw ConfigError(flag + " expects re,im (e.g. 1,0), got '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& flag, const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ConfigError(flag + " expects comma-separated numbers, got '" + text + "'");
    }
  }
  if (values.empty()) throw ConfigError(flag + " must not be empty");
  return values;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("LCMWARP_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(std::string("LCMWARP_SEED must be a non-negative integer, got '") + env +
                      "'");
  }
}

// Diagnostics are kept on a single line so callers can grep for "error:".
int fail(std::ostream& err, std::string message, int code) {
  for (char& ch : message) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  while (!message.empty() && message.back() == ' ') message.pop_back();
  err << "error: " << message << '\n';
  return code;
}

const std::map<std::string, WarpMode> kModes = {{"bilinear", WarpMode::InverseBilinear},
                                                {"scatter", WarpMode::ForwardScatter}};
const std::map<std::string, PadPolicy> kPolicies = {
    {"reflect", PadPolicy::Reflect}, {"replicate", PadPolicy::Replicate}, {"zero", PadPolicy::Zero}};

// Flags shared by the transform-driven subcommands.
struct TransformFlags {
  std::string transform = "lcm";
  std::string k = "1,0";
  std::string c = "2,0";
  std::string a = "1,0";
  std::string b = "0,0";
  std::string cc = "0,0";
  std::string d = "1,0";
  std::string mode = "bilinear";
  std::size_t pad = 8;
  std::string pad_policy = "reflect";
  std::string fill = "0";

  void add_log(CLI::App* app) {
    app->add_option("--k", k, "LCM width parameter k as re,im")->capture_default_str();
    app->add_option("--c", c, "LCM constant c as re,im")->capture_default_str();
  }

  void add_all(CLI::App* app, bool with_mobius) {
    if (with_mobius) {
      app->add_option("--transform", transform, "lcm or mobius")
          ->capture_default_str()
          ->check(CLI::IsMember({"lcm", "mobius"}));
    }
    add_log(app);
    if (with_mobius) {
      app->add_option("--a", a, "Möbius a as re,im")->capture_default_str();
      app->add_option("--b", b, "Möbius b as re,im")->capture_default_str();
      app->add_option("--cc", cc, "Möbius c as re,im")->capture_default_str();
      app->add_option("--d", d, "Möbius d as re,im")->capture_default_str();
    }
    app->add_option("--mode", mode, "bilinear (inverse, hole-free) or scatter (forward, rounded)")
        ->capture_default_str()
        ->check(CLI::IsMember({"bilinear", "scatter"}));
    app->add_option("--pad", pad, "padding margin in pixels")->capture_default_str();
    app->add_option("--pad-policy", pad_policy, "reflect, replicate or zero")
        ->capture_default_str()
        ->check(CLI::IsMember({"reflect", "replicate", "zero"}));
    app->add_option("--fill", fill, "fill value in [0,1], one per channel or a single value")
        ->capture_default_str();
  }

  LogParams log_params() const {
    LogParams p(parse_complex("--k", k), parse_complex("--c", c));
    p.require_domain_safe();
    return p;
  }

  Transform resolve() const {
    if (transform == "mobius") {
      return MobiusParams(parse_complex("--a", a), parse_complex("--b", b),
                          parse_complex("--cc", cc), parse_complex("--d", d));
    }
    return log_params();
  }

  WarpMode warp_mode() const { return kModes.at(mode); }
  PadConfig pad_config() const { return {pad, kPolicies.at(pad_policy)}; }

  std::vector<double> fill_for(std::size_t channels) const {
    std::vector<double> values = parse_list("--fill", fill);
    for (double v : values) {
      if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("--fill values must lie in [0,1]");
    }
    if (values.size() == 1) values.assign(channels, values.front());
    if (values.size() != channels) {
      throw ChannelMismatch("--fill has " + std::to_string(values.size()) +
                            " values but the image has " + std::to_string(channels) + " channels");
    }
    return values;
  }
};

int cmd_warp(const std::string& in, const std::string& out_path, const std::string& view,
             const TransformFlags& flags, std::ostream& out) {
  const Transform t = flags.resolve();
  const ViewSpec spec = ViewSpec::canonical(parse_direction(view));
  const ImageBuffer img = read_image(in);
  const std::vector<double> fill = flags.fill_for(img.channels());
  format_from_path(out_path);
  write_image(out_path, synthesize_view(img, spec, t, flags.warp_mode(), flags.pad_config(), fill));
  out << "wrote " << out_path << '\n';
  return kExitOk;
}

int cmd_views(const std::string& in, std::string out_dir, const std::string& ext,
              const TransformFlags& flags, std::ostream& out) {
  const Transform t = flags.resolve();
  if (ext != "png" && ext != "ppm") throw ConfigError("--ext must be png or ppm");
  const ImageBuffer img = read_image(in);
  const std::vector<double> fill = flags.fill_for(img.channels());
  if (out_dir.empty()) out_dir = fs::path(in).parent_path().string();
  if (out_dir.empty()) out_dir = ".";
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir)) throw IoError("cannot create output directory " + out_dir);

  const ViewSet views = synthesize_all_views(img, t, flags.warp_mode(), flags.pad_config(), fill);
  const std::string stem = fs::path(in).stem().string();
  for (Direction d : kAllDirections) {
    const fs::path path = fs::path(out_dir) / (stem + "_" + std::string(to_string(d)) + "." + ext);
    write_image(path, views.get(d));
    out << "wrote " << path.string() << '\n';
  }
  return kExitOk;
}

struct BenchFlags {
  std::string transform = "both";
  std::size_t size = 224;
  std::optional<std::size_t> width;
  std::optional<std::size_t> height;
  std::size_t iters = 100;
  bool flops_only = false;
  std::string json_path;
  std::string curve;
  std::string csv_path;
};

int cmd_bench(const BenchFlags& f, std::uint64_t seed, std::ostream& out) {
  const std::size_t width = f.width.value_or(f.size);
  const std::size_t height = f.height.value_or(f.size);
  if (width == 0 || height == 0) throw ConfigError("image size must be >= 1");
  if (f.iters == 0) throw ConfigError("--iters must be >= 1");
  if (f.transform != "both") bench::parse_kind(f.transform);

  if (!f.curve.empty()) {
    const std::vector<double> ps = parse_list("--curve", f.curve);
    for (double p : ps) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("--curve probabilities must lie in [0,1]");
    }
    const std::string csv = bench::flop_curve_csv(bench::flop_curve(ps, width, height));
    if (f.csv_path.empty()) {
      out << csv;
    } else {
      std::ofstream file(f.csv_path, std::ios::binary | std::ios::trunc);
      if (!(file << csv)) throw IoError("cannot write " + f.csv_path);
    }
  }

  auto timed = [&](bench::TransformKind kind) -> std::optional<bench::TimingReport> {
    if (f.flops_only) return std::nullopt;
    return bench::time_transform(kind, width, height, f.iters, seed);
  };

  nlohmann::json report;
  if (f.transform == "both") {
    // MPD first so neither side consistently benefits from a warmer cache.
    const auto mpd = timed(bench::TransformKind::MPD);
    const auto lcm = timed(bench::TransformKind::LCM);
    report = bench::comparison_json(bench::flop_report(bench::TransformKind::LCM, width, height),
                                    lcm,
                                    bench::flop_report(bench::TransformKind::MPD, width, height),
                                    mpd);
  } else {
    const auto kind = bench::parse_kind(f.transform);
    report = bench::to_json(bench::flop_report(kind, width, height), timed(kind));
  }

  if (f.json_path.empty()) {
    if (f.curve.empty() || !f.csv_path.empty()) out << report.dump(2) << '\n';
  } else {
    std::ofstream file(f.json_path, std::ios::binary | std::ios::trunc);
    if (!(file << report.dump(2) << '\n')) throw IoError("cannot write " + f.json_path);
    out << "wrote " << f.json_path << '\n';
  }
  return kExitOk;
}

struct VerifyFlags {
  std::size_t points = 1000;
  double step = 1e-4;
  std::string z1 = "1,0";
  std::string z2 = "0,1";
};

int cmd_verify(const TransformFlags& tf, const VerifyFlags& vf, std::uint64_t seed,
               std::ostream& out, std::ostream& err) {
  if (vf.points == 0) throw ConfigError("--points must be >= 1");
  if (!(vf.step > 0.0)) throw ConfigError("--step must be > 0");
  const LogParams p = tf.log_params();
  const ConformalityReport report = conformality_report(p, vf.points, seed, vf.step);
  const double witness =
      nonlinearity_witness(p, parse_complex("--z1", vf.z1), parse_complex("--z2", vf.z2));
  out.precision(6);
  out << std::scientific;
  out << "points " << report.points << '\n'
      << "max_cr_residual " << report.max_cr_residual << '\n'
      << "max_angle_error_rad " << report.max_angle_error << '\n'
      << "nonlinearity_witness " << witness << '\n';
  out << std::defaultfloat;
  const bool ok = report.max_angle_error < 1e-3 && witness > 0.01;
  if (!ok) {
    err << "error: verification bounds violated (angle error " << report.max_angle_error
        << " rad, witness " << witness << ")\n";
    return kExitTransform;
  }
  out << "ok\n";
  return kExitOk;
}

int cmd_augment(const std::string& in_dir, const std::string& out_dir, double prob,
                const std::string& view, std::uint64_t seed, unsigned threads,
                const TransformFlags& tf, std::ostream& out) {
  AugmentPolicy policy;
  policy.probability = prob;
  policy.seed = seed;
  if (view != "random") policy.fixed_view = parse_direction(view);
  policy.validate();
  if (threads == 0) throw ConfigError("--threads must be >= 1");
  AugmentOptions options{tf.warp_mode(), tf.pad_config(), threads};
  const AugmentSummary s = augment_batch(in_dir, out_dir, policy, tf.log_params(), options);
  out << "processed " << s.processed << " transformed " << s.transformed << " failed "
      << s.failed << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perspective-distortion synthesis with log conformal and Möbius maps", "lcmwarp"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed_flag;

  TransformFlags warp_flags;
  std::string warp_in;
  std::string warp_out;
  std::string warp_view = "left";
  CLI::App* warp = app.add_subcommand("warp", "Synthesize one perspective-distorted view");
  warp->add_option("--in", warp_in, "input image (.png or .ppm)")->required();
  warp->add_option("--out", warp_out, "output image (.png or .ppm)")->required();
  warp->add_option("--view", warp_view, "left, right, top or bottom")
      ->capture_default_str()
      ->check(CLI::IsMember({"left", "right", "top", "bottom"}));
  warp_flags.add_all(warp, true);

  TransformFlags views_flags;
  std::string views_in;
  std::string views_out_dir;
  std::string views_ext = "png";
  CLI::App* views = app.add_subcommand("views", "Write <stem>_left/right/top/bottom images");
  views->add_option("--in", views_in, "input image (.png or .ppm)")->required();
  views->add_option("--out-dir", views_out_dir, "output directory (default: input's directory)");
  views->add_option("--ext", views_ext, "output format: png or ppm")->capture_default_str();
  views_flags.add_all(views, true);

  BenchFlags bench_flags;
  CLI::App* bench_cmd = app.add_subcommand("bench", "FLOP model and single-thread timing report");
  bench_cmd->add_option("--transform", bench_flags.transform, "lcm, mpd or both")
      ->capture_default_str()
      ->check(CLI::IsMember({"lcm", "mpd", "mobius", "both"}));
  bench_cmd->add_option("--size", bench_flags.size, "square image side in pixels")
      ->capture_default_str();
  bench_cmd->add_option("--width", bench_flags.width, "image width (overrides --size)");
  bench_cmd->add_option("--height", bench_flags.height, "image height (overrides --size)");
  bench_cmd->add_option("--iters", bench_flags.iters, "timed iterations after 3 warm-up runs")
      ->capture_default_str();
  bench_cmd->add_flag("--flops-only", bench_flags.flops_only, "skip timing");
  bench_cmd->add_option("--json", bench_flags.json_path, "write the JSON report here");
  bench_cmd->add_option("--curve", bench_flags.curve,
                        "comma-separated probabilities; prints p,lcm_flops,mpd_flops CSV");
  bench_cmd->add_option("--csv", bench_flags.csv_path, "write the --curve CSV here");
  bench_cmd->add_option("--seed", seed_flag, "image seed (default: $LCMWARP_SEED or 0)");

  TransformFlags verify_flags;
  VerifyFlags verify_opts;
  CLI::App* verify = app.add_subcommand("verify", "Check conformality and non-linearity numerically");
  verify_flags.add_log(verify);
  verify->add_option("--points", verify_opts.points, "sample points in [-1,1]^2")
      ->capture_default_str();
  verify->add_option("--step", verify_opts.step, "finite-difference step")->capture_default_str();
  verify->add_option("--z1", verify_opts.z1, "first witness point as re,im")->capture_default_str();
  verify->add_option("--z2", verify_opts.z2, "second witness point as re,im")->capture_default_str();
  verify->add_option("--seed", seed_flag, "sampling seed (default: $LCMWARP_SEED or 0)");

  TransformFlags augment_flags;
  std::string aug_in;
  std::string aug_out;
  double aug_prob = 0.5;
  std::string aug_view = "random";
  unsigned aug_threads = 1;
  CLI::App* augment = app.add_subcommand("augment", "Probability-gated view synthesis over a directory");
  augment->add_option("--in-dir", aug_in, "directory of .png/.ppm images")->required();
  augment->add_option("--out-dir", aug_out, "output directory (created if missing)")->required();
  augment->add_option("--prob", aug_prob, "probability of transforming each image")
      ->capture_default_str();
  augment->add_option("--view", aug_view, "random, left, right, top or bottom")
      ->capture_default_str()
      ->check(CLI::IsMember({"random", "left", "right", "top", "bottom"}));
  augment->add_option("--seed", seed_flag, "draw seed (default: $LCMWARP_SEED or 0)");
  augment->add_option("--threads", aug_threads, "worker threads")->capture_default_str();
  augment_flags.add_all(augment, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (CLI::App* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail(err, e.what(), kExitConfig);
  }

  try {
    const std::uint64_t seed = seed_flag ? *seed_flag : default_seed();
    if (warp->parsed()) return cmd_warp(warp_in, warp_out, warp_view, warp_flags, out);
    if (views->parsed()) return cmd_views(views_in, views_out_dir, views_ext, views_flags, out);
    if (bench_cmd->parsed()) return cmd_bench(bench_flags, seed, out);
    if (verify->parsed()) return cmd_verify(verify_flags, verify_opts, seed, out, err);
    if (augment->parsed()) {
      return cmd_augment(aug_in, aug_out, aug_prob, aug_view, seed, aug_threads, augment_flags,
                         out);
    }
  } catch (const IoError& e) {
    return fail(err, e.what(), kExitIo);
  } catch (const ConfigError& e) {
    return fail(err, e.what(), kExitConfig);
  } catch (const DomainViolation& e) {
    return fail(err, e.what(), kExitConfig);
  } catch (const ChannelMismatch& e) {
    return fail(err, e.what(), kExitConfig);
  } catch (const std::invalid_argument& e) {
    return fail(err, e.what(), kExitConfig);
  } catch (const std::exception& e) {
    return fail(err, e.what(), kExitTransform);
  }
  return kExitConfig;
}

}  // namespace lcmwarp::cli
