#include <cmath>
#include <vector>

#include "doctest.h"
#include "lcmwarp/errors.hpp"
#include "lcmwarp/grid_warp.hpp"
#include "lcmwarp/rng.hpp"
#include "oracles.hpp"

using namespace lcmwarp;

TEST_SUITE("grid_warp") {
  TEST_CASE("pixel-center normalization") {
    CHECK(normalize_coords(0, 0, 2, 2) == Complex(-0.5, -0.5));
    CHECK(normalize_coords(1, 1, 3, 3) == Complex(0.0, 0.0));
    const Complex z = normalize_coords(223, 223, 224, 224);
    CHECK(z.real() == doctest::Approx(0.9955357142857143).epsilon(1e-15));
    CHECK(z.imag() == z.real());
    CHECK(denormalize(z.real(), 224) == doctest::Approx(223.0));
    CHECK(normalize_coords(0, 0, 1, 1) == Complex(0.0, 0.0));
  }

  TEST_CASE("default log grid has no invalid pixels") {
    const SamplingGrid g = build_grid(224, 224, LogParams{});
    CHECK(g.size() == 224 * 224);
    CHECK(g.invalid_count() == 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      REQUIRE(std::isfinite(g.sx[i]));
      REQUIRE(g.sx[i] >= -1.0);
      REQUIRE(g.sx[i] <= 1.0);
    }
  }

  TEST_CASE("grid rejects unsafe log parameters") {
    CHECK_THROWS_AS(build_grid(8, 8, LogParams({1.0, 0.0}, {0.5, 0.0})), DomainViolation);
  }

  TEST_CASE("identity Möbius grid equals the identity grid") {
    for (auto [w, h] : {std::pair<std::size_t, std::size_t>{2, 2}, {5, 3}, {64, 64}, {17, 40}}) {
      const SamplingGrid g = build_grid(w, h, MobiusParams{});
      const SamplingGrid id = identity_grid(w, h);
      for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(g.sx[i] - id.sx[i]) < 1e-9);
        CHECK(std::abs(g.sy[i] - id.sy[i]) < 1e-9);
      }
    }
  }

  TEST_CASE("pole pixels are flagged exactly") {
    // 1/z on odd grids: the center pixel sits on z = 0.
    const MobiusParams inv({0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0});
    for (std::size_t n : {3u, 5u, 31u}) {
      const SamplingGrid g = build_grid(n, n, inv);
      std::size_t expected = 0;
      for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t x = 0; x < n; ++x) {
          const Complex z = normalize_coords(x, y, n, n);
          const bool pole = std::abs(inv.c() * z + inv.d()) <= 1e-12;
          expected += pole;
          CHECK(g.valid[y * n + x] == (pole ? 0 : 1));
        }
      }
      CHECK(expected == 1);
      CHECK(g.invalid_count() == 1);
    }
    // Even grids never hit z = 0.
    CHECK(build_grid(4, 4, inv).invalid_count() == 0);
  }

  TEST_CASE("collapsed ranges raise DegenerateRange") {
    // |ad - bc| = 1e-8 passes validation but the image spans ~2e-12.
    const MobiusParams tiny({1e-10, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {100.0, 0.0});
    CHECK_THROWS_AS(build_grid(8, 8, tiny), DegenerateRange);
    // Every pixel singular.
    const MobiusParams inv({0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0});
    CHECK_THROWS_AS(build_grid(1, 1, inv), DegenerateRange);
    // A single pixel has nothing to span and is fine.
    CHECK_NOTHROW(build_grid(1, 1, LogParams{}));
  }

  TEST_CASE("bilinear warp with identity grid reproduces the input exactly") {
    SplitMix64 rng(1);
    const ImageBuffer img = oracle::random_image(13, 9, 3, rng);
    const std::vector<double> fill(3, 0.0);
    CHECK(warp_bilinear(img, identity_grid(13, 9), fill) == img);
  }

  TEST_CASE("samples outside the source take the fill value") {
    SplitMix64 rng(2);
    const ImageBuffer img = oracle::random_image(6, 6, 1, rng);
    SamplingGrid g = identity_grid(6, 6);
    for (double& x : g.sx) x += 3.0;
    const std::vector<double> fill{0.0};
    const ImageBuffer out = warp_bilinear(img, g, fill);
    for (double v : out.data()) CHECK(v == 0.0);
    const std::vector<double> grey{0.25};
    const ImageBuffer grey_out = warp_bilinear(img, g, grey);
    for (double v : grey_out.data()) CHECK(v == 0.25);
  }

  TEST_CASE("midpoint between two pixels is their mean") {
    // 3x3 horizontal ramp 0, 0.5, 1.
    const ImageBuffer ramp(3, 3, 1, std::vector<double>{0, 0.5, 1, 0, 0.5, 1, 0, 0.5, 1});
    SamplingGrid g{1, 1, {}, {}, {1}};
    const Complex mid = normalize_coords(0.5, 1.0, 3, 3);
    g.sx = {mid.real()};
    g.sy = {mid.imag()};
    const ImageBuffer out = warp_bilinear(ramp, g, std::vector<double>{0.0});
    CHECK(out.at(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  }

  TEST_CASE("fill must match the channel count") {
    const ImageBuffer img(4, 4, 3, 0.5);
    CHECK_THROWS_AS(warp_bilinear(img, identity_grid(4, 4), std::vector<double>{0.0}),
                    ChannelMismatch);
    CHECK_THROWS_AS(warp_scatter(img, LogParams{}, std::vector<double>{0.0, 0.0}),
                    ChannelMismatch);
    CHECK_THROWS_AS(warp_bilinear(img, identity_grid(4, 4), std::vector<double>{0.0, 2.0, 0.0}),
                    std::invalid_argument);
  }

  TEST_CASE("bilinear warp agrees with the tent-kernel oracle") {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t channels = trial % 2 ? 3 : 1;
      const ImageBuffer img = oracle::random_image(16, 16, channels, rng);
      const SamplingGrid g = oracle::random_grid(16, 16, rng);
      const std::vector<double> fill(channels, rng.uniform());
      CHECK(max_abs_diff(warp_bilinear(img, g, fill), oracle::bilinear(img, g, fill)) < 1e-6);
    }
  }

  TEST_CASE("identity round trip through build_grid") {
    const ImageBuffer img = oracle::smooth_image(40, 24, 3);
    const ImageBuffer out =
        warp_bilinear(img, build_grid(40, 24, MobiusParams{}), std::vector<double>(3, 0.0));
    CHECK(mean_abs_diff(out, img) < 1e-6);
  }

  TEST_CASE("outputs stay in range and are deterministic") {
    SplitMix64 rng(4);
    const ImageBuffer img = oracle::random_image(32, 32, 4, rng);
    const std::vector<double> fill(4, 1.0);
    const Transform t = LogParams({0.8, 0.3}, {2.5, 0.2});
    const ImageBuffer a = warp(img, t, WarpMode::InverseBilinear, fill);
    const ImageBuffer b = warp(img, t, WarpMode::InverseBilinear, fill);
    CHECK(a == b);
    CHECK(warp(img, t, WarpMode::ForwardScatter, fill) ==
          warp(img, t, WarpMode::ForwardScatter, fill));
    for (double v : a.data()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }

  TEST_CASE("scatter of a constant image writes only that constant") {
    const ImageBuffer img(20, 12, 3, 0.7);
    for (const Transform& t :
         {Transform(LogParams{}), Transform(MobiusParams({1, 0}, {0.2, 0.1}, {0.25, 0.1}, {1, 0}))}) {
      const ImageBuffer out = warp_scatter(img, t, std::vector<double>(3, 0.0));
      for (double v : out.data()) CHECK((v == 0.7 || v == 0.0));
    }
  }

  TEST_CASE("scatter of a single pixel") {
    const ImageBuffer img(1, 1, 3, std::vector<double>{0.1, 0.2, 0.3});
    CHECK(warp_scatter(img, LogParams{}, std::vector<double>(3, 0.0)) == img);
  }

  TEST_CASE("forward scatter of the log map leaves holes") {
    SplitMix64 rng(5);
    const ImageBuffer img = oracle::random_image(224, 224, 1, rng);
    std::size_t holes = 0;
    warp_scatter(img, LogParams{}, std::vector<double>{0.0}, &holes);
    const double fraction = static_cast<double>(holes) / (224.0 * 224.0);
    MESSAGE("hole fraction " << fraction);
    CHECK(fraction > 0.0);
    CHECK(fraction < 1.0);
  }

  TEST_CASE("scatter with later writers overwriting earlier ones") {
    // Identity Möbius is a bijection on the grid: no conflicts, no holes.
    SplitMix64 rng(6);
    const ImageBuffer img = oracle::random_image(9, 7, 1, rng);
    std::size_t holes = 1;
    CHECK(warp_scatter(img, MobiusParams{}, std::vector<double>{0.0}, &holes) == img);
    CHECK(holes == 0);
  }

  TEST_CASE("scatter conflicts resolve to the last source pixel in row-major order") {
    // 1/(z + 3) compresses the frame, so several sources share a target.
    // Replay the forward pass in row-major order; later writes win.
    SplitMix64 rng(7);
    const ImageBuffer img = oracle::random_image(15, 4, 1, rng);
    const Transform t = MobiusParams({0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {3.0, 0.0});
    const MappedFrame frame = map_frame(15, 4, t);
    std::vector<double> expected(15 * 4, 0.0);
    for (std::size_t i = 0; i < 15 * 4; ++i) {
      const long tx = std::lround(denormalize(frame.x[i], 15));
      const long ty = std::lround(denormalize(frame.y[i], 4));
      expected[static_cast<std::size_t>(ty) * 15 + static_cast<std::size_t>(tx)] = img.data()[i];
    }
    const ImageBuffer out = warp_scatter(img, t, std::vector<double>{0.0});
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(out.data()[i] == expected[i]);
  }

  TEST_CASE("scatter matches the hole-free inverse of its own geometry") {
    const ImageBuffer img = oracle::smooth_image(64, 64, 3);
    const std::vector<double> black(3, 0.0);
    const std::vector<double> white(3, 1.0);
    const LogParams p;
    const ImageBuffer dark = warp_scatter(img, p, black);
    const ImageBuffer light = warp_scatter(img, p, white);
    const ImageBuffer inverse = warp_bilinear(img, build_inverse_grid(64, 64, p), black);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < dark.data().size(); ++i) {
      if (dark.data()[i] != light.data()[i]) continue;  // hole
      sum += std::abs(dark.data()[i] - inverse.data()[i]);
      ++n;
    }
    MESSAGE("scatter/inverse MAE " << sum / n << " over " << n << " samples");
    CHECK(n > 0);
    CHECK(sum / n < 0.1);
  }

  TEST_CASE("inverse grid round-trips through the forward map") {
    const Transform t = LogParams({0.9, -0.2}, {2.4, 0.3});
    const MappedFrame frame = map_frame(32, 32, t);
    const SamplingGrid inv = build_inverse_grid(32, 32, t);
    // Pushing each pixel forward then looking it up in the inverse grid
    // returns the pixel's own coordinates.
    for (std::size_t y = 0; y < 32; ++y) {
      for (std::size_t x = 0; x < 32; ++x) {
        const std::size_t i = y * 32 + x;
        const double qx = denormalize(frame.x[i], 32);
        const double qy = denormalize(frame.y[i], 32);
        const std::size_t j = static_cast<std::size_t>(std::lround(qy)) * 32 +
                              static_cast<std::size_t>(std::lround(qx));
        if (std::abs(qx - std::round(qx)) > 1e-9 || std::abs(qy - std::round(qy)) > 1e-9) continue;
        const Complex z = normalize_coords(x, y, 32, 32);
        CHECK(std::abs(inv.sx[j] - z.real()) < 1e-9);
        CHECK(std::abs(inv.sy[j] - z.imag()) < 1e-9);
      }
    }
    // Möbius identity inverts to identity.
    const SamplingGrid id = build_inverse_grid(10, 6, MobiusParams{});
    const SamplingGrid ref = identity_grid(10, 6);
    for (std::size_t i = 0; i < id.size(); ++i) {
      CHECK(std::abs(id.sx[i] - ref.sx[i]) < 1e-9);
      CHECK(std::abs(id.sy[i] - ref.sy[i]) < 1e-9);
    }
  }

  TEST_CASE("padding") {
    const ImageBuffer one(1, 1, 1, 0.4);
    CHECK(pad_image(one, 0, PadPolicy::Reflect) == one);
    const ImageBuffer rep = pad_image(one, 1, PadPolicy::Replicate);
    CHECK(rep.width() == 3);
    CHECK(rep.height() == 3);
    for (double v : rep.data()) CHECK(v == 0.4);
    const ImageBuffer wide_one = pad_image(one, 3, PadPolicy::Reflect);
    for (double v : wide_one.data()) CHECK(v == 0.4);

    // [a, b] reflect with the edge repeated: a a b b.
    const ImageBuffer ab(2, 1, 1, std::vector<double>{0.1, 0.9});
    const ImageBuffer refl = pad_image(ab, 1, PadPolicy::Reflect);
    REQUIRE(refl.width() == 4);
    REQUIRE(refl.height() == 3);
    for (std::size_t y = 0; y < 3; ++y) {
      CHECK(refl.at(0, y) == 0.1);
      CHECK(refl.at(1, y) == 0.1);
      CHECK(refl.at(2, y) == 0.9);
      CHECK(refl.at(3, y) == 0.9);
    }
    // Margins wider than the image keep mirroring: period 2n.
    const ImageBuffer abc(3, 1, 1, std::vector<double>{0.1, 0.5, 0.9});
    const ImageBuffer wide = pad_image(abc, 4, PadPolicy::Reflect);
    const std::vector<double> row{0.9, 0.9, 0.5, 0.1, 0.1, 0.5, 0.9, 0.9, 0.5, 0.1, 0.1};
    for (std::size_t x = 0; x < wide.width(); ++x) CHECK(wide.at(x, 4) == row[x]);

    const ImageBuffer zero = pad_image(ab, 2, PadPolicy::Zero);
    CHECK(zero.at(0, 0) == 0.0);
    CHECK(zero.at(2, 2) == 0.1);
    CHECK(zero.at(3, 2) == 0.9);
    CHECK(crop_margin(zero, 2) == ab);
  }
}
