#include "lcmwarp/complex_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lcmwarp/errors.hpp"
#include "lcmwarp/rng.hpp"

namespace lcmwarp {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string fmt(Complex z) {
  return std::to_string(z.real()) + "," + std::to_string(z.imag());
}

// kz + c in plain real arithmetic (std::complex multiplication goes through
// the NaN-recovering library routine).
Complex affine_checked(Complex z, const LogParams& p) {
  const Complex k = p.k();
  const Complex c = p.c();
  const Complex w(k.real() * z.real() - k.imag() * z.imag() + c.real(),
                  k.real() * z.imag() + k.imag() * z.real() + c.imag());
  if (!finite(w) || !(w.real() * w.real() + w.imag() * w.imag() > kSingularEps * kSingularEps)) {
    throw SingularInput("log(kz+c) is singular at z=" + fmt(z));
  }
  return w;
}

}  // namespace

double LogParams::domain_margin() const {
  double lo = std::numeric_limits<double>::infinity();
  for (double x : {-1.0, 1.0}) {
    for (double y : {-1.0, 1.0}) {
      lo = std::min(lo, k_.real() * x - k_.imag() * y + c_.real());
    }
  }
  return lo;
}

void LogParams::require_domain_safe() const {
  const double margin = domain_margin();
  if (!(margin > kDomainEps)) {
    throw DomainViolation("Re(kz+c) must stay above " + std::to_string(kDomainEps) +
                          " on [-1,1]^2 but reaches " + std::to_string(margin) + " (k=" +
                          fmt(k_) + " c=" + fmt(c_) + "); increase Re(c) or shrink k");
  }
}

LogParams::LogParams(Complex k, Complex c) : k_(k), c_(c) {
  if (!finite(k) || !finite(c)) {
    throw DomainViolation("k and c must be finite");
  }
  if (k == Complex(0.0, 0.0)) {
    throw DomainViolation("k must be non-zero (the map derivative k/(kz+c) would vanish)");
  }
}

Complex log_conformal_map(Complex z, const LogParams& p) {
  const Complex w = affine_checked(z, p);
  // ln|w| = ln(|w|^2) / 2; |w| is bounded away from 0 and overflow here.
  const double re = 0.5 * std::log(w.real() * w.real() + w.imag() * w.imag());
  double im = std::atan2(w.imag(), w.real());
  // atan2 gives -pi on the cut for a negative-zero imaginary part; the
  // principal branch is closed on the +pi side.
  if (im == -std::numbers::pi) im = std::numbers::pi;
  return {re, im};
}

Complex log_conformal_derivative(Complex z, const LogParams& p) {
  return p.k() / affine_checked(z, p);
}

double JacobianEstimate::cauchy_riemann_residual() const {
  return std::abs(du_dx - dv_dy) + std::abs(du_dy + dv_dx);
}

Complex JacobianEstimate::implied_derivative() const { return {du_dx, dv_dx}; }

JacobianEstimate estimate_jacobian(Complex z, const LogParams& p, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("finite-difference step must be positive");
  }
  affine_checked(z, p);
  const Complex fx_plus = log_conformal_map(z + Complex(h, 0.0), p);
  const Complex fx_minus = log_conformal_map(z - Complex(h, 0.0), p);
  const Complex fy_plus = log_conformal_map(z + Complex(0.0, h), p);
  const Complex fy_minus = log_conformal_map(z - Complex(0.0, h), p);
  const Complex d_dx = (fx_plus - fx_minus) / (2.0 * h);
  const Complex d_dy = (fy_plus - fy_minus) / (2.0 * h);
  return {d_dx.real(), d_dy.real(), d_dx.imag(), d_dy.imag(), h};
}

ConformalityReport conformality_report(const LogParams& p, std::size_t n_points,
                                       std::uint64_t seed, double h) {
  if (n_points == 0) throw std::invalid_argument("n_points must be >= 1");
  p.require_domain_safe();

  constexpr double kSeparation = std::numbers::pi / 4.0;
  SplitMix64 rng(seed);
  ConformalityReport report;
  report.points = n_points;
  for (std::size_t i = 0; i < n_points; ++i) {
    const Complex z(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    const JacobianEstimate j = estimate_jacobian(z, p, h);
    report.max_cr_residual = std::max(report.max_cr_residual, j.cauchy_riemann_residual());

    // Push two unit tangents 45 degrees apart through the Jacobian and
    // compare the angle between their images with the original angle.
    const double base = rng.uniform(0.0, 2.0 * std::numbers::pi);
    auto push = [&](double theta) {
      const double tx = std::cos(theta);
      const double ty = std::sin(theta);
      return Complex(j.du_dx * tx + j.du_dy * ty, j.dv_dx * tx + j.dv_dy * ty);
    };
    const Complex t1 = push(base);
    const Complex t2 = push(base + kSeparation);
    const double mapped = std::abs(std::arg(t2 / t1));
    report.max_angle_error = std::max(report.max_angle_error, std::abs(mapped - kSeparation));
  }
  return report;
}

double nonlinearity_witness(const LogParams& p, Complex z1, Complex z2) {
  const Complex joint = log_conformal_map(z1 + z2, p);
  const Complex split = log_conformal_map(z1, p) + log_conformal_map(z2, p);
  return std::abs(joint - split);
}

}  // namespace lcmwarp
