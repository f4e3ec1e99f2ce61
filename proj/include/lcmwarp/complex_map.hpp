#pragma once

#include <complex>
#include <cstdint>

namespace lcmwarp {

using Complex = std::complex<double>;

// |kz + c| at or below this is treated as the log singularity.
inline constexpr double kSingularEps = 1e-12;
// Minimum Re(kz + c) over the normalized square for parameters to be usable.
inline constexpr double kDomainEps = 1e-6;

// Parameters of the log conformal map  z -> log(k z + c).
//
// Construction only enforces finite values and k != 0; pointwise evaluation
// is meaningful anywhere off the singularity. Anything that works over the
// normalized image square [-1,1]^2 additionally requires domain safety:
// Re(k z + c) > kDomainEps on every corner. Since z -> kz + c is affine its
// real part attains its minimum over the square at a corner, so a safe
// parameter set keeps the whole square in the open right half-plane, away
// from the branch cut and the singularity.
class LogParams {
 public:
  // Defaults: k = 1, c = 2, mapping the domain onto [1,3] x [-1,1].
  LogParams() = default;
  // Throws DomainViolation for k == 0 or non-finite values.
  LogParams(Complex k, Complex c);

  Complex k() const { return k_; }
  Complex c() const { return c_; }

  // Smallest Re(kz + c) over the corners of [-1,1]^2.
  double domain_margin() const;
  bool domain_safe() const { return domain_margin() > kDomainEps; }
  // Throws DomainViolation with an actionable message unless domain_safe().
  void require_domain_safe() const;

 private:
  Complex k_{1.0, 0.0};
  Complex c_{2.0, 0.0};
};

// Principal-branch log(kz + c), imaginary part in (-pi, pi].
// Throws SingularInput when |kz + c| <= kSingularEps.
Complex log_conformal_map(Complex z, const LogParams& p);

// Closed form k / (kz + c). Throws SingularInput like log_conformal_map.
Complex log_conformal_derivative(Complex z, const LogParams& p);

// Central-difference partials of u + iv = log(k(x+iy) + c).
struct JacobianEstimate {
  double du_dx = 0.0;
  double du_dy = 0.0;
  double dv_dx = 0.0;
  double dv_dy = 0.0;
  double step = 0.0;

  // |du/dx - dv/dy| + |du/dy + dv/dx|; zero for a holomorphic map.
  double cauchy_riemann_residual() const;
  // The complex derivative implied by the partials, du/dx + i dv/dx.
  Complex implied_derivative() const;
};

// Throws std::invalid_argument for h <= 0 (or non-finite h) and
// SingularInput if a probe point hits the singularity.
JacobianEstimate estimate_jacobian(Complex z, const LogParams& p, double h);

struct ConformalityReport {
  double max_cr_residual = 0.0;
  double max_angle_error = 0.0;  // radians
  std::size_t points = 0;
};

// Samples n_points seeded points in [-1,1]^2 and measures how far the
// finite-difference Jacobian is from a rotation-scaling. Throws
// std::invalid_argument for n_points == 0, DomainViolation for unsafe params.
ConformalityReport conformality_report(const LogParams& p, std::size_t n_points,
                                       std::uint64_t seed, double h = 1e-4);

// |Psi(z1 + z2) - (Psi(z1) + Psi(z2))|.
double nonlinearity_witness(const LogParams& p, Complex z1, Complex z2);

}  // namespace lcmwarp
