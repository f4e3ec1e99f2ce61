#pragma once

#include <cstdint>

#include "lcmwarp/complex_map.hpp"

namespace lcmwarp {

// |ad - bc| at or below this is a degenerate (constant) map.
inline constexpr double kDeterminantEps = 1e-9;

// Coefficients of z -> (az + b) / (cz + d).
class MobiusParams {
 public:
  // Identity.
  MobiusParams() = default;
  // Throws DomainViolation if |ad - bc| <= kDeterminantEps or any
  // coefficient is non-finite.
  MobiusParams(Complex a, Complex b, Complex c, Complex d);

  Complex a() const { return a_; }
  Complex b() const { return b_; }
  Complex c() const { return c_; }
  Complex d() const { return d_; }
  Complex determinant() const { return a_ * d_ - b_ * c_; }

 private:
  Complex a_{1.0, 0.0};
  Complex b_{0.0, 0.0};
  Complex c_{0.0, 0.0};
  Complex d_{1.0, 0.0};
};

// Map equal to applying `inner` first, then `outer` (coefficient matrix
// product outer * inner).
MobiusParams compose(const MobiusParams& outer, const MobiusParams& inner);

// (az + b) / (cz + d) through the explicit real/imaginary quotient formulas.
// Throws NearSingularity when |cz + d| <= kSingularEps.
Complex mobius_map(Complex z, const MobiusParams& p);

// Real floating-point operations spent in the quotient stage of one
// mobius_map call, counted by running the same kernel on an instrumented
// scalar. Forming az + b and cz + d is not part of the count.
std::uint64_t mobius_flop_trace(Complex z, const MobiusParams& p);

}  // namespace lcmwarp
