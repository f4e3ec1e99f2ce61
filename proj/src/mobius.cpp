#include "lcmwarp/mobius.hpp"

#include <cmath>
#include <string>

#include "lcmwarp/errors.hpp"

namespace lcmwarp {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Scalar that tallies every arithmetic operation applied to it.
struct CountedReal {
  double value;
  std::uint64_t* tally;

  CountedReal bump(double v) const {
    ++*tally;
    return {v, tally};
  }
  friend CountedReal operator+(CountedReal x, CountedReal y) { return x.bump(x.value + y.value); }
  friend CountedReal operator-(CountedReal x, CountedReal y) { return x.bump(x.value - y.value); }
  friend CountedReal operator*(CountedReal x, CountedReal y) { return x.bump(x.value * y.value); }
  friend CountedReal operator/(CountedReal x, CountedReal y) { return x.bump(x.value / y.value); }
};

template <typename Real>
struct Quotient {
  Real re;
  Real im;
};

// Re/Im of (nr + i ni) / (dr + i di), each component written out in full:
//   Re = (nr dr + ni di) / (dr^2 + di^2)
//   Im = (ni dr - nr di) / (dr^2 + di^2)
// Seven operations per component. The compiler folds the repeated
// denominator for plain doubles; the instrumented path sees both.
template <typename Real>
Quotient<Real> quotient(Real nr, Real ni, Real dr, Real di) {
  Real re = (nr * dr + ni * di) / (dr * dr + di * di);
  Real im = (ni * dr - nr * di) / (dr * dr + di * di);
  return {re, im};
}

struct LinearForms {
  double nr, ni, dr, di;
};

LinearForms linear_forms(Complex z, const MobiusParams& p) {
  auto affine = [z](Complex m, Complex t) {
    return Complex(m.real() * z.real() - m.imag() * z.imag() + t.real(),
                   m.real() * z.imag() + m.imag() * z.real() + t.imag());
  };
  const Complex num = affine(p.a(), p.b());
  const Complex den = affine(p.c(), p.d());
  if (!finite(den) || !(den.real() * den.real() + den.imag() * den.imag() > kSingularEps * kSingularEps)) {
    throw NearSingularity("Möbius denominator cz+d vanishes at z=" + std::to_string(z.real()) +
                          "," + std::to_string(z.imag()));
  }
  return {num.real(), num.imag(), den.real(), den.imag()};
}

}  // namespace

MobiusParams::MobiusParams(Complex a, Complex b, Complex c, Complex d)
    : a_(a), b_(b), c_(c), d_(d) {
  if (!finite(a) || !finite(b) || !finite(c) || !finite(d)) {
    throw DomainViolation("Möbius coefficients must be finite");
  }
  if (!(std::abs(determinant()) > kDeterminantEps)) {
    throw DomainViolation("Möbius coefficients are degenerate: |ad-bc| = " +
                          std::to_string(std::abs(determinant())));
  }
}

MobiusParams compose(const MobiusParams& outer, const MobiusParams& inner) {
  return MobiusParams(outer.a() * inner.a() + outer.b() * inner.c(),
                      outer.a() * inner.b() + outer.b() * inner.d(),
                      outer.c() * inner.a() + outer.d() * inner.c(),
                      outer.c() * inner.b() + outer.d() * inner.d());
}

Complex mobius_map(Complex z, const MobiusParams& p) {
  const LinearForms f = linear_forms(z, p);
  const auto q = quotient(f.nr, f.ni, f.dr, f.di);
  return {q.re, q.im};
}

std::uint64_t mobius_flop_trace(Complex z, const MobiusParams& p) {
  const LinearForms f = linear_forms(z, p);
  std::uint64_t tally = 0;
  quotient(CountedReal{f.nr, &tally}, CountedReal{f.ni, &tally}, CountedReal{f.dr, &tally},
           CountedReal{f.di, &tally});
  return tally;
}

}  // namespace lcmwarp
