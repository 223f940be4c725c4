#include "frv/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "frv/errors.hpp"

namespace frv {

Complex green_from_m(Complex m, Complex z) {
  if (z == Complex(0.0)) throw std::domain_error("green_from_m: z = 0");
  return (m + 1.0) / z;
}

double density_from_green(Complex green) {
  if (std::abs(green.imag()) < 1e-12) return 0.0;
  return -green.imag() / std::numbers::pi;
}

Complex m_transform_vma1(Complex z, double a0, double a1) {
  const double bp_hi = (a0 + a1) * (a0 + a1);
  const double bp_lo = (a0 - a1) * (a0 - a1);
  const Complex f1 = z - bp_hi;
  const Complex f2 = z - bp_lo;
  const double tol = 1e-15 * (std::abs(z) + bp_hi + 1.0);
  if (std::abs(f1) < tol || std::abs(f2) < tol)
    throw BranchPointError("m_transform_vma1: z at a branch point");
  return z / (std::sqrt(f1) * std::sqrt(f2)) - 1.0;
}

Complex m_transform_var1(Complex z, double a0, double b1) {
  if (std::abs(b1) >= 1.0)
    throw StationarityError("m_transform_var1 requires |b1| < 1");
  const Complex f1 = 1.0 - (1.0 - b1) * (1.0 - b1) / (a0 * a0) * z;
  const Complex f2 = 1.0 - (1.0 + b1) * (1.0 + b1) / (a0 * a0) * z;
  const double tol = 1e-15 * (1.0 + std::abs(z) * (1.0 + b1) * (1.0 + b1) / (a0 * a0));
  if (std::abs(f1) < tol || std::abs(f2) < tol)
    throw BranchPointError("m_transform_var1: z at a branch point");
  return -1.0 / (std::sqrt(f1) * std::sqrt(f2));
}

Complex m_transform_varma11(Complex z, double a0, double a1, double b1) {
  const Complex pole = a0 * a1 + b1 * z;
  // the pole is removable, but evaluating inside its fp-noise neighborhood
  // is pure cancellation
  if (std::abs(pole) < 1e-12 * (std::abs(a0 * a1) + std::abs(b1 * z)))
    throw PoleError("m_transform_varma11: z at the prefactor pole -a0*a1/b1");
  const Complex f1 = (1.0 - b1) * (1.0 - b1) * z - (a0 + a1) * (a0 + a1);
  const Complex f2 = (1.0 + b1) * (1.0 + b1) * z - (a0 - a1) * (a0 - a1);
  const double tol =
      1e-15 * ((1.0 + b1) * (1.0 + b1) * std::abs(z) + (a0 + a1) * (a0 + a1));
  if (std::abs(f1) < tol || std::abs(f2) < tol)
    throw BranchPointError("m_transform_varma11: z at a branch point");
  const double s = a0 * a1 + (a0 * a0 + a1 * a1) * b1 + a0 * a1 * b1 * b1;
  return (-a0 * a1 + z * s / (std::sqrt(f1) * std::sqrt(f2))) / pole;
}

MTransform m_transform_inverse_law(const MTransform& m) {
  MTransform out;
  out.kind = m.kind;
  for (double bp : m.branch_points)
    if (bp != 0.0) out.branch_points.push_back(1.0 / bp);
  std::sort(out.branch_points.begin(), out.branch_points.end());
  auto inner = m.evaluator;
  out.evaluator = [inner](Complex z) {
    if (z == Complex(0.0))
      throw std::domain_error("inverse-law M-transform undefined at z = 0");
    return -inner(1.0 / z) - 1.0;
  };
  return out;
}

namespace {

// Green's function of a translationally invariant matrix whose symbol is the
// rational function num(y)/den(y) in y = 2 cos p:
//   G(z) = c0 - sum_gamma den(y_gamma) / P'(y_gamma)
//                / (sqrt(y_gamma - 2) sqrt(y_gamma + 2)),
// with P(y) = z den(y) - num(y), y_gamma its roots, and c0 the leading
// coefficient ratio when deg den = deg P. Principal roots throughout.
Complex green_rational_symbol(const Polynomial& num, const Polynomial& den,
                              Complex z) {
  std::vector<Complex> pc(std::max(num.degree(), den.degree()) + 1, Complex(0.0));
  for (int k = 0; k <= den.degree(); ++k) pc[k] += z * den.coeffs()[k];
  for (int k = 0; k <= num.degree(); ++k) pc[k] -= num.coeffs()[k];
  Polynomial p(pc);

  if (p.degree() == 0) {
    if (num.degree() != 0 || den.degree() != 0)
      throw PoleError("symbol leading coefficient vanishes at this z");
    const Complex c = num.coeffs()[0] / den.coeffs()[0];
    return 1.0 / (z - c);
  }
  if (den.degree() > p.degree())
    throw PoleError("symbol leading coefficient vanishes at this z");

  std::vector<Complex> roots = find_roots(p);
  // double roots stall the iteration at the fp noise floor ~ sqrt(eps), so
  // the cluster guard needs headroom above the nominal 1e-8
  require_simple_roots(roots, 1e-7);

  Complex g = (den.degree() == p.degree()) ? den.leading() / p.leading()
                                           : Complex(0.0);
  for (const auto& y : roots) {
    const Complex f1 = y - 2.0;
    const Complex f2 = y + 2.0;
    if (f1 == Complex(0.0) || f2 == Complex(0.0))
      throw BranchPointError("residue Green's function: root at y = +-2");
    g -= den(y) / p.derivative_at(y) / (std::sqrt(f1) * std::sqrt(f2));
  }
  return g;
}

Polynomial constant_one() { return Polynomial::from_real({1.0}); }

}  // namespace

Complex m_transform_general_q(const KappaVector& kappas, Complex z) {
  const Complex g = green_rational_symbol(symbol_polynomial(kappas),
                                          constant_one(), z);
  return z * g - 1.0;
}

Complex m_transform_general_q(const KappaVector& numerator,
                              const KappaVector& denominator, Complex z) {
  const Complex g = green_rational_symbol(symbol_polynomial(numerator),
                                          symbol_polynomial(denominator), z);
  return z * g - 1.0;
}

Complex m_transform_quadrature_oracle(const ProcessSpec& spec, Complex z,
                                      int points) {
  if (points < 512)
    throw std::invalid_argument("quadrature oracle needs at least 512 points");
  double sym_min = std::numeric_limits<double>::infinity();
  double sym_max = -sym_min;
  Complex acc = 0.0;
  for (int k = 0; k < points; ++k) {
    const double p = -std::numbers::pi + 2.0 * std::numbers::pi * k / points;
    const double a = fourier_symbol(spec, p);
    sym_min = std::min(sym_min, a);
    sym_max = std::max(sym_max, a);
    acc += a / (z - a);
  }
  if (z.imag() == 0.0 && z.real() >= sym_min && z.real() <= sym_max)
    throw std::domain_error(
        "quadrature oracle: real z inside the symbol range hits the pole");
  return acc / double(points);
}

MTransform make_m_transform(const ProcessSpec& spec) {
  MTransform m;
  const auto& a = spec.ma_coeffs();
  const auto& b = spec.ar_coeffs();

  if (!spec.has_ar_part() && !spec.has_ma_part()) {
    const double a0sq = a[0] * a[0];
    m.kind = MTransformKind::Identity;
    m.branch_points = {a0sq};
    m.evaluator = [a0sq](Complex z) { return a0sq / (z - a0sq); };
    return m;
  }
  if (!spec.has_ar_part() && spec.q2() == 1) {
    const double a0 = a[0], a1 = a[1];
    m.kind = MTransformKind::Vma1Closed;
    m.branch_points = {(a0 - a1) * (a0 - a1), (a0 + a1) * (a0 + a1)};
    m.evaluator = [a0, a1](Complex z) { return m_transform_vma1(z, a0, a1); };
  } else if (!spec.has_ma_part() && spec.q1() == 1) {
    const double a0 = a[0], b1 = b[0];
    m.kind = MTransformKind::Var1Closed;
    m.branch_points = {a0 * a0 / ((1.0 + std::abs(b1)) * (1.0 + std::abs(b1))),
                       a0 * a0 / ((1.0 - std::abs(b1)) * (1.0 - std::abs(b1)))};
    m.evaluator = [a0, b1](Complex z) { return m_transform_var1(z, a0, b1); };
  } else if (spec.q1() == 1 && spec.q2() == 1 && spec.has_ar_part() &&
             spec.has_ma_part()) {
    const double a0 = a[0], a1 = a[1], b1 = b[0];
    m.kind = MTransformKind::Varma11Closed;
    m.branch_points = {(a0 + a1) * (a0 + a1) / ((1.0 - b1) * (1.0 - b1)),
                       (a0 - a1) * (a0 - a1) / ((1.0 + b1) * (1.0 + b1))};
    m.evaluator = [a0, a1, b1](Complex z) {
      return m_transform_varma11(z, a0, a1, b1);
    };
  } else {
    const KappaVector num = spec.symbol_numerator();
    const KappaVector den = spec.symbol_denominator();
    m.kind = MTransformKind::GeneralResidue;
    // cut endpoints = extrema of the symbol over p
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int k = 0; k < 4096; ++k) {
      const double v =
          fourier_symbol(spec, -std::numbers::pi + 2.0 * std::numbers::pi * k / 4096);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    m.branch_points = {lo, hi};
    m.evaluator = [num, den](Complex z) {
      return m_transform_general_q(num, den, z);
    };
  }
  std::sort(m.branch_points.begin(), m.branch_points.end());
  return m;
}

MTransform identity_m_transform() {
  MTransform m;
  m.kind = MTransformKind::Identity;
  m.branch_points = {1.0};
  m.evaluator = [](Complex z) { return 1.0 / (z - 1.0); };
  return m;
}

}  // namespace frv
