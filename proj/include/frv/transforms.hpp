#ifndef FRV_TRANSFORMS_HPP
#define FRV_TRANSFORMS_HPP

#include <functional>

#include "frv/process.hpp"

namespace frv {

/// G = (M + 1) / z. Throws std::domain_error for z = 0.
Complex green_from_m(Complex m, Complex z);

/// Boundary density rho = -(1/pi) Im G, with |Im G| < 1e-12 clamped to zero
/// as off-support noise.
double density_from_green(Complex green);

/// M-transform of the tri-diagonal VMA(1) auto-covariance,
///   M(z) = z / (sqrt(z - (a0+a1)^2) sqrt(z - (a0-a1)^2)) - 1,
/// principal square roots taken separately.
Complex m_transform_vma1(Complex z, double a0, double a1);

/// M-transform of the VAR(1) auto-covariance,
///   M(z) = -1 / (sqrt(1 - (1-b1)^2 z / a0^2) sqrt(1 - (1+b1)^2 z / a0^2)).
Complex m_transform_var1(Complex z, double a0, double b1);

/// M-transform of the VARMA(1,1) auto-covariance (closed form with a
/// removable prefactor pole at z = -a0 a1 / b1, where evaluation throws).
Complex m_transform_varma11(Complex z, double a0, double a1, double b1);

enum class MTransformKind {
  Vma1Closed,
  Var1Closed,
  Varma11Closed,
  GeneralResidue,
  Identity,
  QuadratureOracle,
};

/// A callable M-transform together with the real branch points of its cuts.
struct MTransform {
  std::function<Complex(Complex)> evaluator;
  MTransformKind kind = MTransformKind::GeneralResidue;
  std::vector<double> branch_points;

  Complex operator()(Complex z) const { return evaluator(z); }
};

/// M_{H^-1}(z) = -M_H(1/z) - 1; an involution.
MTransform m_transform_inverse_law(const MTransform& m);

/// M-transform of a banded auto-covariance with weights `kappas`, assembled
/// by the residue expansion over the roots of the symbol polynomial in
/// y = 2 cos p.
Complex m_transform_general_q(const KappaVector& kappas, Complex z);

/// Same residue machinery for a rational symbol num/den: the partial
/// fractions run over the roots of z * den(y) - num(y).
Complex m_transform_general_q(const KappaVector& numerator,
                              const KappaVector& denominator, Complex z);

/// Trapezoid evaluation of (1/2pi) Int A^(p) / (z - A^(p)) dp on [-pi, pi].
/// Spectrally accurate for the periodic integrand. Real z inside the symbol
/// range is rejected (the integrand would cross a pole).
Complex m_transform_quadrature_oracle(const ProcessSpec& spec, Complex z,
                                      int points = 8192);

/// Closed form where one exists for the family, general residue otherwise.
MTransform make_m_transform(const ProcessSpec& spec);

/// M-transform of the identity matrix, M(z) = 1/(z-1).
MTransform identity_m_transform();

}  // namespace frv

#endif
