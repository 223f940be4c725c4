#ifndef FRV_SPECTRAL_HPP
#define FRV_SPECTRAL_HPP

#include <array>
#include <optional>
#include <utility>

#include "frv/process.hpp"
#include "frv/transforms.hpp"

namespace frv {

/// Quartic in M for the VMA(1) sample-covariance spectrum.
Polynomial build_vma1_equation(Complex z, double r, double a0, double a1);

/// Quartic in M for the VAR(1) sample-covariance spectrum.
Polynomial build_var1_equation(Complex z, double r, double a0, double b1);

/// Sextic in M for the VARMA(1,1) sample-covariance spectrum. Requires
/// a1 != 0 and b1 != 0 (otherwise the leading coefficient vanishes; use the
/// VAR(1)/VMA(1) builders for the degenerate families).
Polynomial build_varma11_equation(Complex z, double r, double a0, double a1,
                                  double b1);

enum class EquationFamily { Vma1, Var1, Varma11 };

/// Polynomial equation satisfied by M = M_c(z) for one of the closed
/// families; coefficients are real whenever z is real.
struct PolySpectralEquation {
  EquationFamily family;
  double r = 0.0;
  double a0 = 0.0, a1 = 0.0, b1 = 0.0;

  Polynomial at(Complex z) const;
  int expected_degree() const;
};

/// Maps a process spec onto its closed polynomial family. White noise and
/// degenerate VARMA parameters route to the quartics; specs with no closed
/// family (q beyond 1) are rejected (use the general solver).
PolySpectralEquation make_spectral_equation(const ProcessSpec& spec, double r);

/// Limiting spectral density of the Pearson estimator on a lambda grid.
struct DensityCurve {
  std::vector<double> lambdas;
  std::vector<double> rho;
  double r = 0.0;
  std::optional<ProcessSpec> process;
  std::vector<std::pair<double, double>> support_intervals;
  std::vector<double> flagged_points;  // ambiguous root selection
  double normalization = 0.0;          // trapezoid of rho
  double first_moment = 0.0;
  double second_moment = 0.0;
};

/// Solves the family polynomial at each grid point and selects the physical
/// root: non-negative density, Herglotz sign (Im M <= 0 toward the upper
/// half-plane), continuity with the previous point. The continuation is
/// seeded where exactly one admissible root exists, farthest from A(0).
/// eps = 0 works on the real axis with conjugate-pair selection; eps > 0
/// evaluates at lambda + i eps instead.
DensityCurve solve_density_polynomial(const ProcessSpec& spec, double r,
                                      std::vector<double> grid,
                                      double eps = 0.0);

/// Solves r M = M_A(z / (r (1 + M))) by damped Newton continuation along the
/// grid at z = lambda + i eps; works for any stationary spec.
DensityCurve solve_density_general(const ProcessSpec& spec, double r,
                                   std::vector<double> grid,
                                   double eps = 1e-6);

/// Detects the support, then solves on `points` uniform lambdas spanning
/// [max(0, lo - 5% span), hi + 5% span]. Uses the polynomial route when the
/// family has one (and use_general is false), the Newton route otherwise.
DensityCurve solve_density_auto(const ProcessSpec& spec, double r,
                                int points = 1000, bool use_general = false,
                                double eps = 0.0);

/// Trapezoid integral of lambda^k rho(lambda) over the curve, k in 0..4.
double curve_moment(const DensityCurve& curve, int k);

}  // namespace frv

#endif
