#ifndef FRV_POLYNOMIAL_HPP
#define FRV_POLYNOMIAL_HPP

#include <complex>
#include <vector>

namespace frv {

using Complex = std::complex<double>;

/// Dense univariate polynomial with complex coefficients, ascending degree.
/// Construction trims leading (highest-degree) coefficients whose magnitude
/// is below 1e-14 relative to the largest coefficient.
class Polynomial {
 public:
  explicit Polynomial(std::vector<Complex> coeffs);
  static Polynomial from_real(const std::vector<double>& coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex leading() const { return coeffs_.back(); }
  double max_coeff_magnitude() const;

  Complex operator()(Complex z) const;
  Complex derivative_at(Complex z) const;
  Polynomial derivative() const;

 private:
  std::vector<Complex> coeffs_;
};

struct RootFindOptions {
  int max_iterations = 200;
  double tolerance = 1e-13;
  int polish_steps = 3;
};

/// All complex roots of `p` by Aberth-Ehrlich simultaneous iteration started
/// on a circle of the Cauchy radius, followed by Newton polishing.
/// Returns exactly degree() roots. Throws NumericError on non-convergence
/// and std::invalid_argument for degree < 1.
std::vector<Complex> find_roots(const Polynomial& p,
                                const RootFindOptions& opts = {});

/// Rejects root multisets containing a pair closer than
/// tol * (1 + |r_i| + |r_j|); used by the residue factorizations, which
/// assume simple roots.
void require_simple_roots(const std::vector<Complex>& roots,
                          double tol = 1e-8);

/// Keeps roots with |x| < 1 - 1e-12. A root within 1e-12 of the unit circle
/// raises BoundaryRootError (non-stationary process).
std::vector<Complex> roots_inside_unit_disk(const std::vector<Complex>& roots);

}  // namespace frv

#endif
