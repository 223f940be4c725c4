#include "frv/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "frv/errors.hpp"

namespace frv {

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("polynomial needs coefficients");
  double maxmag = 0.0;
  for (const auto& c : coeffs_) maxmag = std::max(maxmag, std::abs(c));
  if (maxmag == 0.0) throw std::invalid_argument("zero polynomial");
  while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= 1e-14 * maxmag)
    coeffs_.pop_back();
}

Polynomial Polynomial::from_real(const std::vector<double>& coeffs) {
  std::vector<Complex> c(coeffs.begin(), coeffs.end());
  return Polynomial(std::move(c));
}

double Polynomial::max_coeff_magnitude() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Complex Polynomial::operator()(Complex z) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex Polynomial::derivative_at(Complex z) const {
  Complex acc = 0.0;
  for (int k = degree(); k >= 1; --k) acc = acc * z + double(k) * coeffs_[k];
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (degree() == 0) return Polynomial({Complex(0.0)});
  std::vector<Complex> d(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = double(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

namespace {

// Factors out exact zero roots (zero low-order coefficients) so the Aberth
// iteration only sees a polynomial with nonzero constant term.
int strip_zero_roots(std::vector<Complex>& c) {
  int n = 0;
  while (c.size() > 1 && c.front() == Complex(0.0)) {
    c.erase(c.begin());
    ++n;
  }
  return n;
}

}  // namespace

std::vector<Complex> find_roots(const Polynomial& p, const RootFindOptions& opts) {
  if (p.degree() < 1) throw std::invalid_argument("find_roots: degree must be >= 1");

  std::vector<Complex> c = p.coeffs();
  std::vector<Complex> roots;
  int zeros = strip_zero_roots(c);
  roots.assign(zeros, Complex(0.0));
  const int n = static_cast<int>(c.size()) - 1;
  if (n == 0) return roots;
  if (n == 1) {
    roots.push_back(-c[0] / c[1]);
    return roots;
  }

  Polynomial q(c);
  // Cauchy bound: all roots lie within |z| <= 1 + max_k |c_k / c_n|.
  double ratio = 0.0;
  for (int k = 0; k < n; ++k) ratio = std::max(ratio, std::abs(c[k] / c[n]));
  const double radius = 1.0 + ratio;

  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k) {
    // asymmetric angular offset breaks conjugate symmetry of the start points
    double theta = 2.0 * std::numbers::pi * (k + 0.25) / n + 0.5;
    z[k] = radius * Complex(std::cos(theta), std::sin(theta));
  }

  // backward-error bound: |p(z)| <= 4 eps sum |c_j| |z|^j means z is an exact
  // root of a polynomial within rounding noise of q
  auto residual_floor = [&c, n](double az) {
    double s = 0.0;
    for (int j = n; j >= 0; --j) s = s * az + std::abs(c[j]);
    return 4.0 * std::numeric_limits<double>::epsilon() * s;
  };

  std::vector<bool> settled(n, false);
  bool converged = false;
  for (int it = 0; it < opts.max_iterations && !converged; ++it) {
    converged = true;
    for (int k = 0; k < n; ++k) {
      if (settled[k]) continue;
      Complex pv = q(z[k]);
      if (std::abs(pv) <= residual_floor(std::abs(z[k]))) {
        settled[k] = true;
        continue;
      }
      Complex dv = q.derivative_at(z[k]);
      if (dv == Complex(0.0)) {
        z[k] += Complex(1e-8 * (1.0 + std::abs(z[k])), 1e-8);
        converged = false;
        continue;
      }
      Complex newton = pv / dv;
      Complex sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        Complex diff = z[k] - z[j];
        if (diff == Complex(0.0)) diff = Complex(1e-14, 1e-14);
        sum += 1.0 / diff;
      }
      Complex denom = 1.0 - newton * sum;
      Complex step = (denom == Complex(0.0)) ? newton : newton / denom;
      z[k] -= step;
      if (std::abs(step) <= opts.tolerance * (1.0 + std::abs(z[k])))
        settled[k] = true;
      else
        converged = false;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "find_roots: Aberth iteration did not converge within "
        << opts.max_iterations << " iterations (degree " << n << ")";
    throw NumericError(msg.str());
  }

  for (int k = 0; k < n; ++k) {
    for (int s = 0; s < opts.polish_steps; ++s) {
      Complex pv = q(z[k]);
      if (std::abs(pv) <= residual_floor(std::abs(z[k]))) break;
      Complex dv = q.derivative_at(z[k]);
      if (dv == Complex(0.0)) break;
      Complex step = pv / dv;
      if (!(std::abs(step) < 1.0 + std::abs(z[k]))) break;  // guards NaN
      z[k] -= step;
    }
  }

  const double scale = q.max_coeff_magnitude();
  for (int k = 0; k < n; ++k) {
    double bound = 1e-10 * scale * std::pow(std::max(1.0, std::abs(z[k])), n);
    if (!(std::abs(q(z[k])) < bound)) {
      std::ostringstream msg;
      msg << "find_roots: residual " << std::abs(q(z[k])) << " exceeds bound "
          << bound << " at root " << z[k];
      throw NumericError(msg.str());
    }
  }

  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

void require_simple_roots(const std::vector<Complex>& roots, double tol) {
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) <
          tol * (1.0 + std::abs(roots[i]) + std::abs(roots[j]))) {
        std::ostringstream msg;
        msg << "repeated root near " << roots[i] << " (separation "
            << std::abs(roots[i] - roots[j]) << " < " << tol << ")";
        throw DegenerateRootError(msg.str());
      }
}

std::vector<Complex> roots_inside_unit_disk(const std::vector<Complex>& roots) {
  std::vector<Complex> inside;
  for (const auto& x : roots) {
    double m = std::abs(x);
    if (std::abs(m - 1.0) < 1e-12)
      throw BoundaryRootError("root on the unit circle: process not stationary");
    if (m < 1.0) inside.push_back(x);
  }
  return inside;
}

}  // namespace frv
