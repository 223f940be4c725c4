#include "frv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "frv/errors.hpp"

namespace frv {

Polynomial build_vma1_equation(Complex z, double r, double a0, double a1) {
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  const double s = a0 * a0 + a1 * a1;
  const double dd = (a0 * a0 - a1 * a1) * (a0 * a0 - a1 * a1);
  std::vector<Complex> c(5);
  c[4] = std::pow(r, 4) * dd;
  c[3] = 2.0 * std::pow(r, 3) * (-s * z + dd * (r + 1.0));
  c[2] = r * r * (z * z - 2.0 * s * (r + 2.0) * z + dd * (r * r + 4.0 * r + 1.0));
  c[1] = 2.0 * r * (z * z - s * (2.0 * r + 1.0) * z + dd * r * (r + 1.0));
  c[0] = r * (-2.0 * s * z + dd * r);
  return Polynomial(std::move(c));
}

Polynomial build_var1_equation(Complex z, double r, double a0, double b1) {
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  if (!(std::abs(b1) < 1.0)) throw StationarityError("|b1| must be < 1");
  const double a02 = a0 * a0, a04 = a02 * a02;
  const double bb = 1.0 + b1 * b1;
  std::vector<Complex> c(5);
  c[4] = a04 * r * r;
  c[3] = 2.0 * a02 * r * (-bb * z + a02 * r);
  c[2] = (1.0 - b1 * b1) * (1.0 - b1 * b1) * z * z - 2.0 * a02 * r * bb * z +
         (r * r - 1.0) * a04;
  c[1] = -2.0 * a04;
  c[0] = -a04;
  return Polynomial(std::move(c));
}

Polynomial build_varma11_equation(Complex z, double r, double a0, double a1,
                                  double b1) {
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  if (!(std::abs(b1) < 1.0)) throw StationarityError("|b1| must be < 1");
  if (a1 == 0.0 || b1 == 0.0)
    throw std::invalid_argument(
        "degenerate VARMA(1,1) family: leading coefficient vanishes; "
        "use the VAR(1)/VMA(1) equation instead");

  const double pp = a0 * a1;                      // a0 a1
  const double s = a0 * a0 + a1 * a1;             // a0^2 + a1^2
  const double m2 = a0 * a0 * a1 * a1;            // a0^2 a1^2
  const double dd = (a0 * a0 - a1 * a1) * (a0 * a0 - a1 * a1);
  const double q4 = std::pow(a0, 4) + std::pow(a1, 4);
  const double b2 = b1 * b1 + 1.0;
  const double b4 = std::pow(b1, 4) + 1.0;
  const Complex z2 = z * z, z3 = z2 * z, z4 = z3 * z;

  std::vector<Complex> c(7);
  c[6] = std::pow(r, 4) * m2 * dd;
  c[5] = 2.0 * std::pow(r, 3) * pp *
         (((q4 - 6.0 * m2) * b1 - pp * s * b2) * z + (1.0 + 2.0 * r) * pp * dd);
  c[4] = r * r *
         (((q4 - 20.0 * m2) * b1 * b1 - 4.0 * pp * s * b1 * b2 + m2 * b4) * z2 +
          2.0 * pp *
              (((1.0 + 3.0 * r) * q4 - 2.0 * (5.0 + 9.0 * r) * m2) * b1 -
               (2.0 + 3.0 * r) * pp * s * b2) *
              z +
          (1.0 + 8.0 * r + 6.0 * r * r) * m2 * dd);
  c[3] = 2.0 * r *
         (b1 * (-6.0 * pp * b1 * b1 - s * b1 * b2 + pp * b4) * z3 +
          ((-10.0 * (1.0 + 2.0 * r) * m2 + r * q4) * b1 * b1 -
           2.0 * (1.0 + 2.0 * r) * pp * s * b1 * b2 + (1.0 + r) * m2 * b4) *
              z2 +
          pp *
              ((3.0 * r * (1.0 + r) * q4 -
                2.0 * (2.0 + 15.0 * r + 9.0 * r * r) * m2) *
                   b1 -
               (1.0 + 6.0 * r + 3.0 * r * r) * pp * s * b2) *
              z +
          2.0 * r * (1.0 + 3.0 * r + r * r) * m2 * dd);
  c[2] = b1 * b1 * (1.0 - b1 * b1) * (1.0 - b1 * b1) * z4 +
         2.0 * b1 *
             (-2.0 * (1.0 + 3.0 * r) * pp * b1 * b1 - r * s * b1 * b2 +
              (1.0 + r) * pp * b4) *
             z3 +
         (-((1.0 - r * r) * q4 + 2.0 * (3.0 + 20.0 * r + 10.0 * r * r) * m2) *
              b1 * b1 -
          2.0 * (1.0 + 4.0 * r + 2.0 * r * r) * pp * s * b1 * b2 +
          r * (4.0 + r) * m2 * b4) *
             z2 +
         2.0 * r * pp *
             ((r * (3.0 + r) * q4 - 6.0 * (2.0 + 5.0 * r + r * r) * m2) * b1 -
              (3.0 + 6.0 * r + r * r) * pp * s * b2) *
             z +
         r * r * (6.0 + 8.0 * r + r * r) * m2 * dd;
  c[1] = 2.0 * (pp * b1 * (1.0 - b1 * b1) * (1.0 - b1 * b1) * z3 +
                (-(q4 + 2.0 * (3.0 + 5.0 * r) * m2) * b1 * b1 -
                 2.0 * (1.0 + r) * pp * s * b1 * b2 + r * m2 * b4) *
                    z2 +
                r * pp *
                    ((r * q4 - 2.0 * (6.0 + 5.0 * r) * m2) * b1 -
                     (3.0 + 2.0 * r) * pp * s * b2) *
                    z +
                r * r * (2.0 + r) * m2 * dd);
  c[0] = -b1 * ((q4 + 6.0 * m2) * b1 + 2.0 * pp * s * b2) * z2 -
         2.0 * r * m2 * (4.0 * pp * b1 + s * b2) * z + r * r * m2 * dd;
  return Polynomial(std::move(c));
}

Polynomial PolySpectralEquation::at(Complex z) const {
  switch (family) {
    case EquationFamily::Vma1:
      return build_vma1_equation(z, r, a0, a1);
    case EquationFamily::Var1:
      return build_var1_equation(z, r, a0, b1);
    case EquationFamily::Varma11:
      return build_varma11_equation(z, r, a0, a1, b1);
  }
  throw std::logic_error("unreachable");
}

int PolySpectralEquation::expected_degree() const {
  return family == EquationFamily::Varma11 ? 6 : 4;
}

PolySpectralEquation make_spectral_equation(const ProcessSpec& spec, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  PolySpectralEquation eq;
  eq.r = r;
  eq.a0 = spec.ma_coeffs()[0];
  const bool ar = spec.has_ar_part();
  const bool ma = spec.has_ma_part();
  if (!ar && spec.q2() <= 1) {
    eq.family = EquationFamily::Vma1;
    eq.a1 = spec.q2() == 1 ? spec.ma_coeffs()[1] : 0.0;
  } else if (ar && !ma && spec.q1() == 1) {
    eq.family = EquationFamily::Var1;
    eq.b1 = spec.ar_coeffs()[0];
  } else if (ar && ma && spec.q1() == 1 && spec.q2() == 1) {
    eq.family = EquationFamily::Varma11;
    eq.a1 = spec.ma_coeffs()[1];
    eq.b1 = spec.ar_coeffs()[0];
  } else {
    throw std::invalid_argument(
        "no closed polynomial family for this process order; "
        "use solve_density_general");
  }
  return eq;
}

namespace {

// Relative Im threshold separating conjugate-pair roots from real ones.
// Near-degenerate real pairs carry fp noise up to ~sqrt(eps) in Im, so this
// sits well above that; genuine pairs one grid spacing inside a support edge
// carry relative Im of order 1e-2.
constexpr double kAdmissibleTol = 1e-6;

double rel_im(Complex m) { return m.imag() / (1.0 + std::abs(m)); }

bool is_admissible(Complex m) { return rel_im(m) < -kAdmissibleTol; }
bool is_real_root(Complex m) { return std::abs(rel_im(m)) <= kAdmissibleTol; }

std::vector<Complex> equation_roots(const PolySpectralEquation& eq, Complex z) {
  return find_roots(eq.at(z));
}

// Clearing denominators plants parasite roots near M = -1 (the composition
// argument z/(r(1+M)) diverges there). A genuine root reproduces the
// underlying fixed-point relation r M = M_A(z/(r(1+M))); parasites miss it
// by O(r). Only complex candidates need this: real roots carry no density.
class RootValidator {
 public:
  RootValidator(const ProcessSpec& spec, double r)
      : r_(r), m_auto_(make_m_transform(spec)) {}

  bool genuine(Complex m, Complex z) const {
    const Complex denom = r_ * (1.0 + m);
    if (denom == Complex(0.0)) return false;
    try {
      const Complex residual = r_ * m - m_auto_(z / denom);
      return std::abs(residual) < 1e-6 * (1.0 + std::abs(r_ * m));
    } catch (const std::exception&) {
      return true;  // cut/branch-point evaluation: give the root the benefit
    }
  }

 private:
  double r_;
  MTransform m_auto_;
};

// Physical-branch density at a selected root.
double density_at(Complex m, double lambda, double eps) {
  if (eps == 0.0 && is_real_root(m)) return 0.0;
  const Complex z(lambda, eps);
  if (z == Complex(0.0)) return 0.0;
  return std::max(0.0, density_from_green(green_from_m(m, z)));
}

void finalize_curve(DensityCurve& curve) {
  double n = 0.0, m1 = 0.0, m2 = 0.0;
  for (size_t i = 0; i + 1 < curve.lambdas.size(); ++i) {
    const double h = curve.lambdas[i + 1] - curve.lambdas[i];
    const double ra = curve.rho[i], rb = curve.rho[i + 1];
    const double la = curve.lambdas[i], lb = curve.lambdas[i + 1];
    n += 0.5 * h * (ra + rb);
    m1 += 0.5 * h * (ra * la + rb * lb);
    m2 += 0.5 * h * (ra * la * la + rb * lb * lb);
  }
  curve.normalization = n;
  curve.first_moment = m1;
  curve.second_moment = m2;
}

// True when the equation at real lambda has a genuine conjugate pair (some
// validated root with a clearly negative relative imaginary part): lambda is
// inside a bulk.
bool inside_support(const PolySpectralEquation& eq, const RootValidator& check,
                    double lambda) {
  const Complex z(lambda, 0.0);
  std::vector<Complex> roots;
  try {
    roots = equation_roots(eq, z);
  } catch (const std::invalid_argument&) {
    return false;  // collapsed equation: no conjugate pair here
  }
  for (const auto& m : roots)
    if (is_admissible(m) && check.genuine(m, z)) return true;
  return false;
}

double bisect_edge(const PolySpectralEquation& eq, const RootValidator& check,
                   double lo, double hi, bool lo_inside) {
  // invariant: inside_support(lo) == lo_inside != inside_support(hi)
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (inside_support(eq, check, mid) == lo_inside)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DensityCurve solve_density_polynomial(const ProcessSpec& spec, double r,
                                      std::vector<double> grid, double eps) {
  if (grid.size() < 2 || !std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("grid must be ascending with >= 2 points");
  const PolySpectralEquation eq = make_spectral_equation(spec, r);
  const RootValidator check(spec, r);
  const double a0cov = autocovariance(spec)(0);

  const size_t n = grid.size();
  std::vector<std::vector<Complex>> roots(n);
  for (size_t i = 0; i < n; ++i) {
    try {
      roots[i] = equation_roots(eq, Complex(grid[i], eps));
    } catch (const std::invalid_argument&) {
      // the equation can collapse at isolated points (all coefficients
      // vanish, e.g. z = 0 with a0 = a1); such points carry no roots
      roots[i].clear();
    }
  }

  auto admissible_genuine = [&](Complex m, size_t i) {
    return is_admissible(m) && check.genuine(m, Complex(grid[i], eps));
  };

  // seed: unique admissible root, farthest from the mean A(0)
  size_t seed = n;
  double best = -1.0;
  for (size_t i = 0; i < n; ++i) {
    int count = 0;
    for (const auto& m : roots[i]) count += admissible_genuine(m, i) ? 1 : 0;
    if (count == 1 && std::abs(grid[i] - a0cov) > best) {
      best = std::abs(grid[i] - a0cov);
      seed = i;
    }
  }
  if (seed == n)
    throw SolverError(
        "no admissible root at any candidate seed point: support not visible "
        "on this grid");

  DensityCurve curve;
  curve.lambdas = grid;
  curve.rho.assign(n, 0.0);
  curve.r = r;
  curve.process = spec;

  std::vector<Complex> selected(n);
  std::vector<bool> in_support(n, false);
  for (const auto& m : roots[seed])
    if (admissible_genuine(m, seed)) selected[seed] = m;

  auto walk = [&](size_t from, int step) {
    Complex prev = selected[from];
    for (long i = long(from) + step; i >= 0 && i < long(n); i += step) {
      if (roots[i].empty()) {
        selected[i] = prev;  // degenerate point: carry the branch over
        continue;
      }
      // Herglotz side only: conjugate partners with Im M > 0 are never
      // physical as Im z -> 0+; complex candidates must also pass the
      // fixed-point validation (parasite rejection)
      std::vector<Complex> cands;
      for (const auto& m : roots[i])
        if (rel_im(m) <= kAdmissibleTol &&
            (!is_admissible(m) || check.genuine(m, Complex(grid[i], eps))))
          cands.push_back(m);
      if (cands.empty()) cands = roots[i];
      std::sort(cands.begin(), cands.end(), [&](Complex x, Complex y) {
        return std::abs(x - prev) < std::abs(y - prev);
      });
      // ambiguity flag: two distinct admissible roots nearly coincide
      if (cands.size() >= 2 && is_admissible(cands[0]) &&
          is_admissible(cands[1]) && std::abs(cands[0] - cands[1]) < 1e-6)
        curve.flagged_points.push_back(grid[i]);
      selected[i] = cands[0];
      prev = cands[0];
    }
  };
  walk(seed, +1);
  walk(seed, -1);

  for (size_t i = 0; i < n; ++i) {
    if (roots[i].empty()) continue;  // degenerate point: rho stays 0
    curve.rho[i] = density_at(selected[i], grid[i], eps);
    in_support[i] =
        eps == 0.0 ? admissible_genuine(selected[i], i) : curve.rho[i] > 0.0;
  }

  // support edges: admissibility flips refined by bisection (real axis only)
  if (eps == 0.0) {
    std::vector<double> edges;
    if (in_support.front()) edges.push_back(grid.front());
    for (size_t i = 0; i + 1 < n; ++i)
      if (in_support[i] != in_support[i + 1])
        edges.push_back(
            bisect_edge(eq, check, grid[i], grid[i + 1], in_support[i]));
    if (in_support.back()) edges.push_back(grid.back());
    for (size_t i = 0; i + 1 < edges.size(); i += 2)
      curve.support_intervals.emplace_back(edges[i], edges[i + 1]);
  } else {
    // finite-eps fallback: contiguous runs of positive density
    bool open = false;
    double lo = 0.0;
    for (size_t i = 0; i < n; ++i) {
      if (in_support[i] && !open) {
        open = true;
        lo = grid[i];
      } else if (!in_support[i] && open) {
        open = false;
        curve.support_intervals.emplace_back(lo, grid[i - 1]);
      }
    }
    if (open) curve.support_intervals.emplace_back(lo, grid.back());
  }

  finalize_curve(curve);
  return curve;
}

namespace {

struct FundamentalEquation {
  double r;
  MTransform m_auto;

  Complex argument(Complex m, Complex z) const { return z / (r * (1.0 + m)); }
  Complex residual(Complex m, Complex z) const {
    return r * m - m_auto(argument(m, z));
  }
};

Complex newton_solve(const FundamentalEquation& fe, Complex z, Complex m0,
                     bool& ok) {
  Complex m = m0;
  ok = false;
  for (int it = 0; it < 100; ++it) {
    Complex f;
    try {
      f = fe.residual(m, z);
    } catch (const std::exception&) {
      m += Complex(1e-6, 1e-6);
      continue;
    }
    if (std::abs(f) < 1e-12 * (1.0 + std::abs(fe.r * m))) {
      ok = true;
      return m;
    }
    const double h = 1e-7 * (1.0 + std::abs(m));
    Complex fp, fm;
    try {
      fp = fe.residual(m + h, z);
      fm = fe.residual(m - h, z);
    } catch (const std::exception&) {
      m += Complex(1e-6, 1e-6);
      continue;
    }
    const Complex df = (fp - fm) / (2.0 * h);
    if (df == Complex(0.0)) break;
    Complex step = f / df;
    double t = 1.0;
    bool improved = false;
    for (int k = 0; k < 30; ++k) {
      try {
        if (std::abs(fe.residual(m - t * step, z)) < std::abs(f)) {
          improved = true;
          break;
        }
      } catch (const std::exception&) {
      }
      t *= 0.5;
    }
    if (!improved) break;
    m -= t * step;
  }
  if (std::abs(fe.residual(m, z)) < 1e-9 * (1.0 + std::abs(fe.r * m))) ok = true;
  return m;
}

}  // namespace

DensityCurve solve_density_general(const ProcessSpec& spec, double r,
                                   std::vector<double> grid, double eps) {
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  if (!(eps > 0.0))
    throw std::invalid_argument("the general route needs eps > 0");
  if (grid.size() < 2 || !std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("grid must be ascending with >= 2 points");

  const FundamentalEquation fe{r, make_m_transform(spec)};
  const double a0cov = autocovariance(spec)(0);
  const size_t n = grid.size();

  DensityCurve curve;
  curve.lambdas = grid;
  curve.rho.assign(n, 0.0);
  curve.r = r;
  curve.process = spec;

  Complex warm = 0.0;
  bool have_warm = false;
  for (size_t k = 0; k < n; ++k) {
    const size_t i = n - 1 - k;  // outside-in: asymptote seeds the far end
    const Complex z(grid[i], eps);
    Complex m0 = have_warm ? warm : a0cov / z;
    bool ok = false;
    Complex m = newton_solve(fe, z, m0, ok);
    if (!ok) {
      // continuation in eps: solve high above the axis, then descend
      Complex mh = a0cov / Complex(grid[i], 10.0 * eps);
      double e = 10.0 * eps;
      bool ok2 = true;
      while (e > eps * 1.0001 && ok2) {
        mh = newton_solve(fe, Complex(grid[i], e), mh, ok2);
        e = std::max(eps, 0.5 * e);
      }
      if (ok2) m = newton_solve(fe, z, mh, ok);
      if (!ok) {
        std::ostringstream msg;
        msg << "general density solver failed at lambda = " << grid[i];
        throw SolverError(msg.str());
      }
    }
    warm = m;
    have_warm = true;
    curve.rho[i] = std::max(0.0, density_from_green(green_from_m(m, z)));
  }

  // support annotation: runs where rho clears 1% of the peak (the eps-smeared
  // tails decay like eps / distance^2)
  const double peak = *std::max_element(curve.rho.begin(), curve.rho.end());
  const double cut = 0.01 * peak;
  bool open = false;
  double lo = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (curve.rho[i] > cut && !open) {
      open = true;
      lo = grid[i];
    } else if (curve.rho[i] <= cut && open) {
      open = false;
      curve.support_intervals.emplace_back(lo, grid[i - 1]);
    }
  }
  if (open) curve.support_intervals.emplace_back(lo, grid.back());

  finalize_curve(curve);
  return curve;
}

namespace {

std::vector<double> uniform_grid(double lo, double hi, int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = lo + (hi - lo) * double(i) / double(points - 1);
  return g;
}

}  // namespace

DensityCurve solve_density_auto(const ProcessSpec& spec, double r, int points,
                                bool use_general, double eps) {
  if (points < 16) throw std::invalid_argument("need at least 16 grid points");
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");

  bool general = use_general;
  if (!general) {
    try {
      make_spectral_equation(spec, r);
    } catch (const std::invalid_argument&) {
      general = true;  // no closed family for this order
    }
  }

  // bracket: the symbol range endpoints bound the support of the estimator
  const MTransform m = make_m_transform(spec);
  const double sym_hi = m.branch_points.back();
  const double sqr = std::sqrt(r);
  double hi = sym_hi * (1.0 + sqr) * (1.0 + sqr) * 1.15 + 1e-6;

  auto coarse_solve = [&](double upper) {
    auto g = uniform_grid(0.0, upper, 384);
    return general ? solve_density_general(spec, r, g, eps > 0 ? eps : 1e-6)
                   : solve_density_polynomial(spec, r, g, eps);
  };
  DensityCurve coarse = coarse_solve(hi);
  for (int tries = 0; tries < 4 && !coarse.support_intervals.empty() &&
                      coarse.support_intervals.back().second > 0.98 * hi;
       ++tries) {
    hi *= 1.5;
    coarse = coarse_solve(hi);
  }
  if (coarse.support_intervals.empty())
    throw SolverError("support detection failed: no density in bracket");

  const double lo_edge = coarse.support_intervals.front().first;
  const double hi_edge = coarse.support_intervals.back().second;
  const double span = hi_edge - lo_edge;
  const double glo = std::max(0.0, lo_edge - 0.05 * span);
  const double ghi = hi_edge + 0.05 * span;

  auto grid = uniform_grid(glo, ghi, points);
  return general ? solve_density_general(spec, r, grid, eps > 0 ? eps : 1e-6)
                 : solve_density_polynomial(spec, r, grid, eps);
}

double curve_moment(const DensityCurve& curve, int k) {
  if (k < 0 || k > 4) throw std::invalid_argument("moment order must be 0..4");
  double acc = 0.0;
  for (size_t i = 0; i + 1 < curve.lambdas.size(); ++i) {
    const double h = curve.lambdas[i + 1] - curve.lambdas[i];
    acc += 0.5 * h *
           (curve.rho[i] * std::pow(curve.lambdas[i], k) +
            curve.rho[i + 1] * std::pow(curve.lambdas[i + 1], k));
  }
  return acc;
}

}  // namespace frv
