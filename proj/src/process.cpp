#include "frv/process.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "frv/errors.hpp"

namespace frv {

KappaVector compute_kappas(const std::vector<double>& coeffs, KappaLabel label) {
  if (coeffs.empty())
    throw std::invalid_argument("compute_kappas: empty coefficient list");
  const int q = static_cast<int>(coeffs.size()) - 1;
  KappaVector k;
  k.label = label;
  k.values.resize(q + 1);
  for (int d = 0; d <= q; ++d) {
    double s = 0.0;
    for (int alpha = 0; alpha + d <= q; ++alpha) s += coeffs[alpha] * coeffs[alpha + d];
    k.values[d] = s;
  }
  return k;
}

ProcessSpec::ProcessSpec(ProcessKind kind, std::vector<double> ma,
                         std::vector<double> ar)
    : kind_(kind), ma_(std::move(ma)), ar_(std::move(ar)) {
  validate();
}

ProcessSpec ProcessSpec::vma(std::vector<double> ma_coeffs) {
  return ProcessSpec(ProcessKind::Vma, std::move(ma_coeffs), {});
}

ProcessSpec ProcessSpec::var(double a0, std::vector<double> ar_coeffs) {
  return ProcessSpec(ProcessKind::Var, {a0}, std::move(ar_coeffs));
}

ProcessSpec ProcessSpec::varma(std::vector<double> ma_coeffs,
                               std::vector<double> ar_coeffs) {
  return ProcessSpec(ProcessKind::Varma, std::move(ma_coeffs), std::move(ar_coeffs));
}

void ProcessSpec::validate() const {
  switch (kind_) {
    case ProcessKind::Vma:
      if (ma_.empty()) throw std::invalid_argument("VMA needs a_0..a_q");
      if (!ar_.empty()) throw std::invalid_argument("VMA takes no AR coefficients");
      break;
    case ProcessKind::Var:
      if (ma_.size() != 1) throw std::invalid_argument("VAR takes a single a_0");
      if (ar_.empty()) throw std::invalid_argument("VAR needs b_1..b_q");
      break;
    case ProcessKind::Varma:
      if (ma_.empty() || ar_.empty())
        throw std::invalid_argument("VARMA needs both MA and AR coefficients");
      break;
  }
  if (ma_.front() == 0.0) throw std::invalid_argument("a_0 must be nonzero");

  if (!ar_.empty()) {
    // weak stationarity: roots of 1 - sum_beta b_beta x^beta strictly
    // outside the unit circle
    std::vector<double> cpoly(ar_.size() + 1);
    cpoly[0] = 1.0;
    for (size_t b = 0; b < ar_.size(); ++b) cpoly[b + 1] = -ar_[b];
    Polynomial chi = Polynomial::from_real(cpoly);
    if (chi.degree() >= 1) {
      for (const auto& x : find_roots(chi)) {
        if (std::abs(x) <= 1.0 + 1e-12) {
          std::ostringstream msg;
          msg << "AR root at |x| = " << std::abs(x)
              << " not strictly outside the unit circle: process not weakly stationary";
          throw StationarityError(msg.str());
        }
      }
    }
  }
}

bool ProcessSpec::has_ar_part() const {
  return std::any_of(ar_.begin(), ar_.end(), [](double b) { return b != 0.0; });
}

bool ProcessSpec::has_ma_part() const {
  return std::any_of(ma_.begin() + 1, ma_.end(), [](double a) { return a != 0.0; });
}

KappaVector ProcessSpec::symbol_numerator() const {
  if (kind_ == ProcessKind::Var) return KappaVector{{1.0}, KappaLabel::K2};
  return compute_kappas(ma_, KappaLabel::K1);
}

KappaVector ProcessSpec::symbol_denominator() const {
  switch (kind_) {
    case ProcessKind::Vma:
      return KappaVector{{1.0}, KappaLabel::K1};
    case ProcessKind::Var: {
      // a^(2) = (1/a_0, -b_1/a_0, ..., -b_q/a_0)
      std::vector<double> c(ar_.size() + 1);
      c[0] = 1.0 / ma_[0];
      for (size_t b = 0; b < ar_.size(); ++b) c[b + 1] = -ar_[b] / ma_[0];
      return compute_kappas(c, KappaLabel::K2);
    }
    case ProcessKind::Varma: {
      // a^(4) = (1, -b_1, ..., -b_q1); the a_0 scale lives in the MA piece
      std::vector<double> c(ar_.size() + 1);
      c[0] = 1.0;
      for (size_t b = 0; b < ar_.size(); ++b) c[b + 1] = -ar_[b];
      return compute_kappas(c, KappaLabel::K4);
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

double kappa_symbol(const KappaVector& k, double p) {
  double s = k.values[0];
  for (int d = 1; d <= k.order(); ++d) s += 2.0 * k.values[d] * std::cos(d * p);
  return s;
}

}  // namespace

double fourier_symbol(const ProcessSpec& spec, double p) {
  const double num = kappa_symbol(spec.symbol_numerator(), p);
  const double den = kappa_symbol(spec.symbol_denominator(), p);
  const double value = num / den;
  if (!(value > 0.0)) {
    std::ostringstream msg;
    msg << "Fourier symbol " << value << " at p = " << p
        << " is not positive: invalid process parameters";
    throw StationarityError(msg.str());
  }
  return value;
}

Polynomial symbol_polynomial(const KappaVector& kappas) {
  const int q = kappas.order();
  // C_d(y) = 2 cos(d p) with y = 2 cos p; integer recurrence
  std::vector<double> out(q + 1, 0.0);
  out[0] = kappas.values[0];
  std::vector<double> c_prev = {2.0};        // C_0
  std::vector<double> c_cur = {0.0, 1.0};    // C_1 = y
  for (int d = 1; d <= q; ++d) {
    for (size_t i = 0; i < c_cur.size(); ++i) out[i] += kappas.values[d] * c_cur[i];
    if (d == q) break;
    std::vector<double> c_next(d + 2, 0.0);
    for (size_t i = 0; i < c_cur.size(); ++i) c_next[i + 1] += c_cur[i];
    for (size_t i = 0; i < c_prev.size(); ++i) c_next[i] -= c_prev[i];
    c_prev = std::move(c_cur);
    c_cur = std::move(c_next);
  }
  return Polynomial::from_real(out);
}

double AutoCovModel::operator()(long d) const {
  const long ad = std::labs(d);
  switch (repr_) {
    case Representation::Banded:
      return ad < static_cast<long>(banded_.size()) ? banded_[ad] : 0.0;
    case Representation::DecaySum: {
      Complex s = 0.0;
      for (const auto& m : modes_) s += m.weight * std::pow(m.root, double(ad));
      return s.real();
    }
    case Representation::Varma11Closed: {
      const double a0 = v11_a0_, a1 = v11_a1_, b1 = v11_b1_;
      double v = (a1 + a0 * b1) * (a0 + a1 * b1) / (b1 * (1.0 - b1 * b1)) *
                 std::pow(b1, double(ad));
      if (ad == 0) v -= a0 * a1 / b1;
      return v;
    }
    case Representation::NumericFourier:
      if (ad < static_cast<long>(fourier_cache_.size())) return fourier_cache_[ad];
      throw std::out_of_range("autocovariance lag beyond cached range");
  }
  throw std::logic_error("unreachable");
}

namespace {

// Residue expansion of the inverse Fourier transform of 1 / den-symbol:
// q decay modes weight * root^|d| with the in-disk roots of x + 1/x = y_beta.
std::vector<DecayMode> decay_modes_from_denominator(const KappaVector& den) {
  Polynomial dpoly = symbol_polynomial(den);
  const int q = dpoly.degree();
  std::vector<Complex> ys = find_roots(dpoly);
  require_simple_roots(ys, 1e-7);

  std::vector<Complex> xt(q);
  for (int g = 0; g < q; ++g) {
    Polynomial quad({Complex(1.0), -ys[g], Complex(1.0)});
    auto pair = find_roots(quad);
    auto inside = roots_inside_unit_disk(pair);
    if (inside.size() != 1)
      throw BoundaryRootError("x + 1/x = y has no root strictly inside the unit disk");
    xt[g] = inside[0];
  }
  require_simple_roots(xt, 1e-7);

  const Complex psi = dpoly.leading();
  std::vector<DecayMode> modes(q);
  for (int g = 0; g < q; ++g) {
    Complex denom = 1.0;
    for (int b = 0; b < q; ++b) {
      if (b != g) denom *= xt[g] - xt[b];
      denom *= xt[g] - 1.0 / xt[b];
    }
    modes[g].root = xt[g];
    modes[g].weight = std::pow(xt[g], double(q - 1)) / (psi * denom);
  }
  return modes;
}

std::vector<double> times_from_modes(const std::vector<DecayMode>& modes) {
  std::vector<double> t;
  for (const auto& m : modes) t.push_back(-1.0 / std::log(std::abs(m.root)));
  std::sort(t.begin(), t.end(), std::greater<>());
  return t;
}

}  // namespace

AutoCovModel autocovariance(const ProcessSpec& spec) {
  AutoCovModel model;

  if (!spec.has_ar_part()) {
    model.repr_ = AutoCovModel::Representation::Banded;
    model.banded_ = compute_kappas(spec.ma_coeffs()).values;
  } else if (!spec.has_ma_part()) {
    // pure AR: inverse Fourier of 1/den-symbol
    model.repr_ = AutoCovModel::Representation::DecaySum;
    model.modes_ = decay_modes_from_denominator(spec.symbol_denominator());
    model.times_ = times_from_modes(model.modes_);
    for (long d = 0; d <= 2 * spec.q1() + 2; ++d) {
      Complex s = 0.0;
      for (const auto& m : model.modes_) s += m.weight * std::pow(m.root, double(d));
      if (std::abs(s.imag()) > 1e-10 * std::max(1.0, std::abs(s)))
        throw NumericError("decay-sum autocovariance has non-cancelling imaginary part");
    }
  } else if (spec.q1() == 1 && spec.q2() == 1) {
    model.repr_ = AutoCovModel::Representation::Varma11Closed;
    model.v11_a0_ = spec.ma_coeffs()[0];
    model.v11_a1_ = spec.ma_coeffs()[1];
    model.v11_b1_ = spec.ar_coeffs()[0];
    model.times_ = {-1.0 / std::log(std::abs(model.v11_b1_))};
  } else {
    // mixed model beyond (1,1): inverse Fourier quadrature of the symbol
    model.repr_ = AutoCovModel::Representation::NumericFourier;
    const int max_lag = std::max(160, 16 * (spec.q1() + spec.q2() + 4));
    const int n = 8192;
    model.fourier_cache_.resize(max_lag + 1, 0.0);
    for (int k = 0; k < n; ++k) {
      const double p = -std::numbers::pi + 2.0 * std::numbers::pi * k / n;
      const double a = fourier_symbol(spec, p);
      for (int d = 0; d <= max_lag; ++d)
        model.fourier_cache_[d] += std::cos(d * p) * a / n;
    }
    model.times_ = times_from_modes(
        decay_modes_from_denominator(spec.symbol_denominator()));
  }

  if (!(model(0) > 0.0))
    throw StationarityError("autocovariance A(0) must be positive");
  return model;
}

}  // namespace frv
