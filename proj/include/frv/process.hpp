#ifndef FRV_PROCESS_HPP
#define FRV_PROCESS_HPP

#include <vector>

#include "frv/polynomial.hpp"

namespace frv {

enum class ProcessKind { Vma, Var, Varma };

enum class KappaLabel { K1, K2, K4 };

/// Banded auto-covariance weights kappa_0..kappa_q of a moving-average
/// filter; the label records which of the three coefficient conventions
/// produced them (generic MA, inverse-scaled AR, unit-scaled AR).
struct KappaVector {
  std::vector<double> values;
  KappaLabel label = KappaLabel::K1;

  int order() const { return static_cast<int>(values.size()) - 1; }
};

/// kappa_d = sum_{alpha=0}^{q-d} c_alpha c_{alpha+d}.
KappaVector compute_kappas(const std::vector<double>& coeffs,
                           KappaLabel label = KappaLabel::K1);

/// A decoupled VMA(q2) / VAR(q1) / VARMA(q1,q2) specification:
///   Y_a - sum_{beta=1}^{q1} b_beta Y_{a-beta} = sum_{alpha=0}^{q2} a_alpha e_{a-alpha}
/// with iid standard Gaussian innovations e and the convention b_0 = -1.
/// Construction verifies weak stationarity: all roots of
/// 1 - sum b_beta x^beta must lie strictly outside the unit circle.
class ProcessSpec {
 public:
  static ProcessSpec vma(std::vector<double> ma_coeffs);
  static ProcessSpec var(double a0, std::vector<double> ar_coeffs);
  static ProcessSpec varma(std::vector<double> ma_coeffs,
                           std::vector<double> ar_coeffs);

  ProcessKind kind() const { return kind_; }
  const std::vector<double>& ma_coeffs() const { return ma_; }   // a_0..a_q2
  const std::vector<double>& ar_coeffs() const { return ar_; }   // b_1..b_q1
  int q1() const { return static_cast<int>(ar_.size()); }
  int q2() const { return static_cast<int>(ma_.size()) - 1; }
  double a0() const { return ma_.front(); }

  /// Numerator / denominator kappa vectors of the rational Fourier symbol
  /// A^(p) = num(p) / den(p). For VMA the denominator is the constant 1;
  /// for VAR the numerator is the constant 1.
  KappaVector symbol_numerator() const;
  KappaVector symbol_denominator() const;

  bool has_ar_part() const;  // any nonzero b_beta
  bool has_ma_part() const;  // any nonzero a_alpha beyond a_0

 private:
  ProcessSpec(ProcessKind kind, std::vector<double> ma, std::vector<double> ar);
  void validate() const;

  ProcessKind kind_;
  std::vector<double> ma_;
  std::vector<double> ar_;
};

/// The Fourier symbol A^(p) of the translationally invariant auto-covariance
/// matrix; strictly positive for stationary specs. Throws StationarityError
/// if the value is <= 0 at the requested p.
double fourier_symbol(const ProcessSpec& spec, double p);

/// One term of a sum-of-exponential-decays auto-covariance:
/// weight * root^|d| with |root| < 1.
struct DecayMode {
  Complex weight;
  Complex root;
};

/// Evaluates the auto-covariance A(d) for integer lags; symmetric in d.
/// Which representation backs it depends on the process family:
///   Banded        pure moving average, A(d) = kappa_|d|, zero beyond q
///   DecaySum      autoregressive, residue expansion into q decays
///   Varma11Closed the (1,1) closed form
///   NumericFourier inverse Fourier quadrature for higher-order mixed models
class AutoCovModel {
 public:
  enum class Representation { Banded, DecaySum, Varma11Closed, NumericFourier };

  double operator()(long d) const;
  Representation representation() const { return repr_; }

  /// Decay scales T_gamma = -1/log|x_gamma| of the AR part (empty for
  /// pure moving averages).
  const std::vector<double>& characteristic_times() const { return times_; }
  const std::vector<DecayMode>& decay_modes() const { return modes_; }

 private:
  friend AutoCovModel autocovariance(const ProcessSpec& spec);
  AutoCovModel() = default;

  Representation repr_ = Representation::Banded;
  std::vector<double> banded_;              // kappa_0..kappa_q
  std::vector<DecayMode> modes_;            // DecaySum
  double v11_a0_ = 0, v11_a1_ = 0, v11_b1_ = 0;
  std::vector<double> fourier_cache_;       // NumericFourier, lags 0..cache max
  std::vector<double> times_;
};

AutoCovModel autocovariance(const ProcessSpec& spec);

/// The symbol kappa_0 + sum_d kappa_d * (2 cos dp) rewritten as a polynomial
/// in y = 2 cos p via the integer Chebyshev-style recurrence
/// C_0 = 2, C_1 = y, C_{d+1} = y C_d - C_{d-1}.
Polynomial symbol_polynomial(const KappaVector& kappas);

}  // namespace frv

#endif
