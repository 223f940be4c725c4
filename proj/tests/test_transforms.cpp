#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "frv/errors.hpp"
#include "frv/transforms.hpp"
#include "oracles.hpp"

using frv::Complex;
using frv::ProcessSpec;

namespace {

std::vector<Complex> random_offaxis_points(int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-3.0, 6.0), im(0.2, 2.0);
  std::vector<Complex> zs;
  for (int i = 0; i < count; ++i) {
    const double sign = (rng() & 1) ? 1.0 : -1.0;
    zs.emplace_back(re(rng), sign * im(rng));
  }
  return zs;
}

}  // namespace

TEST_CASE("green_from_m") {
  CHECK(frv::green_from_m(0.0, 2.0) == Complex(0.5, 0.0));
  // identity matrix: M = 1/(z-1) at z = 3 gives G = 1/2 / 3 * (1 + 1/2)...
  const Complex m = 1.0 / (Complex(3.0) - 1.0);
  CHECK(std::abs(frv::green_from_m(m, 3.0) - Complex(0.5)) < 1e-15);
  CHECK(std::abs(frv::green_from_m(Complex(0.25, 0.0), 2.5) - Complex(0.5)) <
        1e-15);
  CHECK_THROWS_AS(frv::green_from_m(1.0, 0.0), std::domain_error);
}

TEST_CASE("density_from_green") {
  // off-support real Green's function
  CHECK(frv::density_from_green(Complex(1.0 / (3.0 - 1.0), 0.0)) == 0.0);
  CHECK(frv::density_from_green(Complex(0.3, -std::numbers::pi)) ==
        doctest::Approx(1.0));
  CHECK(frv::density_from_green(Complex(5.0, 1e-13)) == 0.0);

  // Marchenko-Pastur at lambda = 1, r = 1: G = (z - sqrt(z-4) sqrt(z)) / (2z)
  const double lam = 1.0, eps = 1e-9;
  const Complex z(lam, eps);
  const Complex g = (z - std::sqrt(z - 4.0) * std::sqrt(z)) / (2.0 * z);
  const double want = oracle::mp_density(lam, 1.0);
  CHECK(frv::density_from_green(g) == doctest::Approx(want).epsilon(1e-6));
  CHECK(want == doctest::Approx(std::sqrt(3.0) / (2.0 * std::numbers::pi)));
}

TEST_CASE("closed-form M-transforms: frozen values") {
  // a1 = 0 reduces to the scaled-identity spectrum
  for (double z : {3.0, 7.5}) {
    const Complex got = frv::m_transform_vma1(Complex(z, 0.0), 1.3, 0.0);
    CHECK(std::abs(got - Complex(1.69 / (z - 1.69))) < 1e-12);
  }
  const Complex m4 = frv::m_transform_vma1(Complex(4.0, 0.0), 1.0, 0.3);
  CHECK(m4.real() == doctest::Approx(0.4047545360911422).epsilon(1e-12));
  CHECK(m4.imag() == doctest::Approx(0.0));

  const Complex v = frv::m_transform_var1(Complex(-1.0, 0.0), 1.0, 0.5);
  CHECK(v.real() == doctest::Approx(-0.49613893835683387).epsilon(1e-12));

  // white-noise limit of the VAR(1) form
  const Complex w = frv::m_transform_var1(Complex(3.0, 0.0), 1.0, 0.0);
  CHECK(std::abs(w - Complex(0.5)) < 1e-12);
}

TEST_CASE("conjugate symmetry") {
  const Complex z(2.0, 1.0);
  CHECK(std::abs(frv::m_transform_vma1(z, 1.0, 0.3) -
                 std::conj(frv::m_transform_vma1(std::conj(z), 1.0, 0.3))) <
        1e-14);
  CHECK(std::abs(frv::m_transform_varma11(z, 1.0, 0.3, 0.2) -
                 std::conj(frv::m_transform_varma11(std::conj(z), 1.0, 0.3,
                                                    0.2))) < 1e-14);
}

TEST_CASE("branch point and pole errors") {
  CHECK_THROWS_AS(frv::m_transform_vma1(Complex(1.69, 0.0), 1.0, 0.3),
                  frv::BranchPointError);
  CHECK_THROWS_AS(frv::m_transform_varma11(Complex(-1.5, 0.0), 1.0, 0.3, 0.2),
                  frv::PoleError);
}

TEST_CASE("VARMA(1,1) prefactor pole is removable") {
  // approach z* = -a0 a1 / b1 = -1.5 from both sides: finite matching limits
  const Complex left = frv::m_transform_varma11({-1.5 - 1e-6, 0.0}, 1, 0.3, 0.2);
  const Complex right = frv::m_transform_varma11({-1.5 + 1e-6, 0.0}, 1, 0.3, 0.2);
  CHECK(std::isfinite(left.real()));
  CHECK(std::abs(left - right) < 1e-4);
  // and the limit matches the quadrature oracle there
  const Complex quad = frv::m_transform_quadrature_oracle(
      ProcessSpec::varma({1.0, 0.3}, {0.2}), {-1.5, 0.0});
  CHECK(std::abs(left - quad) < 1e-4);
}

TEST_CASE("inverse law") {
  frv::MTransform id = frv::identity_m_transform();
  frv::MTransform inv = frv::m_transform_inverse_law(id);
  frv::MTransform invinv = frv::m_transform_inverse_law(inv);
  for (const Complex& z : random_offaxis_points(10, 77)) {
    CHECK(std::abs(inv(z) - id(z)) < 1e-12);       // identity is self-inverse
    CHECK(std::abs(invinv(z) - id(z)) < 1e-12);    // involution
  }
  CHECK_THROWS_AS(inv(Complex(0.0)), std::domain_error);

  // VAR(1) is the inverse-law image of the VMA(1) with a^(2) = (1, -b1)
  frv::MTransform vma = frv::make_m_transform(ProcessSpec::vma({1.0, -0.3}));
  frv::MTransform dual = frv::m_transform_inverse_law(vma);
  for (const Complex& z : random_offaxis_points(10, 78))
    CHECK(std::abs(dual(z) - frv::m_transform_var1(z, 1.0, 0.3)) <
          1e-12 * (1.0 + std::abs(dual(z))));
}

TEST_CASE("inverse-law involution for a nontrivial handle") {
  frv::MTransform h = frv::make_m_transform(ProcessSpec::vma({1.0, 0.4, 0.1}));
  frv::MTransform hh = frv::m_transform_inverse_law(frv::m_transform_inverse_law(h));
  for (const Complex& z : random_offaxis_points(10, 79))
    CHECK(std::abs(hh(z) - h(z)) < 1e-12 * (1.0 + std::abs(h(z))));
}

TEST_CASE("general-q residue route") {
  SUBCASE("white noise: constant symbol") {
    const Complex m =
        frv::m_transform_general_q(frv::compute_kappas({1.0}), Complex(5.0));
    CHECK(std::abs(m - Complex(0.25)) < 1e-14);
  }

  SUBCASE("q=1 matches the closed form") {
    const auto kap = frv::compute_kappas({1.0, 0.3});
    for (const Complex& z :
         {Complex(4.0, 0.0), Complex(2.0, 0.5), Complex(0.7, 0.1)}) {
      CHECK(std::abs(frv::m_transform_general_q(kap, z) -
                     frv::m_transform_vma1(z, 1.0, 0.3)) < 1e-10);
    }
  }

  SUBCASE("q=2 matches the quadrature oracle") {
    auto spec = ProcessSpec::vma({1.0, 0.5, 0.2});
    const auto kap = frv::compute_kappas({1.0, 0.5, 0.2});
    const Complex z(6.0, 0.0);
    const Complex got = frv::m_transform_general_q(kap, z);
    const Complex want = frv::m_transform_quadrature_oracle(spec, z);
    CHECK(std::abs(got - want) < 1e-8);
  }

  SUBCASE("rational symbol matches VAR(1) and VARMA(1,1) closed forms") {
    auto var1 = ProcessSpec::var(1.0, {0.5});
    auto varma = ProcessSpec::varma({1.0, 0.3}, {0.2});
    for (const Complex& z : random_offaxis_points(8, 80)) {
      CHECK(std::abs(frv::m_transform_general_q(var1.symbol_numerator(),
                                                var1.symbol_denominator(), z) -
                     frv::m_transform_var1(z, 1.0, 0.5)) < 1e-10);
      CHECK(std::abs(frv::m_transform_general_q(varma.symbol_numerator(),
                                                varma.symbol_denominator(), z) -
                     frv::m_transform_varma11(z, 1.0, 0.3, 0.2)) < 1e-10);
    }
  }

  SUBCASE("degenerate symbol roots raise") {
    const frv::KappaVector kap{{2.02, 0.2, 0.1}, {}};
    // z - A^(y) = -0.1 (y + 1)^2 at this z: a double root
    const Complex zc(2.02 - 0.2 - 0.04 / 0.4, 0.0);
    CHECK_THROWS_AS(frv::m_transform_general_q(kap, zc),
                    frv::DegenerateRootError);
  }
}

TEST_CASE("quadrature oracle") {
  CHECK(std::abs(frv::m_transform_quadrature_oracle(ProcessSpec::vma({1.0}),
                                                    Complex(3.0)) -
                 Complex(0.5)) < 1e-12);
  CHECK(std::abs(frv::m_transform_quadrature_oracle(
                     ProcessSpec::vma({1.0, 0.3}), Complex(4.0)) -
                 Complex(0.4047545360911422)) < 1e-10);
  auto varma = ProcessSpec::varma({1.0, 0.3}, {0.2});
  CHECK(std::abs(frv::m_transform_quadrature_oracle(varma, Complex(5.0)) -
                 frv::m_transform_varma11(Complex(5.0), 1.0, 0.3, 0.2)) < 1e-8);
  CHECK_THROWS_AS(frv::m_transform_quadrature_oracle(varma, Complex(1.0)),
                  std::domain_error);
  CHECK_THROWS_AS(
      frv::m_transform_quadrature_oracle(varma, Complex(5.0), 128),
      std::invalid_argument);
}

TEST_CASE("closed forms agree with quadrature on the complex test grid") {
  const std::vector<ProcessSpec> specs = {
      ProcessSpec::vma({1.0, 0.3}),
      ProcessSpec::var(1.0, {0.5}),
      ProcessSpec::varma({1.0, 0.3}, {0.2}),
  };
  for (const auto& spec : specs) {
    frv::MTransform m = frv::make_m_transform(spec);
    for (int i = 0; i < 20; ++i) {
      const Complex z(-1.0 + 7.0 * i / 19.0, 0.5);
      const Complex want = frv::m_transform_quadrature_oracle(spec, z);
      CHECK(std::abs(m(z) - want) < 1e-7 * (1.0 + std::abs(want)));
    }
  }
}

TEST_CASE("first-moment asymptotics and Herglotz sign") {
  const std::vector<ProcessSpec> specs = {
      ProcessSpec::vma({1.0, 0.3}),
      ProcessSpec::var(1.0, {0.5}),
      ProcessSpec::varma({1.0, 0.3}, {0.2}),
      ProcessSpec::vma({1.0, 0.5, 0.2}),
  };
  for (const auto& spec : specs) {
    frv::MTransform m = frv::make_m_transform(spec);
    const double a0 = frv::autocovariance(spec)(0);
    // two-point asymptotic fit of z M(z) = A(0) + B/z + O(1/z^2)
    const Complex z1(1e6, 0.0), z2(2e6, 0.0);
    const Complex fit = 2.0 * (m(z2) * z2) - m(z1) * z1;
    CHECK(std::abs(fit - Complex(a0)) < 1e-6 * std::abs(a0));
    for (int i = 0; i < 20; ++i) {
      const Complex z(-1.0 + 7.0 * i / 19.0, 0.5);
      CHECK(m(z).imag() * z.imag() <= 0.0);
      CHECK(std::abs(m(std::conj(z)) - std::conj(m(z))) < 1e-12);
    }
  }
}

TEST_CASE("VARMA(1,1) reductions toward VMA/VAR") {
  // tiny b1: matches the VMA(1) closed form to O(b1)
  for (const Complex& z : random_offaxis_points(6, 81)) {
    CHECK(std::abs(frv::m_transform_varma11(z, 1.0, 0.3, 1e-8) -
                   frv::m_transform_vma1(z, 1.0, 0.3)) < 1e-6);
    CHECK(std::abs(frv::m_transform_varma11(z, 1.0, 1e-8, 0.3) -
                   frv::m_transform_var1(z, 1.0, 0.3)) < 1e-6);
  }
}
