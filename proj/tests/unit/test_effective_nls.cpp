// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "blochnls/effective_nls.hpp"
#include "blochnls/errors.hpp"

using namespace blochnls;

namespace
{

RealVector vec(std::initializer_list<double> v)
{
  RealVector r(static_cast<Eigen::Index>(v.size()));
  std::copy(v.begin(), v.end(), r.data());
  return r;
}

// -sum sigma |p|^4 dx^2 on a fine grid, evaluating p from its plane-wave sum.
double quadrature_nu(const PeriodicCoefficients &sigma, const BlochMode &p, int q)
{
  double acc = 0.0;
  const double h = two_pi / q;
  for (int i = 0; i < q; ++i)
  {
    for (int j = 0; j < q; ++j)
    {
      const std::vector<double> x{i * h, j * h};
      acc -= sigma.evaluate(x).real() * std::pow(std::abs(p.evaluate(x)), 4);
    }
  }
  return acc * h * h;
}

}  // namespace

TEST_SUITE("effective_nls")
{
  TEST_CASE("constant coefficients: nu = -sigma0 (2 pi)^{-d}")
  {
    for (int d : {1, 2})
    {
      const BlochSolver solver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::constant(d, 0.5), 4));
      const auto mode = solver.modes(RealVector::Zero(d), 1)[0];
      const double sigma0 = -1.7;
      CHECK(nu_gp(PeriodicCoefficients::constant(d, sigma0), mode) ==
            doctest::Approx(-sigma0 * std::pow(two_pi, -d)).epsilon(1e-12));
    }
  }

  TEST_CASE("cos x1 cos x2 carrier coefficients")
  {
    const BlochSolver solver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::cosine_product(2), 12));
    const auto sigma = PeriodicCoefficients::cosine_product(2, 1.0, -2.0);
    const auto params = effective_params(solver, vec({0.4, 0.0}), 7, GpNonlinearity{sigma});
    CHECK(params.omega0 == doctest::Approx(2.0749803768).epsilon(1e-9));
    CHECK(params.nu == doctest::Approx(0.04905).epsilon(1e-4));
    CHECK(params.nu == doctest::Approx(0.0490473818).epsilon(1e-8));
    CHECK(params.isotropy_defect < 1e-6);
    CHECK(isotropic_alpha(params) == doctest::Approx(3.1710534).epsilon(1e-6));
    // An independent fine-grid quadrature of the same integral.
    CHECK(quadrature_nu(sigma, params.mode, 96) == doctest::Approx(params.nu).epsilon(1e-10));
    // The truncated carrier has converged in N.
    const BlochSolver coarse(BlochOperatorSpec::schrodinger(PeriodicCoefficients::cosine_product(2), 8));
    const auto p8 = effective_params(coarse, vec({0.4, 0.0}), 7, GpNonlinearity{sigma});
    CHECK(std::abs(p8.nu - params.nu) < 1e-8);
  }

  TEST_CASE("nu ignores the phase of the Bloch mode")
  {
    const BlochSolver solver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::cosine_product(2), 8));
    const auto sigma = PeriodicCoefficients::cosine_product(2, 1.0, -2.0);
    const auto mode = solver.modes(vec({0.3, 0.1}), 2)[1];
    const double ref = nu_gp(sigma, mode);
    for (double theta : {0.4, 2.0, -1.3})
    {
      CHECK(nu_gp(sigma, mode.rephased(theta)) == doctest::Approx(ref).epsilon(1e-13));
    }
  }

  TEST_CASE("wave-equation nonlinear coefficient")
  {
    const auto one = PeriodicCoefficients::constant(1, 1.0);
    const BlochSolver solver(BlochOperatorSpec::wave(one, one, 6));
    const auto mode = solver.modes(vec({0.0}), 1)[0];
    const double omega0 = std::sqrt(mode.lam);
    REQUIRE(omega0 == doctest::Approx(1.0).epsilon(1e-14));

    SUBCASE("Duffing limit: nu = -3 c / (4 pi)")
    {
      for (double c : {1.0, -0.5, 2.5})
      {
        CHECK(nu_nlw(PeriodicCoefficients::constant(1, c), one, mode, omega0) ==
              doctest::Approx(-3.0 * c / (4.0 * std::numbers::pi)).epsilon(1e-12));
      }
    }
    SUBCASE("linear in chi3")
    {
      const auto a = PeriodicCoefficients::cosine_product(1, 0.3, 1.0);
      const auto b = PeriodicCoefficients::cosine_product(1, -0.2, 0.5);
      const auto ab = PeriodicCoefficients::cosine_product(1, 0.1, 1.5);
      const double na = nu_nlw(a, one, mode, omega0);
      const double nb = nu_nlw(b, one, mode, omega0);
      CHECK(nu_nlw(ab, one, mode, omega0) == doctest::Approx(na + nb).epsilon(1e-12));
      CHECK(nu_nlw(a * 2.0, one, mode, omega0) == doctest::Approx(2.0 * na).epsilon(1e-12));
    }
    SUBCASE("scales as 1 / omega0")
    {
      const auto chi3 = PeriodicCoefficients::constant(1, 1.0);
      CHECK(nu_nlw(chi3, one, mode, 2.0) == doctest::Approx(0.5 * nu_nlw(chi3, one, mode, 1.0)).epsilon(1e-14));
      CHECK_THROWS_AS(nu_nlw(chi3, one, mode, 0.0), DomainError);
    }
  }

  TEST_CASE("variable chi1 uses the weighted normalization")
  {
    const auto chi1 = PeriodicCoefficients::cosine_product(1, 0.3, 1.5);
    const auto one = PeriodicCoefficients::constant(1, 1.0);
    const BlochSolver solver(BlochOperatorSpec::wave(chi1, one, 8));
    const auto mode = solver.modes(vec({0.2}), 1)[0];
    CHECK(mode.norm == NormConvention::L2Chi1);
    const double omega0 = std::sqrt(mode.lam);
    // -(3 / (2 omega0)) int chi3 |p|^4 / chi1 by direct quadrature, chi3 = 1.
    const int q = 512;
    double acc = 0.0;
    for (int i = 0; i < q; ++i)
    {
      const std::vector<double> x{two_pi * i / q};
      acc += std::pow(std::abs(mode.evaluate(x)), 4) / chi1.evaluate(x).real();
    }
    const double expect = -1.5 / omega0 * acc * two_pi / q;
    CHECK(nu_nlw(one, chi1, mode, omega0) == doctest::Approx(expect).epsilon(1e-10));
    // Treating the mode as plain-L2 normalized is rejected.
    CHECK_THROWS_AS(nu_gp(one, mode), NormalizationError);
  }

  TEST_CASE("an unnormalized mode is rejected")
  {
    const BlochSolver solver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::cosine_product(2), 4));
    auto mode = solver.modes(vec({0.1, 0.1}), 1)[0];
    mode.coeffs *= 1.01;
    CHECK_THROWS_AS(nu_gp(PeriodicCoefficients::constant(2, -1.0), mode), NormalizationError);
  }

  TEST_CASE("anisotropic curvature is rejected")
  {
    const BlochSolver solver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::cosine_product(2), 6));
    auto params = effective_params(solver, vec({0.2, 0.05}), 1, GpNonlinearity{PeriodicCoefficients::constant(2, -1.0)});
    params.hessian(1, 1) *= 1.5;
    CHECK_THROWS_AS(isotropic_alpha(params), IsotropyError);
  }

  TEST_CASE("degenerate carriers are rejected")
  {
    const BlochSolver solver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::cosine_product(2), 8));
    CHECK_THROWS_AS(effective_params(solver, vec({0.4, 0.0}), 4,
                                     GpNonlinearity{PeriodicCoefficients::cosine_product(2, 1.0, -2.0)}),
                    DegenerateWarning);
  }
}
