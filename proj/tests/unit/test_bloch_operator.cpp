// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "blochnls/band_checks.hpp"
#include "blochnls/bloch_operator.hpp"
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

PeriodicCoefficients random_potential_1d(int n, double scale, unsigned seed)
{
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  std::vector<FourierMode> modes{{{0}, cplx(scale * g(rng))}};
  for (int m = 1; m <= n; ++m)
  {
    const cplx c(scale * g(rng), scale * g(rng));
    modes.push_back({{m}, c});
    modes.push_back({{-m}, std::conj(c)});
  }
  return PeriodicCoefficients::from_modes(1, modes);
}

// Plain Galerkin matrix (k + m)^2 delta + V^_{m - m'} on |m| <= n, built without the library.
Eigen::MatrixXcd brute_force_matrix(const PeriodicCoefficients &v, double k, int n)
{
  const int w = 2 * n + 1;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(w, w);
  for (int i = 0; i < w; ++i)
  {
    for (int j = 0; j < w; ++j)
    {
      const std::vector<int> dm{i - j};
      a(i, j) = v.coefficient(dm);
    }
    const double km = k + (i - n);
    a(i, i) += km * km;
  }
  return a;
}

}  // namespace

TEST_SUITE("bloch_operator")
{
  TEST_CASE("free operator is diagonal with (k + m)^2 + c")
  {
    const BlochSolver solver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::constant(1, 0.7), 4));
    const auto gp = solver.assemble(vec({0.3}));
    CHECK(gp.identity_mass);
    for (int i = 0; i < solver.galerkin_dimension(); ++i)
    {
      for (int j = 0; j < solver.galerkin_dimension(); ++j)
      {
        const double m = solver.basis()[static_cast<std::size_t>(i)][0];
        const cplx expect = i == j ? cplx((0.3 + m) * (0.3 + m) + 0.7) : cplx();
        CHECK(std::abs(gp.a(i, j) - expect) < 1e-14);
      }
    }
  }

  TEST_CASE("cosine product couples m - m' = (+-1, +-1) with 1/4")
  {
    const BlochSolver solver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::cosine_product(2), 3));
    const auto gp = solver.assemble(vec({0.4, 0.0}));
    const auto &basis = solver.basis();
    for (std::size_t i = 0; i < basis.size(); ++i)
    {
      for (std::size_t j = 0; j < basis.size(); ++j)
      {
        if (i == j)
        {
          continue;
        }
        const int d1 = basis[i][0] - basis[j][0];
        const int d2 = basis[i][1] - basis[j][1];
        const double expect = (std::abs(d1) == 1 && std::abs(d2) == 1) ? 0.25 : 0.0;
        CHECK(std::abs(gp.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - expect) < 1e-14);
      }
    }
  }

  TEST_CASE("Galerkin entries equal quadrature of <L(k) e_m', e_m>")
  {
    // Wave form with variable chi1: A = |k+m|^2 delta + (chi2/chi1)^, B = (1/chi1)^.
    const auto chi1 = PeriodicCoefficients::from_modes(1, std::vector<FourierMode>{{{0}, cplx(2.0)},
                                                                                   {{1}, cplx(0.15, 0.05)},
                                                                                   {{-1}, cplx(0.15, -0.05)}});
    const auto chi2 = random_potential_1d(2, 0.2, 3) + 1.5;
    const BlochSolver solver(BlochOperatorSpec::wave(chi1, chi2, 6));
    const double k = 0.21;
    const auto gp = solver.assemble(vec({k}));
    const int q = 512;
    const auto &basis = solver.basis();
    double worst = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
    {
      for (std::size_t j = 0; j < basis.size(); ++j)
      {
        cplx a{};
        cplx b{};
        for (int s = 0; s < q; ++s)
        {
          const std::vector<double> x{two_pi * s / q};
          const double c1 = chi1.evaluate(x).real();
          const double c2 = chi2.evaluate(x).real();
          const cplx phase = std::polar(1.0, (basis[j][0] - basis[i][0]) * x[0]) / static_cast<double>(q);
          a += c2 / c1 * phase;
          b += phase / c1;
        }
        if (i == j)
        {
          a += (k + basis[i][0]) * (k + basis[i][0]);
        }
        const auto ii = static_cast<Eigen::Index>(i);
        const auto jj = static_cast<Eigen::Index>(j);
        worst = std::max({worst, std::abs(a - gp.a(ii, jj)), std::abs(b - gp.b(ii, jj))});
      }
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("constant potential: lambda_1(0) = 1 with a constant mode")
  {
    const auto modes = solve_bands(BlochOperatorSpec::schrodinger(PeriodicCoefficients::constant(1, 1.0), 6),
                                   vec({0.0}), 1);
    CHECK(modes[0].lam == doctest::Approx(1.0).epsilon(1e-14));
    for (double x : {0.0, 1.0, 4.0})
    {
      const std::vector<double> xs{x};
      CHECK(std::abs(modes[0].evaluate(xs) - cplx(1.0 / std::sqrt(two_pi))) < 1e-14);
    }
  }

  TEST_CASE("cos x1 cos x2 spectrum at k0 = (0.4, 0)")
  {
    const BlochSolver solver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::cosine_product(2), 12));
    const auto lam = solver.eigenvalues(vec({0.4, 0.0}), 8);
    // The value 2.075 is the seventh eigenvalue in size order; 3-4 and 5-6 are degenerate pairs.
    CHECK(lam[6] == doctest::Approx(2.0749803768).epsilon(1e-9));
    CHECK(lam[3] == doctest::Approx(1.1273665663).epsilon(1e-9));
    CHECK(std::abs(lam[2] - lam[3]) < 1e-9);
    CHECK(std::abs(lam[4] - lam[5]) < 1e-9);
    CHECK_THROWS_AS(solve_bands(solver.spec(), vec({0.4, 0.0}), 8, 4), DegenerateWarning);
    CHECK_NOTHROW(solve_bands(solver.spec(), vec({0.4, 0.0}), 8, 7));
  }

  TEST_CASE("solver agrees with an independent dense diagonalization")
  {
    const auto v = random_potential_1d(2, 0.03, 19);
    const double k = 0.17;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es4(brute_force_matrix(v, k, 4));
    const auto n4 = BlochSolver(BlochOperatorSpec::schrodinger(v, 4)).eigenvalues(vec({k}), 5);
    for (int n = 0; n < 5; ++n)
    {
      CHECK(n4[static_cast<std::size_t>(n)] == doctest::Approx(es4.eigenvalues()[n]).epsilon(1e-12));
    }
    // Refined-truncation oracle: N = 2 against the N = 4 reference.
    const auto n2 = BlochSolver(BlochOperatorSpec::schrodinger(v, 2)).eigenvalues(vec({k}), 2);
    for (int n = 0; n < 2; ++n)
    {
      CHECK(std::abs(n2[static_cast<std::size_t>(n)] - es4.eigenvalues()[n]) < 1e-4);
    }
  }

  TEST_CASE("modes are mass-orthonormal eigenvectors with a fixed phase")
  {
    const auto chi1 = PeriodicCoefficients::cosine_product(2, 0.3, 1.5);
    const auto chi2 = PeriodicCoefficients::cosine_product(2, 0.5, 2.0);
    const BlochSolver solver(BlochOperatorSpec::wave(chi1, chi2, 6));
    const RealVector k = vec({0.3, -0.1});
    const auto gp = solver.assemble(k);
    CHECK_FALSE(gp.identity_mass);
    const auto modes = solver.modes(k, 6);
    for (std::size_t i = 0; i < modes.size(); ++i)
    {
      const auto &c = modes[i].coeffs;
      const Eigen::VectorXcd r = gp.a * c - modes[i].lam * (gp.b * c);
      CHECK(r.norm() <= 1e-8 * (1.0 + std::abs(modes[i].lam)) * c.norm());
      for (std::size_t j = 0; j < modes.size(); ++j)
      {
        const cplx g = modes[j].coeffs.dot(gp.b * c);
        CHECK(std::abs(g - (i == j ? cplx(1.0) : cplx())) < 1e-9);
      }
      Eigen::Index big = 0;
      c.cwiseAbs().maxCoeff(&big);
      CHECK(std::abs(c[big].imag()) < 1e-14);
      CHECK(c[big].real() > 0.0);
      CHECK(modes[i].norm == NormConvention::L2Chi1);
    }
  }

  TEST_CASE("empty lattice bands are folded parabolas")
  {
    const BlochSolver solver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::constant(1, 0.0), 8));
    const auto path = k_grid(1, 9);
    const auto table = band_structure(solver, path, 6);
    for (std::size_t i = 0; i < path.size(); ++i)
    {
      std::vector<double> folded;
      for (int m = -8; m <= 8; ++m)
      {
        folded.push_back((path[i][0] + m) * (path[i][0] + m));
      }
      std::sort(folded.begin(), folded.end());
      for (int n = 0; n < 6; ++n)
      {
        CHECK(std::abs(table.bands(static_cast<Eigen::Index>(i), n) - folded[static_cast<std::size_t>(n)]) < 1e-10);
      }
    }
  }

  TEST_CASE("bands are ordered and 1-periodic in k")
  {
    const BlochSolver solver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::cosine_product(2), 8));
    const auto grid = k_grid(2, 5);
    const auto table = band_structure(solver, grid, 6);
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
      const auto row = static_cast<Eigen::Index>(i);
      for (int n = 0; n + 1 < 6; ++n)
      {
        CHECK(table.bands(row, n) <= table.bands(row, n + 1));
      }
      for (int j = 0; j < 2; ++j)
      {
        RealVector shifted = grid[i];
        shifted[j] += 1.0;
        const auto lam = solver.eigenvalues(shifted, 6);
        for (int n = 0; n < 6; ++n)
        {
          CHECK(std::abs(lam[static_cast<std::size_t>(n)] - table.bands(row, n)) < 1e-8);
        }
      }
    }
  }

  TEST_CASE("modes outside the zone carry the quasiperiodic phase")
  {
    const BlochSolver solver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::cosine_product(2), 6));
    const auto inside = solver.modes(vec({0.3, 0.2}), 1)[0];
    const auto outside = solver.modes(vec({1.3, 0.2}), 1)[0];
    for (double x1 : {0.0, 0.9, 2.5})
    {
      const std::vector<double> x{x1, 1.1};
      CHECK(std::abs(outside.evaluate(x) - inside.evaluate(x) * std::polar(1.0, -x1)) < 1e-12);
    }
  }

  TEST_CASE("truncation convergence is spectral")
  {
    const auto v = PeriodicCoefficients::cosine_product(2);
    const RealVector k = vec({0.4, 0.0});
    const auto l4 = BlochSolver(BlochOperatorSpec::schrodinger(v, 4)).eigenvalues(k, 9);
    const auto l8 = BlochSolver(BlochOperatorSpec::schrodinger(v, 8)).eigenvalues(k, 9);
    const auto l12 = BlochSolver(BlochOperatorSpec::schrodinger(v, 12)).eigenvalues(k, 9);
    for (std::size_t n = 0; n < 9; ++n)
    {
      const double d1 = std::abs(l4[n] - l8[n]);
      const double d2 = std::abs(l8[n] - l12[n]);
      CHECK(d2 <= std::max(d1 / 10.0, 1e-12));
    }
  }

  TEST_CASE("eigenvalue asymptotics")
  {
    SUBCASE("free 1D bands approach n^2 / 4")
    {
      const BlochSolver solver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::constant(1, 0.0), 30));
      const auto rep = check_asymptotics(solver, vec({0.0}), 60);
      CHECK(rep.bounded);
      CHECK(rep.ratios.back() == doctest::Approx(0.25).epsilon(0.05));
      CHECK(rep.c1 > 0.2);
      CHECK(rep.c2 < 0.3);
    }
    SUBCASE("cos x1 cos x2 ratios are bounded")
    {
      const BlochSolver solver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::cosine_product(2), 8));
      const auto rep = check_asymptotics(solver, vec({0.4, 0.0}), 40);
      CHECK(rep.bounded);
      CHECK(rep.c2 / rep.c1 < 10.0);
    }
    CHECK_THROWS(check_asymptotics(BlochSolver(BlochOperatorSpec::schrodinger(PeriodicCoefficients::constant(1, 0.0),
                                                                               12)),
                                   vec({0.0}), 10));
  }

  TEST_CASE("invalid wave coefficients are rejected")
  {
    CHECK_THROWS_AS(BlochSolver(BlochOperatorSpec::wave(PeriodicCoefficients::cosine_product(1, 2.0, 0.5),
                                                        PeriodicCoefficients::constant(1, 1.0), 6)),
                    EllipticityError);
  }
}
