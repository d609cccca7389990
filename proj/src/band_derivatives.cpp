// SPDX-License-Identifier: Apache-2.0
#include "blochnls/band_derivatives.hpp"

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include <fmt/format.h>

#include "blochnls/errors.hpp"

namespace blochnls
{

namespace
{

// Fourth-order first-derivative weights at offsets -2..2 (divide by h).
constexpr std::array<double, 5> d1 = {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};
// Fourth-order second-derivative weights at offsets -2..2 (divide by h^2).
constexpr std::array<double, 5> d2 = {-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};

double relative_difference(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b)
{
  const double scale = std::max({a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(), 1.0});
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

// Memoized omega_n0 on integer stencil offsets (in units of a base step).
class StencilSampler
{
public:
  StencilSampler(const BlochSolver &solver, const RealVector &k0, int n0, double unit)
    : solver_(solver), k0_(k0), n0_(n0), unit_(unit)
  {
  }

  double operator()(const std::vector<int> &offset)
  {
    auto it = cache_.find(offset);
    if (it != cache_.end())
    {
      return it->second;
    }
    RealVector k = k0_;
    for (int j = 0; j < k.size(); ++j)
    {
      k[j] += offset[j] * unit_;
    }
    const int count = std::min(n0_ + 1, solver_.galerkin_dimension());
    const std::vector<double> vals = solver_.eigenvalues(k, count);
    const double gap = relative_gap(vals, n0_);
    min_gap_ = std::min(min_gap_, gap);
    if (gap < degeneracy_tolerance)
    {
      throw SimplenessError(fmt::format("band {} is degenerate near k0 (relative gap {:.2e} at stencil offset {})",
                                        n0_, gap, fmt::join(offset, ",")));
    }
    double lam = vals[static_cast<std::size_t>(n0_ - 1)];
    double w = lam;
    if (solver_.spec().kind == OperatorKind::Wave)
    {
      if (lam <= 0.0)
      {
        throw EllipticityError(fmt::format("lambda = {} is not positive, omega undefined", lam));
      }
      w = std::sqrt(lam);
    }
    cache_.emplace(offset, w);
    return w;
  }

  int evaluations() const { return static_cast<int>(cache_.size()); }
  double min_gap() const { return min_gap_; }

private:
  const BlochSolver &solver_;
  RealVector k0_;
  int n0_;
  double unit_;
  std::map<std::vector<int>, double> cache_;
  double min_gap_ = std::numeric_limits<double>::infinity();
};

}  // namespace

void analytic_eigenvalue_derivatives(const BlochSolver &solver, const RealVector &k0, int n0, double &lam,
                                     RealVector &gradient, Eigen::MatrixXd &hessian)
{
  const int d = solver.dim();
  const auto s = solver.full_spectrum(k0);
  const auto n = s.values.size();
  const Eigen::Index c0 = n0 - 1;
  lam = s.values[c0];

  // dA/dk_j = diag(2 (k + m)_j) in the plane-wave basis.
  std::vector<Eigen::VectorXd> da(static_cast<std::size_t>(d), Eigen::VectorXd(n));
  const auto &basis = solver.basis();
  for (Eigen::Index b = 0; b < n; ++b)
  {
    for (int j = 0; j < d; ++j)
    {
      da[static_cast<std::size_t>(j)][b] = 2.0 * (s.problem.k_reduced[j] + basis[static_cast<std::size_t>(b)][j]);
    }
  }

  const Eigen::VectorXcd c = s.vectors.col(c0);
  // Couplings <c_n, dA_j c0> for every eigenvector n.
  Eigen::MatrixXcd coupling(n, d);
  for (int j = 0; j < d; ++j)
  {
    coupling.col(j) = s.vectors.adjoint() * (da[static_cast<std::size_t>(j)].cast<cplx>().asDiagonal() * c);
  }

  gradient.resize(d);
  for (int j = 0; j < d; ++j)
  {
    gradient[j] = coupling(c0, j).real();
  }

  const double cc = c.squaredNorm();
  hessian = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i)
  {
    for (int j = 0; j < d; ++j)
    {
      double h = i == j ? 2.0 * cc : 0.0;
      for (Eigen::Index m = 0; m < n; ++m)
      {
        if (m == c0)
        {
          continue;
        }
        h += 2.0 * (std::conj(coupling(m, i)) * coupling(m, j)).real() / (lam - s.values[m]);
      }
      hessian(i, j) = h;
    }
  }
}

BandDerivatives band_derivatives(const BlochSolver &solver, const RealVector &k0, int n0,
                                 const DerivativeOptions &options)
{
  const int d = solver.dim();
  if (k0.size() != d)
  {
    throw ShapeError("k0 dimension does not match the operator");
  }
  if (n0 < 1 || n0 >= solver.galerkin_dimension())
  {
    throw ShapeError(fmt::format("band index {} outside the Galerkin range", n0));
  }
  const double h = options.step;
  // Sample on a grid of h/2 so both step sizes share points.
  StencilSampler f(solver, k0, n0, 0.5 * h);
  std::vector<int> zero(static_cast<std::size_t>(d), 0);

  BandDerivatives out;
  const double f0 = f(zero);
  out.omega = f0;

  auto axis = [&](int j, int steps) {
    auto o = zero;
    o[static_cast<std::size_t>(j)] = steps;
    return f(o);
  };

  // scale = 2 for step h, 1 for step h/2 (in units of h/2).
  auto gradient_at = [&](int scale, double step) {
    RealVector g(d);
    for (int j = 0; j < d; ++j)
    {
      double s = 0.0;
      for (int a = -2; a <= 2; ++a)
      {
        if (a != 0)
        {
          s += d1[static_cast<std::size_t>(a + 2)] * axis(j, a * scale);
        }
      }
      g[j] = s / step;
    }
    return g;
  };
  auto diagonal_at = [&](int scale, double step) {
    RealVector g(d);
    for (int j = 0; j < d; ++j)
    {
      double s = 0.0;
      for (int a = -2; a <= 2; ++a)
      {
        s += d2[static_cast<std::size_t>(a + 2)] * (a == 0 ? f0 : axis(j, a * scale));
      }
      g[j] = s / (step * step);
    }
    return g;
  };

  out.gradient = gradient_at(2, h);
  const RealVector g_half = gradient_at(1, 0.5 * h);
  out.hessian = Eigen::MatrixXd::Zero(d, d);
  out.hessian.diagonal() = diagonal_at(2, h);
  const RealVector diag_half = diagonal_at(1, 0.5 * h);

  for (int i = 0; i < d; ++i)
  {
    for (int j = i + 1; j < d; ++j)
    {
      double s = 0.0;
      for (int a = -2; a <= 2; ++a)
      {
        for (int b = -2; b <= 2; ++b)
        {
          const double w = d1[static_cast<std::size_t>(a + 2)] * d1[static_cast<std::size_t>(b + 2)];
          if (w == 0.0)
          {
            continue;
          }
          auto o = zero;
          o[static_cast<std::size_t>(i)] = 2 * a;
          o[static_cast<std::size_t>(j)] = 2 * b;
          s += w * f(o);
        }
      }
      out.hessian(i, j) = out.hessian(j, i) = s / (h * h);
    }
  }
  out.evaluations = f.evaluations();
  out.min_relative_gap = f.min_gap();

  RealVector lam_grad;
  Eigen::MatrixXd lam_hess;
  analytic_eigenvalue_derivatives(solver, k0, n0, out.lam, lam_grad, lam_hess);
  if (solver.spec().kind == OperatorKind::Wave)
  {
    const double w = std::sqrt(out.lam);
    out.gradient_analytic = lam_grad / (2.0 * w);
    out.hessian_analytic = lam_hess / (2.0 * w) - lam_grad * lam_grad.transpose() / (4.0 * w * w * w);
  }
  else
  {
    out.gradient_analytic = lam_grad;
    out.hessian_analytic = lam_hess;
  }

  out.gradient_refinement = relative_difference(out.gradient, g_half);
  out.hessian_refinement = relative_difference(out.hessian.diagonal(), diag_half);
  out.gradient_mismatch = relative_difference(out.gradient, out.gradient_analytic);
  out.hessian_mismatch = relative_difference(out.hessian, out.hessian_analytic);

  if (out.gradient_refinement > options.gradient_tolerance || out.hessian_refinement > options.hessian_tolerance)
  {
    throw StepError(fmt::format("finite differences do not settle under step halving (gradient {:.2e}, hessian {:.2e})",
                                out.gradient_refinement, out.hessian_refinement));
  }
  if (out.gradient_mismatch > options.gradient_tolerance || out.hessian_mismatch > options.hessian_tolerance)
  {
    throw StepError(fmt::format("finite differences disagree with the analytic derivatives (gradient {:.2e}, hessian {:.2e})",
                                out.gradient_mismatch, out.hessian_mismatch));
  }
  return out;
}

RealVector band_gradient(const BlochOperatorSpec &spec, const RealVector &k0, int n0)
{
  return band_derivatives(BlochSolver(spec), k0, n0).gradient;
}

Eigen::MatrixXd band_hessian(const BlochOperatorSpec &spec, const RealVector &k0, int n0)
{
  return band_derivatives(BlochSolver(spec), k0, n0).hessian;
}

}  // namespace blochnls
