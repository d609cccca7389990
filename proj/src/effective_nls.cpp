// SPDX-License-Identifier: Apache-2.0
#include "blochnls/effective_nls.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "blochnls/errors.hpp"

namespace blochnls
{

namespace
{

// Points per cell at which the trapezoid rule integrates sigma |p|^4 exactly.
int quadrature_points(const BlochMode &p, int coefficient_truncation)
{
  int q = 4 * p.truncation + coefficient_truncation + 2;
  q += q % 2;
  return std::max(q, 16);
}

// int_P w |p|^4 and int_P w' |p|^2 on the cell grid.
struct CellIntegrals
{
  double quartic = 0.0;
  double norm = 0.0;
};

CellIntegrals integrate(const BlochMode &p, const std::vector<double> &weight4, const std::vector<double> &weight2,
                        int points)
{
  const auto values = p.sample_cell(points);
  const double dv = std::pow(two_pi / points, p.dim);
  CellIntegrals c;
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    const double a2 = std::norm(values[i]);
    c.quartic += weight4[i] * a2 * a2;
    c.norm += weight2[i] * a2;
  }
  c.quartic *= dv;
  c.norm *= dv;
  return c;
}

void check_norm(double norm, const char *what)
{
  if (std::abs(norm - 1.0) > normalization_tolerance)
  {
    throw NormalizationError(fmt::format("mode is not normalized in {} (norm^2 = {:.12g})", what, norm));
  }
}

}  // namespace

double nu_gp(const PeriodicCoefficients &sigma, const BlochMode &p)
{
  if (sigma.dim() != p.dim)
  {
    throw ShapeError("sigma and mode dimensions differ");
  }
  const int q = quadrature_points(p, sigma.truncation());
  const auto s = sample_on_cell(sigma, q);
  const std::vector<double> ones(s.size(), 1.0);
  const auto c = integrate(p, s, ones, q);
  check_norm(c.norm, "L2");
  return -c.quartic;
}

// For the real ansatz u = eps A p exp(i theta) + c.c. in u_tt = chi1 Lap u - chi2 u - chi3 u^3,
// divide by chi1 and collect the exp(i theta) terms at order eps^3:
//   -2 i omega0 A_T p  from u_tt,   -3 |A|^2 A (chi3/chi1) |p|^2 p  from the cube.
// Projecting onto p in plain L2 (p is normalized with weight 1/chi1) and dividing by 2 omega0
// gives  i A_T + ... + nu |A|^2 A = 0  with  nu = -(3 / (2 omega0)) int chi3 |p|^4 / chi1,
// the same sign convention as nu_gp with sigma -> chi3.
double nu_nlw(const PeriodicCoefficients &chi3, const PeriodicCoefficients &chi1, const BlochMode &p, double omega0)
{
  if (chi3.dim() != p.dim || chi1.dim() != p.dim)
  {
    throw ShapeError("coefficient and mode dimensions differ");
  }
  if (!(omega0 > 0.0))
  {
    throw DomainError(fmt::format("omega0 must be positive (got {})", omega0));
  }
  int q = quadrature_points(p, std::max(chi3.truncation(), chi1.truncation()));
  if (!chi1.is_constant())
  {
    // 1/chi1 is not a trigonometric polynomial; oversample so the rule is spectrally converged.
    q = std::max(2 * q, 64);
  }
  const auto s3 = sample_on_cell(chi3, q);
  const auto s1 = sample_on_cell(chi1, q);
  std::vector<double> w4(s3.size());
  std::vector<double> w2(s3.size());
  for (std::size_t i = 0; i < s3.size(); ++i)
  {
    w4[i] = s3[i] / s1[i];
    w2[i] = 1.0 / s1[i];
  }
  const auto c = integrate(p, w4, w2, q);
  check_norm(c.norm, "L2 weighted by 1/chi1");
  return -3.0 / (2.0 * omega0) * c.quartic;
}

EffectiveNlsParams effective_params(const BlochSolver &solver, const RealVector &k0, int n0,
                                    const Nonlinearity &nonlinearity, const DerivativeOptions &options)
{
  const int count = std::min(n0 + 1, solver.galerkin_dimension());
  auto modes = solver.modes(k0, count);
  std::vector<double> vals;
  for (const auto &m : modes)
  {
    vals.push_back(m.lam);
  }
  const double gap = relative_gap(vals, n0);
  if (gap < degeneracy_tolerance)
  {
    throw DegenerateWarning(fmt::format("band {} is not simple at k0 (relative gap {:.2e})", n0, gap));
  }

  EffectiveNlsParams out;
  out.mode = modes[static_cast<std::size_t>(n0 - 1)];
  out.omega0 = out.mode.omega(solver.spec().kind);
  out.derivatives = band_derivatives(solver, k0, n0, options);
  out.v_g = out.derivatives.gradient;
  out.hessian = out.derivatives.hessian;
  const int d = solver.dim();
  out.isotropy_defect =
      (out.hessian - out.mean_curvature() * Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();

  out.nu = std::visit(
      [&](const auto &nl) -> double {
        using T = std::decay_t<decltype(nl)>;
        if constexpr (std::is_same_v<T, GpNonlinearity>)
        {
          return nu_gp(nl.sigma, out.mode);
        }
        else
        {
          return nu_nlw(nl.chi3, solver.spec().chi1, out.mode, out.omega0);
        }
      },
      nonlinearity);
  return out;
}

double isotropic_alpha(const EffectiveNlsParams &params)
{
  const double alpha = params.mean_curvature();
  if (params.isotropy_defect > isotropy_tolerance * std::abs(alpha))
  {
    throw IsotropyError(fmt::format("dispersion Hessian is anisotropic (defect {:.3e} vs mean curvature {:.6g})",
                                    params.isotropy_defect, alpha));
  }
  return alpha;
}

}  // namespace blochnls
