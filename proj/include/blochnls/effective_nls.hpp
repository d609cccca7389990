// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <variant>

#include <Eigen/Dense>

#include "blochnls/band_derivatives.hpp"
#include "blochnls/bloch_operator.hpp"

namespace blochnls
{

struct GpNonlinearity
{
  PeriodicCoefficients sigma;
};

struct WaveNonlinearity
{
  PeriodicCoefficients chi3;
};

using Nonlinearity = std::variant<GpNonlinearity, WaveNonlinearity>;

/// Coefficients of  i A_T + 1/2 div(H grad A) + nu |A|^2 A = 0  for the envelope
/// of the carrier p_n0(x, k0) exp(i(k0.x - omega0 t)).
struct EffectiveNlsParams
{
  double omega0 = 0.0;
  RealVector v_g;
  Eigen::MatrixXd hessian;  // D^2 omega_n0(k0)
  double nu = 0.0;
  double isotropy_defect = 0.0;  // max |H - (tr H / d) I|
  BlochMode mode;
  BandDerivatives derivatives;

  int dim() const { return static_cast<int>(v_g.size()); }
  double mean_curvature() const { return hessian.trace() / static_cast<double>(dim()); }
};

// Tolerance on |<p, p> - 1| in the mode's declared inner product.
inline constexpr double normalization_tolerance = 1e-8;

// nu = -int_P sigma |p|^4 for an L2-normalized p (quadrature exact for trigonometric data).
double nu_gp(const PeriodicCoefficients &sigma, const BlochMode &p);

// nu = -(3 / (2 omega0)) int_P chi3 |p|^4 / chi1 for p normalized in L2 with weight 1/chi1.
double nu_nlw(const PeriodicCoefficients &chi3, const PeriodicCoefficients &chi1, const BlochMode &p, double omega0);

EffectiveNlsParams effective_params(const BlochSolver &solver, const RealVector &k0, int n0,
                                    const Nonlinearity &nonlinearity, const DerivativeOptions &options = {});

// tr(H)/d, after checking that H is isotropic to `isotropy_tolerance` relative.
inline constexpr double isotropy_tolerance = 1e-3;
double isotropic_alpha(const EffectiveNlsParams &params);

}  // namespace blochnls
