// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "blochnls/bloch_operator.hpp"

namespace blochnls
{

struct DerivativeOptions
{
  double step = 1e-3;
  // Relative agreement required between independent routes, scaled by max(|.|, 1).
  double gradient_tolerance = 1e-6;
  double hessian_tolerance = 1e-5;
};

/// k-derivatives of omega_n0 at k0, where omega = lambda (Schrodinger) or sqrt(lambda) (Wave).
///
/// `gradient` and `hessian` come from fourth-order centred differences. The
/// analytic counterparts use Hellmann-Feynman for the gradient and second-order
/// perturbation theory over the full Galerkin spectrum for the Hessian.
struct BandDerivatives
{
  double omega = 0.0;
  double lam = 0.0;
  RealVector gradient;
  Eigen::MatrixXd hessian;
  RealVector gradient_analytic;
  Eigen::MatrixXd hessian_analytic;
  // Relative differences: FD vs analytic, and step h vs h/2.
  double gradient_mismatch = 0.0;
  double hessian_mismatch = 0.0;
  double gradient_refinement = 0.0;
  double hessian_refinement = 0.0;
  double min_relative_gap = 0.0;  // smallest gap of band n0 over the stencil
  int evaluations = 0;
};

// Throws SimplenessError when band n0 is degenerate anywhere on the stencil and
// StepError when the routes or the step refinement disagree beyond tolerance.
BandDerivatives band_derivatives(const BlochSolver &solver, const RealVector &k0, int n0,
                                 const DerivativeOptions &options = {});

RealVector band_gradient(const BlochOperatorSpec &spec, const RealVector &k0, int n0);
Eigen::MatrixXd band_hessian(const BlochOperatorSpec &spec, const RealVector &k0, int n0);

// Hellmann-Feynman gradient and perturbative Hessian of lambda_n0 (not omega).
void analytic_eigenvalue_derivatives(const BlochSolver &solver, const RealVector &k0, int n0, double &lam,
                                     RealVector &gradient, Eigen::MatrixXd &hessian);

}  // namespace blochnls
