// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "blochnls/effective_nls.hpp"
#include "blochnls/lattice.hpp"
#include "blochnls/townes.hpp"

namespace blochnls
{

/// Data of the approximation
///   u_app(x, t) = eps exp(i eps^2 t) R(eps |x - v_g t - xi|) p_n0(x, k0) exp(i (k0.x - omega0 t)).
struct WavepacketSpec
{
  double eps = 0.1;
  double omega0 = 0.0;
  RealVector k0;
  RealVector v_g;
  BlochMode mode;
  RadialProfile profile;
  RealVector center;  // xi
  bool real_part = false;  // wave-equation variant 2 Re(.)

  WavepacketSpec(double eps, const EffectiveNlsParams &params, RadialProfile profile, RealVector center);
};

/// Evaluates u_app on the grid of one lattice and box offset.
///
/// On a torus the envelope uses the minimum-image distance, so the packet wraps
/// around the box. That needs a box-periodic carrier, i.e. M_j k0_j integer.
class AnsatzEvaluator
{
public:
  AnsatzEvaluator(const WavepacketSpec &spec, Lattice lattice, std::vector<double> offset);

  const Lattice &lattice() const { return lattice_; }
  const std::vector<double> &offset() const { return offset_; }
  const WavepacketSpec &spec() const { return spec_; }

  ComplexField evaluate(double t) const;
  // d/dt u_app by differentiating the formula.
  ComplexField time_derivative(double t) const;

private:
  template <class F>
  void for_each_point(double t, F &&f) const;

  WavepacketSpec spec_;
  Lattice lattice_;
  std::vector<double> offset_;
  std::vector<cplx> carrier_cell_;  // p(x, k0) on one cell
};

ComplexField assemble_ansatz(const WavepacketSpec &spec, const Lattice &lattice, std::vector<double> offset,
                             double t);

double sup_error(const ComplexField &u, const ComplexField &reference);
double sup_error(const ComplexField &u, const AnsatzEvaluator &ansatz, double t);

// sup |i d_t u_app + Lap u_app - V u_app - sigma |u_app|^2 u_app|, Lap spectral on the box.
double gp_residual(const AnsatzEvaluator &ansatz, const PeriodicCoefficients &potential,
                   const PeriodicCoefficients &nonlinearity, double t);

// Coordinates of the largest |u| on the grid.
std::vector<double> peak_position(const ComplexField &u);

// Wrap a displacement into [-L/2, L/2) for box length L.
double minimum_image(double dx, double length);

}  // namespace blochnls
