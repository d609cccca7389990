// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "blochnls/fft.hpp"
#include "blochnls/lattice.hpp"
#include "blochnls/periodic_coefficients.hpp"

namespace blochnls
{

struct StepperConfig
{
  double dt = 0.02;
  double t_end = 1.0;
  int record_every = 1;
};

/// Strang splitting for  i u_t + Lap u - V u - sigma |u|^2 u = 0  on the torus of a lattice.
///
/// The linear flow is exact in Fourier space, exp(-i |xi|^2 dt); the remaining
/// flow keeps |u| fixed pointwise and is the phase rotation exp(-i (V + sigma |u|^2) dt).
class SplitStepSolver
{
public:
  // Box samples of V and sigma (row-major over the full box).
  SplitStepSolver(Lattice lattice, std::vector<double> potential, std::vector<double> nonlinearity,
                  FftPlanning planning = FftPlanning::Estimate);
  // Cell-periodic coefficients, tiled over the box.
  SplitStepSolver(Lattice lattice, const PeriodicCoefficients &potential, const PeriodicCoefficients &nonlinearity,
                  FftPlanning planning = FftPlanning::Estimate);

  const Lattice &lattice() const { return lattice_; }
  const std::vector<double> &potential() const { return potential_; }
  const std::vector<double> &nonlinearity() const { return nonlinearity_; }

  void linear_step(ComplexField &u, double dt);
  void nonlinear_step(ComplexField &u, double dt) const;

  using Observer = std::function<void(const ComplexField &)>;

  // Runs nonlinear(dt/2) linear(dt) nonlinear(dt/2) per step, fusing adjacent
  // half steps. Observers see u at t = 0, every record_every steps, and at the end.
  // Throws NanError when a recorded state is not finite.
  void evolve(ComplexField &u, const StepperConfig &cfg, const std::vector<Observer> &observers = {});

private:
  void check_field(const ComplexField &u) const;
  void prepare_multiplier(double dt);

  Lattice lattice_;
  std::vector<double> potential_;
  std::vector<double> nonlinearity_;
  Fft fft_;
  std::vector<double> xi2_;  // |xi|^2 per storage slot
  double multiplier_dt_ = 0.0;
  CVector multiplier_;  // exp(-i |xi|^2 dt) / N
};

ComplexField strang_evolve(ComplexField u0, SplitStepSolver &solver, const StepperConfig &cfg,
                           const std::vector<SplitStepSolver::Observer> &observers = {});

// Number of steps for cfg, rounding t_end / dt to the nearest integer.
long step_count(const StepperConfig &cfg);

}  // namespace blochnls
