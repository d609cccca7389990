// SPDX-License-Identifier: Apache-2.0
#include "blochnls/split_step.hpp"

#include <cmath>

#include <fmt/format.h>

#include "blochnls/errors.hpp"

namespace blochnls
{

SplitStepSolver::SplitStepSolver(Lattice lattice, std::vector<double> potential, std::vector<double> nonlinearity,
                                 FftPlanning planning)
  : lattice_(std::move(lattice)), potential_(std::move(potential)), nonlinearity_(std::move(nonlinearity)),
    fft_(lattice_.box_shape(), planning)
{
  const Shape shape = lattice_.box_shape();
  if (potential_.size() != shape.size() || nonlinearity_.size() != shape.size())
  {
    throw ShapeError("potential and nonlinearity must be sampled on the full box");
  }
  xi2_.resize(shape.size());
  std::vector<int> idx(static_cast<std::size_t>(lattice_.dim()));
  for (std::size_t f = 0; f < shape.size(); ++f)
  {
    shape.unflatten(f, idx);
    double s = 0.0;
    for (int j = 0; j < lattice_.dim(); ++j)
    {
      // Box wavenumber q / M_j for a box of length 2 pi M_j.
      const double xi = static_cast<double>(signed_frequency(idx[static_cast<std::size_t>(j)], lattice_.box_points(j))) /
                        lattice_.num_cells(j);
      s += xi * xi;
    }
    xi2_[f] = s;
  }
}

SplitStepSolver::SplitStepSolver(Lattice lattice, const PeriodicCoefficients &potential,
                                 const PeriodicCoefficients &nonlinearity, FftPlanning planning)
  : SplitStepSolver(lattice, tile_cell_samples(sample_coefficients(potential, lattice), lattice),
                    tile_cell_samples(sample_coefficients(nonlinearity, lattice), lattice), planning)
{
}

void SplitStepSolver::check_field(const ComplexField &u) const
{
  if (!(u.lattice() == lattice_))
  {
    throw ShapeError("field lattice differs from the solver lattice");
  }
}

void SplitStepSolver::prepare_multiplier(double dt)
{
  if (!multiplier_.empty() && multiplier_dt_ == dt)
  {
    return;
  }
  const double scale = 1.0 / static_cast<double>(xi2_.size());
  multiplier_.resize(xi2_.size());
  for (std::size_t i = 0; i < xi2_.size(); ++i)
  {
    multiplier_[i] = std::polar(scale, -xi2_[i] * dt);
  }
  multiplier_dt_ = dt;
}

void SplitStepSolver::linear_step(ComplexField &u, double dt)
{
  check_field(u);
  prepare_multiplier(dt);
  auto &v = u.values();
  fft_.forward(v);
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    v[i] *= multiplier_[i];
  }
  fft_.backward(v);
}

void SplitStepSolver::nonlinear_step(ComplexField &u, double dt) const
{
  check_field(u);
  auto &v = u.values();
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    const double phase = -(potential_[i] + nonlinearity_[i] * std::norm(v[i])) * dt;
    v[i] *= cplx(std::cos(phase), std::sin(phase));
  }
}

long step_count(const StepperConfig &cfg)
{
  if (cfg.dt == 0.0 || !std::isfinite(cfg.dt))
  {
    throw ConfigError("time step must be finite and nonzero");
  }
  if (cfg.record_every < 1)
  {
    throw ConfigError("record_every must be >= 1");
  }
  const double ratio = cfg.t_end / cfg.dt;
  if (ratio < 0.0)
  {
    throw ConfigError("t_end and dt must have the same sign");
  }
  return std::lround(ratio);
}

void SplitStepSolver::evolve(ComplexField &u, const StepperConfig &cfg, const std::vector<Observer> &observers)
{
  check_field(u);
  const long steps = step_count(cfg);
  const double dt = cfg.dt;
  const double t0 = u.time();

  auto observe = [&](long s) {
    u.set_time(t0 + static_cast<double>(s) * dt);
    for (const auto &v : u.values())
    {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      {
        throw NanError(fmt::format("non-finite value at t = {} (step {})", u.time(), s));
      }
    }
    for (const auto &obs : observers)
    {
      obs(u);
    }
  };

  observe(0);
  if (steps == 0)
  {
    return;
  }
  nonlinear_step(u, 0.5 * dt);
  for (long s = 1; s <= steps; ++s)
  {
    linear_step(u, dt);
    const bool record = s == steps || s % cfg.record_every == 0;
    if (record)
    {
      nonlinear_step(u, 0.5 * dt);
      observe(s);
      if (s < steps)
      {
        nonlinear_step(u, 0.5 * dt);
      }
    }
    else
    {
      nonlinear_step(u, dt);
    }
  }
}

ComplexField strang_evolve(ComplexField u0, SplitStepSolver &solver, const StepperConfig &cfg,
                           const std::vector<SplitStepSolver::Observer> &observers)
{
  solver.evolve(u0, cfg, observers);
  return u0;
}

}  // namespace blochnls
