// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace blochnls
{

struct ShootingOptions
{
  // Integration range and output spacing in canonical radii rho = r sqrt(2/alpha).
  double rho_max = 15.0;
  double rho_step = 0.004;
  double bracket_low = 0.1;
  double bracket_high = 100.0;
  double tolerance = 1e-14;  // bracket width on R(0), relative
  int max_iterations = 200;
  double start_offset = 1e-6;
  // Below this fraction of R(0) the trajectory is continued by the decaying linear solution.
  double tail_fraction = 1e-4;
};

/// Positive radial solution of (alpha/2)(R'' + (d-1)/r R') - R + nu R^3 = 0,
/// R'(0) = 0, R -> 0, sampled on a uniform grid in r.
class RadialProfile
{
public:
  RadialProfile(std::vector<double> r, std::vector<double> values, std::vector<double> slopes, double alpha,
                double nu, int dim, int iterations, double tail_start);

  // Cubic Hermite interpolation; zero beyond r_max when the profile has decayed there.
  double operator()(double r) const;
  double derivative(double r) const;

  const std::vector<double> &r() const { return r_; }
  const std::vector<double> &values() const { return values_; }
  const std::vector<double> &slopes() const { return slopes_; }
  double amplitude() const { return values_.front(); }
  double r_max() const { return r_.back(); }
  double alpha() const { return alpha_; }
  double nu() const { return nu_; }
  int dim() const { return dim_; }
  int iterations() const { return iterations_; }
  double tail_start() const { return tail_start_; }

  // max over interior nodes of |(alpha/2)(R'' + (d-1)R'/r) - R + nu R^3|, R'' by centred differences.
  double ode_residual() const;

  // int R^2 r^{d-1} dr by the trapezoid rule on the output grid.
  double radial_mass() const;

private:
  std::vector<double> r_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  double alpha_;
  double nu_;
  int dim_;
  int iterations_;
  double tail_start_;
  double step_;
};

// Profiles that have not decayed below this at r_max refuse evaluation beyond it.
inline constexpr double profile_cutoff = 1e-10;

/// Shooting on R(0) with bisection: a trajectory that crosses zero overshoots,
/// one whose slope turns positive while R > 0 undershoots. Integration is
/// adaptive Dormand-Prince 5(4).
RadialProfile townes_shoot(double alpha, double nu, int dim, const ShootingOptions &options = {});

}  // namespace blochnls
