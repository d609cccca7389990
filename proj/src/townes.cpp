// SPDX-License-Identifier: Apache-2.0
#include "blochnls/townes.hpp"

#include <array>
#include <cmath>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "blochnls/errors.hpp"

namespace blochnls
{

namespace
{

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;  // (R, R')

enum class Outcome
{
  Overshoot,
  Undershoot,
  Undecided,
};

struct RadialOde
{
  double inv_half_alpha;  // 2 / alpha
  double nu;
  int dim;

  void operator()(const State &y, State &dy, double r) const
  {
    dy[0] = y[1];
    dy[1] = -(dim - 1) * y[1] / r + inv_half_alpha * (y[0] - nu * y[0] * y[0] * y[0]);
  }
};

// Decaying solution T(kappa r) of the linearized equation and its derivative in r.
struct LinearTail
{
  double kappa;
  int dim;

  double value(double r) const
  {
    const double x = kappa * r;
    return dim == 1 ? std::exp(-x) : boost::math::cyl_bessel_k(0, x);
  }
  double slope(double r) const
  {
    const double x = kappa * r;
    return dim == 1 ? -kappa * std::exp(-x) : -kappa * boost::math::cyl_bessel_k(1, x);
  }
};

class Shooter
{
public:
  Shooter(double alpha, double nu, int dim, const ShootingOptions &o)
    : ode_{2.0 / alpha, nu, dim}, options_(o), scale_(std::sqrt(alpha / 2.0)), r_end_(o.rho_max * scale_)
  {
  }

  State start(double r0) const
  {
    const double h = options_.start_offset * scale_;
    const double curvature = ode_.inv_half_alpha * (r0 - ode_.nu * r0 * r0 * r0) / ode_.dim;
    return {r0 + 0.5 * h * h * curvature, h * curvature};
  }

  // Integrates from the series start; `visit(r, state)` sees every accepted step.
  template <class Visit>
  Outcome run(double r0, Visit &&visit) const
  {
    auto stepper = odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
    const double h = options_.start_offset * scale_;
    stepper.initialize(start(r0), h, 1e-3 * scale_);
    try
    {
      while (stepper.current_time() < r_end_)
      {
        stepper.do_step(std::cref(ode_));
        const State &y = stepper.current_state();
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
        {
          throw StiffnessError(fmt::format("shooting trajectory diverged at r = {}", stepper.current_time()));
        }
        if (!visit(stepper))
        {
          return Outcome::Undecided;
        }
        if (y[0] < 0.0)
        {
          return Outcome::Overshoot;
        }
        if (y[1] > 0.0)
        {
          return Outcome::Undershoot;
        }
      }
    }
    catch (const odeint::step_adjustment_error &e)
    {
      throw StiffnessError(fmt::format("adaptive step control failed: {}", e.what()));
    }
    // Reached r_end still decaying: compare with the linear decay rate.
    const State &y = stepper.current_state();
    const double kappa = std::sqrt(ode_.inv_half_alpha);
    return y[1] + kappa * y[0] > 0.0 ? Outcome::Undershoot : Outcome::Overshoot;
  }

  Outcome classify(double r0) const
  {
    return run(r0, [](const auto &) { return true; });
  }

  double scale() const { return scale_; }
  double r_end() const { return r_end_; }
  const RadialOde &ode() const { return ode_; }

private:
  RadialOde ode_;
  ShootingOptions options_;
  double scale_;
  double r_end_;
};

}  // namespace

RadialProfile::RadialProfile(std::vector<double> r, std::vector<double> values, std::vector<double> slopes,
                             double alpha, double nu, int dim, int iterations, double tail_start)
  : r_(std::move(r)), values_(std::move(values)), slopes_(std::move(slopes)), alpha_(alpha), nu_(nu), dim_(dim),
    iterations_(iterations), tail_start_(tail_start)
{
  if (r_.size() < 5 || values_.size() != r_.size() || slopes_.size() != r_.size())
  {
    throw ShapeError("radial profile needs matching r, R, R' arrays of at least 5 points");
  }
  step_ = r_[1] - r_[0];
}

double RadialProfile::operator()(double r) const
{
  r = std::abs(r);
  if (r >= r_.back())
  {
    if (std::abs(values_.back()) > profile_cutoff)
    {
      throw ProfileRangeError(fmt::format("profile queried at r = {} beyond r_max = {} where R = {:.3e}", r,
                                          r_.back(), values_.back()));
    }
    return 0.0;
  }
  const auto i = static_cast<std::size_t>(r / step_);
  const double t = (r - r_[i]) / step_;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * values_[i] + h10 * step_ * slopes_[i] + h01 * values_[i + 1] + h11 * step_ * slopes_[i + 1];
}

double RadialProfile::derivative(double r) const
{
  const double sign = r < 0.0 ? -1.0 : 1.0;
  r = std::abs(r);
  if (r >= r_.back())
  {
    return 0.0;
  }
  const auto i = static_cast<std::size_t>(r / step_);
  const double t = (r - r_[i]) / step_;
  const double t2 = t * t;
  const double d00 = 6 * t2 - 6 * t;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = -6 * t2 + 6 * t;
  const double d11 = 3 * t2 - 2 * t;
  return sign * ((d00 * values_[i] + d01 * values_[i + 1]) / step_ + d10 * slopes_[i] + d11 * slopes_[i + 1]);
}

double RadialProfile::ode_residual() const
{
  double worst = 0.0;
  const double inv = 1.0 / (12.0 * step_ * step_);
  for (std::size_t i = 2; i + 2 < values_.size(); ++i)
  {
    const double d2 =
        (-values_[i + 2] + 16 * values_[i + 1] - 30 * values_[i] + 16 * values_[i - 1] - values_[i - 2]) * inv;
    const double d1 = (-values_[i + 2] + 8 * values_[i + 1] - 8 * values_[i - 1] + values_[i - 2]) / (12.0 * step_);
    const double R = values_[i];
    const double res = 0.5 * alpha_ * (d2 + (dim_ - 1) * d1 / r_[i]) - R + nu_ * R * R * R;
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

double RadialProfile::radial_mass() const
{
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < r_.size(); ++i)
  {
    const double a = values_[i] * values_[i] * std::pow(r_[i], dim_ - 1);
    const double b = values_[i + 1] * values_[i + 1] * std::pow(r_[i + 1], dim_ - 1);
    s += 0.5 * (a + b) * (r_[i + 1] - r_[i]);
  }
  return s;
}

RadialProfile townes_shoot(double alpha, double nu, int dim, const ShootingOptions &options)
{
  if (!(alpha > 0.0) || !(nu > 0.0))
  {
    throw DomainError(fmt::format("shooting needs alpha > 0 and nu > 0 (focusing); got alpha = {}, nu = {}", alpha, nu));
  }
  if (dim != 1 && dim != 2)
  {
    throw DomainError(fmt::format("radial profiles are provided for d = 1, 2 (got {})", dim));
  }
  const Shooter shooter(alpha, nu, dim, options);

  double lo = options.bracket_low;
  double hi = options.bracket_high;
  if (shooter.classify(lo) != Outcome::Undershoot || shooter.classify(hi) != Outcome::Overshoot)
  {
    throw BracketError(fmt::format("R(0) in [{}, {}] does not bracket the ground state", lo, hi));
  }
  int iterations = 0;
  while (iterations < options.max_iterations && hi - lo > options.tolerance * hi)
  {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
    {
      break;
    }
    (shooter.classify(mid) == Outcome::Overshoot ? hi : lo) = mid;
    ++iterations;
  }
  const double r0 = 0.5 * (lo + hi);

  // Sample the final trajectory on the output grid until it decays to the tail threshold.
  const double step = options.rho_step * shooter.scale();
  const auto count = static_cast<std::size_t>(std::llround(shooter.r_end() / step)) + 1;
  std::vector<double> r(count);
  std::vector<double> R(count, 0.0);
  std::vector<double> dR(count, 0.0);
  for (std::size_t i = 0; i < count; ++i)
  {
    r[i] = static_cast<double>(i) * step;
  }
  R[0] = r0;
  const double threshold = options.tail_fraction * r0;
  std::size_t next = 1;
  std::size_t joint = count;
  shooter.run(r0, [&](const auto &stepper) {
    State y;
    while (next < count && r[next] <= stepper.current_time())
    {
      stepper.calc_state(r[next], y);
      R[next] = y[0];
      dR[next] = y[1];
      if (y[0] < threshold)
      {
        joint = next;
        return false;
      }
      ++next;
    }
    return true;
  });
  if (joint == count)
  {
    if (next < count)
    {
      throw BracketError("shooting trajectory left the bracket before decaying to the tail threshold");
    }
  }
  else
  {
    const LinearTail tail{std::sqrt(2.0 / alpha), dim};
    const double match = R[joint] / tail.value(r[joint]);
    for (std::size_t i = joint; i < count; ++i)
    {
      R[i] = match * tail.value(r[i]);
      dR[i] = match * tail.slope(r[i]);
    }
  }
  const double tail_start = joint < count ? r[joint] : r.back();
  return RadialProfile(std::move(r), std::move(R), std::move(dR), alpha, nu, dim, iterations, tail_start);
}

}  // namespace blochnls
