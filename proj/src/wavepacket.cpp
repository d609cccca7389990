// SPDX-License-Identifier: Apache-2.0
#include "blochnls/wavepacket.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "blochnls/errors.hpp"
#include "blochnls/fft.hpp"

namespace blochnls
{

WavepacketSpec::WavepacketSpec(double eps_, const EffectiveNlsParams &params, RadialProfile profile_,
                               RealVector center_)
  : eps(eps_), omega0(params.omega0), k0(params.mode.k), v_g(params.v_g), mode(params.mode),
    profile(std::move(profile_)), center(std::move(center_))
{
  if (!(eps > 0.0 && eps < 1.0))
  {
    throw DomainError(fmt::format("eps must lie in (0, 1) (got {})", eps));
  }
  if (center.size() != v_g.size() || profile.dim() != v_g.size())
  {
    throw ShapeError("wavepacket centre, group velocity and profile dimensions differ");
  }
}

double minimum_image(double dx, double length)
{
  return dx - length * std::floor(dx / length + 0.5);
}

AnsatzEvaluator::AnsatzEvaluator(const WavepacketSpec &spec, Lattice lattice, std::vector<double> offset)
  : spec_(spec), lattice_(std::move(lattice)), offset_(std::move(offset))
{
  const int d = lattice_.dim();
  if (spec_.k0.size() != d)
  {
    throw ShapeError("wavepacket and lattice dimensions differ");
  }
  if (offset_.empty())
  {
    offset_.assign(static_cast<std::size_t>(d), 0.0);
  }
  // Validates the offset (whole cells).
  (void)ComplexField(Lattice(d, lattice_.cell_points(), 1), offset_);
  for (int j = 0; j < d; ++j)
  {
    const double turns = spec_.k0[j] * lattice_.num_cells(j);
    if (std::abs(turns - std::round(turns)) > 1e-9)
    {
      throw DomainError(fmt::format("carrier exp(i k0.x) is not periodic on the box: M_{} k0_{} = {} is not an integer",
                                    j + 1, j + 1, turns));
    }
  }
  // p(x, k0) on one cell; the Bloch mode stores the k0-quasiperiodic shift already.
  carrier_cell_ = spec_.mode.sample_cell(lattice_.cell_points());
}

// Calls f(flat, carrier, y, |y|) with carrier = p(x, k0) exp(i k0.x).
template <class F>
void AnsatzEvaluator::for_each_point(double t, F &&f) const
{
  const int d = lattice_.dim();
  const int P = lattice_.cell_points();
  const Shape shape = lattice_.box_shape();
  const Shape cell = lattice_.cell_shape();
  std::array<int, 3> idx{};
  std::array<int, 3> cidx{};
  std::array<double, 3> y{};
  const auto di = static_cast<std::size_t>(d);
  for (std::size_t flat = 0; flat < shape.size(); ++flat)
  {
    shape.unflatten(flat, std::span<int>(idx.data(), di));
    double phase = 0.0;
    double r2 = 0.0;
    for (std::size_t j = 0; j < di; ++j)
    {
      const double x = offset_[j] + idx[j] * lattice_.spacing();
      cidx[j] = idx[j] % P;
      phase += spec_.k0[static_cast<Eigen::Index>(j)] * x;
      y[j] = minimum_image(x - spec_.v_g[static_cast<Eigen::Index>(j)] * t - spec_.center[static_cast<Eigen::Index>(j)],
                           lattice_.box_length(static_cast<int>(j)));
      r2 += y[j] * y[j];
    }
    const cplx carrier = carrier_cell_[cell.flat(std::span<const int>(cidx.data(), di))] * std::polar(1.0, phase);
    f(flat, carrier, std::span<const double>(y.data(), di), std::sqrt(r2));
  }
}

ComplexField AnsatzEvaluator::evaluate(double t) const
{
  ComplexField u(lattice_, offset_, t);
  const double eps = spec_.eps;
  const cplx global = eps * std::polar(1.0, (eps * eps - spec_.omega0) * t);
  for_each_point(t, [&](std::size_t flat, cplx carrier, std::span<const double>, double r) {
    const double env = spec_.profile(eps * r);
    u[flat] = env == 0.0 ? cplx{} : global * env * carrier;
  });
  if (spec_.real_part)
  {
    for (auto &v : u.values())
    {
      v = 2.0 * v.real();
    }
  }
  return u;
}

ComplexField AnsatzEvaluator::time_derivative(double t) const
{
  if (spec_.real_part)
  {
    throw ConfigError("the time derivative is provided for the complex ansatz only");
  }
  ComplexField du(lattice_, offset_, t);
  const double eps = spec_.eps;
  const double freq = eps * eps - spec_.omega0;
  const cplx global = eps * std::polar(1.0, freq * t);
  for_each_point(t, [&](std::size_t flat, cplx carrier, std::span<const double> y, double r) {
    const double env = spec_.profile(eps * r);
    if (env == 0.0)
    {
      return;
    }
    // d/dt R(eps |y|) = eps R'(eps |y|) (y / |y|) . (-v_g)
    double radial = 0.0;
    if (r > 0.0)
    {
      double dot = 0.0;
      for (std::size_t j = 0; j < y.size(); ++j)
      {
        dot += y[j] * spec_.v_g[static_cast<Eigen::Index>(j)];
      }
      radial = -eps * spec_.profile.derivative(eps * r) * dot / r;
    }
    du[flat] = global * carrier * (cplx(0.0, freq) * env + radial);
  });
  return du;
}

ComplexField assemble_ansatz(const WavepacketSpec &spec, const Lattice &lattice, std::vector<double> offset,
                             double t)
{
  return AnsatzEvaluator(spec, lattice, std::move(offset)).evaluate(t);
}

double sup_error(const ComplexField &u, const ComplexField &reference)
{
  if (u.size() != reference.size())
  {
    throw ShapeError("fields live on different grids");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
  {
    m = std::max(m, std::abs(u[i] - reference[i]));
  }
  return m;
}

double sup_error(const ComplexField &u, const AnsatzEvaluator &ansatz, double t)
{
  return sup_error(u, ansatz.evaluate(t));
}

double gp_residual(const AnsatzEvaluator &ansatz, const PeriodicCoefficients &potential,
                   const PeriodicCoefficients &nonlinearity, double t)
{
  const Lattice &lat = ansatz.lattice();
  const ComplexField u = ansatz.evaluate(t);
  const ComplexField du = ansatz.time_derivative(t);
  const auto V = tile_cell_samples(sample_coefficients(potential, lat), lat);
  const auto S = tile_cell_samples(sample_coefficients(nonlinearity, lat), lat);

  // Spectral Laplacian.
  const Shape shape = lat.box_shape();
  CVector lap(u.values().begin(), u.values().end());
  const Fft fft(shape);
  fft.forward(lap);
  std::vector<int> idx(static_cast<std::size_t>(lat.dim()));
  const double scale = 1.0 / static_cast<double>(shape.size());
  for (std::size_t f = 0; f < shape.size(); ++f)
  {
    shape.unflatten(f, idx);
    double xi2 = 0.0;
    for (int j = 0; j < lat.dim(); ++j)
    {
      const double xi =
          static_cast<double>(signed_frequency(idx[static_cast<std::size_t>(j)], lat.box_points(j))) / lat.num_cells(j);
      xi2 += xi * xi;
    }
    lap[f] *= -xi2 * scale;
  }
  fft.backward(lap);

  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
  {
    const cplx res = cplx(0.0, 1.0) * du[i] + lap[i] - V[i] * u[i] - S[i] * std::norm(u[i]) * u[i];
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

std::vector<double> peak_position(const ComplexField &u)
{
  std::size_t best = 0;
  double m = -1.0;
  for (std::size_t i = 0; i < u.size(); ++i)
  {
    const double a = std::norm(u[i]);
    if (a > m)
    {
      m = a;
      best = i;
    }
  }
  const Lattice &lat = u.lattice();
  std::vector<int> idx(static_cast<std::size_t>(lat.dim()));
  lat.box_shape().unflatten(best, idx);
  std::vector<double> x(idx.size());
  for (int j = 0; j < lat.dim(); ++j)
  {
    x[static_cast<std::size_t>(j)] = u.coordinate(j, idx[static_cast<std::size_t>(j)]);
  }
  return x;
}

}  // namespace blochnls
