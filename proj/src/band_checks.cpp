// SPDX-License-Identifier: Apache-2.0
#include "blochnls/band_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "blochnls/errors.hpp"

namespace blochnls
{

namespace
{

RealVector corner(int dim, char c)
{
  RealVector k = RealVector::Zero(dim);
  int halves = 0;
  switch (c)
  {
  case 'G':
    halves = 0;
    break;
  case 'X':
    halves = 1;
    break;
  case 'M':
    halves = 2;
    break;
  case 'R':
    halves = 3;
    break;
  default:
    throw ConfigError(fmt::format("unknown Brillouin-zone corner '{}' (use G, X, M, R)", c));
  }
  if (halves > dim)
  {
    throw ConfigError(fmt::format("corner '{}' does not exist in dimension {}", c, dim));
  }
  for (int j = 0; j < halves; ++j)
  {
    k[j] = 0.5;
  }
  return k;
}

std::string corner_label(char c)
{
  return c == 'G' ? "Γ" : std::string(1, c);
}

}  // namespace

KPath k_path(int dim, const std::string &corners, int points_per_segment)
{
  if (corners.size() < 2)
  {
    throw ConfigError("a k-path needs at least two corners");
  }
  if (points_per_segment < 1)
  {
    throw ConfigError("points per segment must be positive");
  }
  KPath p;
  double s = 0.0;
  RealVector a = corner(dim, corners[0]);
  p.points.push_back(a);
  p.arc.push_back(0.0);
  p.ticks.emplace_back(0.0, corner_label(corners[0]));
  for (std::size_t c = 1; c < corners.size(); ++c)
  {
    const RealVector b = corner(dim, corners[c]);
    const double len = (b - a).norm();
    for (int i = 1; i <= points_per_segment; ++i)
    {
      const double t = static_cast<double>(i) / points_per_segment;
      p.points.push_back(a + t * (b - a));
      p.arc.push_back(s + t * len);
    }
    s += len;
    p.ticks.emplace_back(s, corner_label(corners[c]));
    a = b;
  }
  return p;
}

std::vector<RealVector> k_grid(int dim, int per_dim)
{
  if (per_dim < 1)
  {
    throw ConfigError("k-grid needs at least one point per dimension");
  }
  const Shape shape(std::vector<int>(static_cast<std::size_t>(dim), per_dim));
  std::vector<RealVector> ks;
  std::vector<int> idx(static_cast<std::size_t>(dim));
  for (std::size_t f = 0; f < shape.size(); ++f)
  {
    shape.unflatten(f, idx);
    RealVector k(dim);
    for (int j = 0; j < dim; ++j)
    {
      k[j] = -0.5 + static_cast<double>(idx[static_cast<std::size_t>(j)] + 1) / per_dim;
    }
    ks.push_back(std::move(k));
  }
  return ks;
}

BandTable band_structure(const BlochSolver &solver, const std::vector<RealVector> &ks, int n_max)
{
  BandTable t;
  t.k = ks;
  t.n_max = n_max;
  t.bands.resize(static_cast<Eigen::Index>(ks.size()), n_max);
  for (std::size_t i = 0; i < ks.size(); ++i)
  {
    const auto vals = solver.eigenvalues(ks[i], n_max);
    for (int n = 0; n < n_max; ++n)
    {
      t.bands(static_cast<Eigen::Index>(i), n) = vals[static_cast<std::size_t>(n)];
    }
  }
  return t;
}

BandTable band_structure(const BlochSolver &solver, const KPath &path, int n_max)
{
  BandTable t = band_structure(solver, path.points, n_max);
  t.arc = path.arc;
  t.ticks = path.ticks;
  return t;
}

AsymptoticsReport check_asymptotics(const BlochSolver &solver, const RealVector &k, int n_max)
{
  if (n_max < 20)
  {
    throw ConfigError("asymptotics need n_max >= 20 to see the tail");
  }
  const int d = solver.dim();
  const auto vals = solver.eigenvalues(k, n_max);
  AsymptoticsReport r;
  r.first_index = std::max(1, n_max / 2);
  r.c1 = std::numeric_limits<double>::infinity();
  r.c2 = -std::numeric_limits<double>::infinity();
  for (int n = 1; n <= n_max; ++n)
  {
    const double ratio = vals[static_cast<std::size_t>(n - 1)] / std::pow(static_cast<double>(n), 2.0 / d);
    r.ratios.push_back(ratio);
    if (n >= r.first_index)
    {
      r.c1 = std::min(r.c1, ratio);
      r.c2 = std::max(r.c2, ratio);
    }
  }
  r.bounded = std::isfinite(r.c1) && std::isfinite(r.c2) && r.c1 > 0.0;
  return r;
}

NonresonanceReport check_nonresonance(const BlochSolver &wave_solver, const RealVector &k0, int n0, int n_scan)
{
  if (wave_solver.spec().kind != OperatorKind::Wave)
  {
    throw ConfigError("the nonresonance check needs a wave operator");
  }
  if (n_scan < n0 || n_scan > wave_solver.galerkin_dimension())
  {
    throw ConfigError(fmt::format("n_scan = {} must lie in [n0, {}]", n_scan, wave_solver.galerkin_dimension()));
  }
  auto omegas = [&](const RealVector &k) {
    auto vals = wave_solver.eigenvalues(k, n_scan);
    for (double &v : vals)
    {
      if (v <= 0.0)
      {
        throw EllipticityError(fmt::format("lambda = {} is not positive, omega undefined", v));
      }
      v = std::sqrt(v);
    }
    return vals;
  };

  NonresonanceReport r;
  r.omega0 = omegas(k0)[static_cast<std::size_t>(n0 - 1)];
  r.margin = std::numeric_limits<double>::infinity();
  r.tail_gap = std::numeric_limits<double>::infinity();
  for (int j : {1, -1, 3, -3})
  {
    const RealVector kj = static_cast<double>(j) * k0;
    const auto w = omegas(kj);
    r.tail_gap = std::min(r.tail_gap, w.back() - 3.0 * r.omega0);
    for (int n = 1; n <= n_scan; ++n)
    {
      for (int sign : {1, -1})
      {
        const int band = sign * n;
        if ((band == n0 && j == 1) || (band == -n0 && j == -1))
        {
          continue;
        }
        const double dist = std::abs(j * r.omega0 - sign * w[static_cast<std::size_t>(n - 1)]);
        if (dist < r.margin)
        {
          r.margin = dist;
          r.band = band;
          r.harmonic = j;
        }
      }
    }
  }
  r.tail_certified = r.tail_gap > r.margin;
  if (r.margin < resonance_tolerance)
  {
    throw ResonanceError(fmt::format("resonance at band {} harmonic {} (distance {:.3e})", r.band, r.harmonic, r.margin));
  }
  return r;
}

}  // namespace blochnls
