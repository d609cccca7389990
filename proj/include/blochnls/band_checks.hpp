// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blochnls/bloch_operator.hpp"

namespace blochnls
{

/// Bands lambda_n(k_i), n = 1..n_max, row i per k point.
struct BandTable
{
  std::vector<RealVector> k;
  Eigen::MatrixXd bands;
  int n_max = 0;
  // Arc length along a path (empty for grids) and labelled corner positions.
  std::vector<double> arc;
  std::vector<std::pair<double, std::string>> ticks;
};

/// Piecewise linear path through named corners of the Brillouin zone.
/// Corner letters: G = 0, X = (1/2, 0, ...), M = (1/2, 1/2, ...), R = (1/2, 1/2, 1/2).
struct KPath
{
  std::vector<RealVector> points;
  std::vector<double> arc;
  std::vector<std::pair<double, std::string>> ticks;
};

KPath k_path(int dim, const std::string &corners, int points_per_segment);

// Uniform grid with `per_dim` points per dimension at k_j = -1/2 + (i + 1)/per_dim.
std::vector<RealVector> k_grid(int dim, int per_dim);

BandTable band_structure(const BlochSolver &solver, const std::vector<RealVector> &ks, int n_max);
BandTable band_structure(const BlochSolver &solver, const KPath &path, int n_max);

struct AsymptoticsReport
{
  double c1 = 0.0;
  double c2 = 0.0;
  int first_index = 1;          // bounds are taken over n >= first_index
  std::vector<double> ratios;   // lambda_n / n^{2/d}, n = 1..n_max
  bool bounded = false;
};

// Empirical C1 n^{2/d} <= lambda_n(k) <= C2 n^{2/d} over the upper half of 1..n_max.
AsymptoticsReport check_asymptotics(const BlochSolver &solver, const RealVector &k, int n_max);

struct NonresonanceReport
{
  double margin = 0.0;
  int band = 0;      // signed band index of the closest pair
  int harmonic = 0;  // j in {+-1, +-3}
  double omega0 = 0.0;
  // Every unscanned band at every harmonic lies further than `margin` away.
  bool tail_certified = false;
  double tail_gap = 0.0;  // min_j omega_{n_scan}(j k0) - 3 omega0
};

inline constexpr double resonance_tolerance = 1e-8;

/// inf |j omega_n0(k0) - omega_n(j k0)| over j in {+-1, +-3}, 0 < |n| <= n_scan,
/// skipping (n0, 1) and (-n0, -1), with omega_{-n} = -omega_n.
/// Throws ResonanceError when the margin is below `resonance_tolerance`.
NonresonanceReport check_nonresonance(const BlochSolver &wave_solver, const RealVector &k0, int n0, int n_scan);

}  // namespace blochnls
