// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "blochnls/lattice.hpp"

namespace blochnls
{

struct FourierMode
{
  std::vector<int> index;  // m in Z^d
  cplx value;
};

/// Truncated Fourier series of a real 2*pi-periodic coefficient,
/// f(x) = sum_{|m_j| <= N} c_m exp(i m.x).
///
/// Coefficients are stored row-major over {-N..N}^d. Real-valuedness means
/// c_{-m} = conj(c_m); it is checked when the series is sampled, not here, so
/// that invalid input reaches the sampling contract and fails there.
class PeriodicCoefficients
{
public:
  PeriodicCoefficients(int dim, int truncation, std::vector<cplx> coeffs);

  static PeriodicCoefficients constant(int dim, double value);
  // amplitude * prod_j cos(x_j) + offset
  static PeriodicCoefficients cosine_product(int dim, double amplitude = 1.0, double offset = 0.0);
  static PeriodicCoefficients from_modes(int dim, std::span<const FourierMode> modes);

  int dim() const { return dim_; }
  int truncation() const { return truncation_; }
  int width() const { return 2 * truncation_ + 1; }
  const std::vector<cplx> &coefficients() const { return coeffs_; }

  // c_m, or zero outside the stored range.
  cplx coefficient(std::span<const int> m) const;
  cplx mean() const;
  bool is_constant() const;

  // max_m |c_{-m} - conj(c_m)|
  double hermitian_defect() const;

  cplx evaluate(std::span<const double> x) const;

  PeriodicCoefficients operator*(double s) const;
  PeriodicCoefficients operator+(double c) const;

private:
  int dim_;
  int truncation_;
  std::vector<cplx> coeffs_;
};

// Tolerance below which the imaginary part of a sampled coefficient is roundoff.
inline constexpr double reality_tolerance = 1e-12;

/// Real samples on one cell of `lattice` at x_i = i * 2*pi/P, row-major.
/// Throws AliasError if N > P/2 - 1 and RealityError if the series is not real.
std::vector<double> sample_coefficients(const PeriodicCoefficients &pc, const Lattice &lattice);

// Same, for a bare cell resolution.
std::vector<double> sample_on_cell(const PeriodicCoefficients &pc, int cell_points);

// Tile cell samples periodically over the whole box of `lattice` (box offset is a multiple of 2*pi).
std::vector<double> tile_cell_samples(std::span<const double> cell, const Lattice &lattice);

}  // namespace blochnls
