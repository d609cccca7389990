// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "blochnls/lattice.hpp"

namespace blochnls
{

/// Discrete Bloch transform of a box field.
///
/// With u_hat(xi) = N^{-1} sum_n u(x_n) exp(-i xi.x_n) on the box wavenumbers
/// xi = q/M, the transform is
///
///   u~(x, k) = sum_m u_hat(k + m) exp(i m.x),   k = r/M on the reduced grid,
///
/// stored for x on the first cell. The inverse is u(x) = sum_k u~(x, k) exp(i k.x);
/// the sum over the k-grid plays the role of the integral over the Brillouin zone.
/// Storage is row-major over (k slot, x index) with k slot s_j = r_j - r_min_j.
class BlochField
{
public:
  explicit BlochField(Lattice lattice);

  const Lattice &lattice() const { return lattice_; }
  CVector &values() { return values_; }
  const CVector &values() const { return values_; }

  std::size_t cell_size() const { return cell_size_; }
  std::size_t k_count() const { return k_count_; }

  // Profile x -> u~(x, k) for k slot `k_flat`.
  std::span<cplx> profile(std::size_t k_flat);
  std::span<const cplx> profile(std::size_t k_flat) const;

  // Profile at an arbitrary integer reduced index r (k = r/M), using
  // u~(x, k + e_j) = exp(-i x_j) u~(x, k) to leave the stored grid.
  std::vector<cplx> profile_at(std::span<const int> r) const;

  // Reduced wavenumber of slot `k_flat`.
  RealVector wavenumber(std::size_t k_flat) const;

private:
  Lattice lattice_;
  std::size_t cell_size_;
  std::size_t k_count_;
  CVector values_;
};

BlochField bloch_transform(const ComplexField &u);

// Inverse transform onto a box whose first grid point sits at `offset`
// (defaults to the origin; must be a whole number of cells).
ComplexField bloch_inverse(const BlochField &bf, std::vector<double> offset = {});

}  // namespace blochnls
