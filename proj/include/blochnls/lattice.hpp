// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "blochnls/aligned.hpp"

namespace blochnls
{

using cplx = std::complex<double>;
using RealVector = Eigen::VectorXd;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Row-major multi-index bookkeeping (last index fastest), matching FFTW's layout.
class Shape
{
public:
  Shape() = default;
  explicit Shape(std::vector<int> extents);

  int rank() const { return static_cast<int>(extents_.size()); }
  int extent(int j) const { return extents_[j]; }
  const std::vector<int> &extents() const { return extents_; }
  std::size_t size() const { return size_; }

  std::size_t flat(std::span<const int> index) const;
  void unflatten(std::size_t flat, std::span<int> index) const;

  bool operator==(const Shape &) const = default;

private:
  std::vector<int> extents_;
  std::size_t size_ = 0;
};

// Non-negative residue of i modulo n.
constexpr int wrap_index(int i, int n)
{
  const int r = i % n;
  return r < 0 ? r + n : r;
}

// Signed DFT frequency of storage slot i on an n-point grid: {-n/2+1, ..., n/2}.
constexpr int signed_frequency(int i, int n)
{
  return i > n / 2 ? i - n : i;
}

/// Rectangular torus made of whole 2*pi periodicity cells.
///
/// Every cell is sampled with `cell_points` points per dimension, so the grid
/// spacing 2*pi/P divides the cell exactly and the box length along dimension j
/// is 2*pi*M_j. The reduced wavenumbers resolvable on such a box are r/M_j with
/// r in {-ceil(M_j/2)+1, ..., floor(M_j/2)}, i.e. an M_j-point grid on (-1/2, 1/2].
class Lattice
{
public:
  Lattice(int dim, int cell_points, std::vector<int> num_cells);
  Lattice(int dim, int cell_points, int num_cells);

  int dim() const { return dim_; }
  int cell_points() const { return cell_points_; }
  int num_cells(int j) const { return num_cells_[j]; }
  const std::vector<int> &num_cells() const { return num_cells_; }
  int box_points(int j) const { return num_cells_[j] * cell_points_; }

  double spacing() const { return two_pi / cell_points_; }
  double box_length(int j) const { return two_pi * num_cells_[j]; }
  double cell_volume_element() const;  // dx^d

  Shape box_shape() const;
  Shape cell_shape() const;
  Shape kgrid_shape() const;

  // Lowest reduced-wavenumber index r along dimension j.
  int reduced_index_min(int j) const { return -((num_cells_[j] + 1) / 2) + 1; }
  double reduced_wavenumber(int j, int r) const { return static_cast<double>(r) / num_cells_[j]; }

  bool operator==(const Lattice &) const = default;

private:
  int dim_;
  int cell_points_;
  std::vector<int> num_cells_;
};

/// Complex samples of a field on the full box of a lattice.
///
/// `offset` is the physical coordinate of grid point 0 and must be a whole
/// number of cells, so cell-periodic coefficients tile the box exactly.
class ComplexField
{
public:
  explicit ComplexField(Lattice lattice, std::vector<double> offset = {}, double time = 0.0);

  const Lattice &lattice() const { return lattice_; }
  const std::vector<double> &offset() const { return offset_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  CVector &values() { return values_; }
  const CVector &values() const { return values_; }
  cplx &operator[](std::size_t i) { return values_[i]; }
  const cplx &operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double coordinate(int j, int i) const { return offset_[j] + i * lattice_.spacing(); }

  double mass() const;  // sum |u|^2 dx^d
  double sup_norm() const;

private:
  Lattice lattice_;
  std::vector<double> offset_;
  double time_;
  CVector values_;
};

}  // namespace blochnls
