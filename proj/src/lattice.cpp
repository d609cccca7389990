// SPDX-License-Identifier: Apache-2.0
#include "blochnls/lattice.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "blochnls/errors.hpp"

namespace blochnls
{

Shape::Shape(std::vector<int> extents) : extents_(std::move(extents)), size_(1)
{
  for (int e : extents_)
  {
    if (e <= 0)
    {
      throw ShapeError("shape extents must be positive");
    }
    size_ *= static_cast<std::size_t>(e);
  }
}

std::size_t Shape::flat(std::span<const int> index) const
{
  std::size_t f = 0;
  for (int j = 0; j < rank(); ++j)
  {
    f = f * static_cast<std::size_t>(extents_[j]) + static_cast<std::size_t>(index[j]);
  }
  return f;
}

void Shape::unflatten(std::size_t flat, std::span<int> index) const
{
  for (int j = rank() - 1; j >= 0; --j)
  {
    index[j] = static_cast<int>(flat % static_cast<std::size_t>(extents_[j]));
    flat /= static_cast<std::size_t>(extents_[j]);
  }
}

Lattice::Lattice(int dim, int cell_points, std::vector<int> num_cells)
  : dim_(dim), cell_points_(cell_points), num_cells_(std::move(num_cells))
{
  if (dim_ < 1 || dim_ > 3)
  {
    throw ShapeError(fmt::format("lattice dimension must be 1, 2 or 3 (got {})", dim_));
  }
  if (cell_points_ < 4 || cell_points_ % 2 != 0)
  {
    throw ShapeError(fmt::format("points per cell must be even and >= 4 (got {})", cell_points_));
  }
  if (static_cast<int>(num_cells_.size()) != dim_)
  {
    throw ShapeError("one cell count per dimension is required");
  }
  if (std::any_of(num_cells_.begin(), num_cells_.end(), [](int m) { return m < 1; }))
  {
    throw ShapeError("cell counts must be >= 1");
  }
}

Lattice::Lattice(int dim, int cell_points, int num_cells)
  : Lattice(dim, cell_points, std::vector<int>(static_cast<std::size_t>(std::max(dim, 0)), num_cells))
{
}

double Lattice::cell_volume_element() const
{
  return std::pow(spacing(), dim_);
}

Shape Lattice::box_shape() const
{
  std::vector<int> e(dim_);
  for (int j = 0; j < dim_; ++j)
  {
    e[j] = box_points(j);
  }
  return Shape(std::move(e));
}

Shape Lattice::cell_shape() const
{
  return Shape(std::vector<int>(dim_, cell_points_));
}

Shape Lattice::kgrid_shape() const
{
  return Shape(num_cells_);
}

ComplexField::ComplexField(Lattice lattice, std::vector<double> offset, double time)
  : lattice_(std::move(lattice)), offset_(std::move(offset)), time_(time),
    values_(lattice_.box_shape().size(), cplx{0.0, 0.0})
{
  if (offset_.empty())
  {
    offset_.assign(lattice_.dim(), 0.0);
  }
  if (static_cast<int>(offset_.size()) != lattice_.dim())
  {
    throw ShapeError("field offset must have one entry per dimension");
  }
  for (double o : offset_)
  {
    const double cells = o / two_pi;
    if (std::abs(cells - std::round(cells)) > 1e-9)
    {
      throw ShapeError(fmt::format("field offset {} is not a whole number of 2*pi cells", o));
    }
  }
}

double ComplexField::mass() const
{
  double s = 0.0;
  for (const auto &v : values_)
  {
    s += std::norm(v);
  }
  return s * lattice_.cell_volume_element();
}

double ComplexField::sup_norm() const
{
  double m = 0.0;
  for (const auto &v : values_)
  {
    m = std::max(m, std::abs(v));
  }
  return m;
}

}  // namespace blochnls
