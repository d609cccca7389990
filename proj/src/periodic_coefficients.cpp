// SPDX-License-Identifier: Apache-2.0
#include "blochnls/periodic_coefficients.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "blochnls/errors.hpp"

namespace blochnls
{

namespace
{

std::size_t ipow(std::size_t base, int e)
{
  std::size_t r = 1;
  for (int i = 0; i < e; ++i)
  {
    r *= base;
  }
  return r;
}

}  // namespace

PeriodicCoefficients::PeriodicCoefficients(int dim, int truncation, std::vector<cplx> coeffs)
  : dim_(dim), truncation_(truncation), coeffs_(std::move(coeffs))
{
  if (dim_ < 1 || dim_ > 3)
  {
    throw ShapeError(fmt::format("coefficient dimension must be 1, 2 or 3 (got {})", dim_));
  }
  if (truncation_ < 0)
  {
    throw ShapeError("truncation must be non-negative");
  }
  if (coeffs_.size() != ipow(static_cast<std::size_t>(width()), dim_))
  {
    throw ShapeError(fmt::format("expected {} Fourier coefficients, got {}",
                                 ipow(static_cast<std::size_t>(width()), dim_), coeffs_.size()));
  }
}

PeriodicCoefficients PeriodicCoefficients::constant(int dim, double value)
{
  return PeriodicCoefficients(dim, 0, {cplx{value, 0.0}});
}

PeriodicCoefficients PeriodicCoefficients::cosine_product(int dim, double amplitude, double offset)
{
  // prod_j cos(x_j) = 2^{-d} sum over sign patterns exp(i m.x), m in {-1,1}^d.
  const int w = 3;
  std::vector<cplx> c(ipow(w, dim), cplx{});
  const double a = amplitude / std::pow(2.0, dim);
  Shape shape(std::vector<int>(dim, w));
  std::vector<int> idx(dim);
  for (std::size_t f = 0; f < c.size(); ++f)
  {
    shape.unflatten(f, idx);
    if (std::all_of(idx.begin(), idx.end(), [](int i) { return i != 1; }))
    {
      c[f] = a;
    }
  }
  c[shape.flat(std::vector<int>(dim, 1))] += offset;
  return PeriodicCoefficients(dim, 1, std::move(c));
}

PeriodicCoefficients PeriodicCoefficients::from_modes(int dim, std::span<const FourierMode> modes)
{
  int n = 0;
  for (const auto &m : modes)
  {
    if (static_cast<int>(m.index.size()) != dim)
    {
      throw ShapeError("Fourier mode index has the wrong dimension");
    }
    for (int v : m.index)
    {
      n = std::max(n, std::abs(v));
    }
  }
  const int w = 2 * n + 1;
  Shape shape(std::vector<int>(dim, w));
  std::vector<cplx> c(shape.size(), cplx{});
  std::vector<int> slot(dim);
  for (const auto &m : modes)
  {
    for (int j = 0; j < dim; ++j)
    {
      slot[j] = m.index[j] + n;
    }
    c[shape.flat(slot)] += m.value;
  }
  return PeriodicCoefficients(dim, n, std::move(c));
}

cplx PeriodicCoefficients::coefficient(std::span<const int> m) const
{
  std::size_t f = 0;
  for (int j = 0; j < dim_; ++j)
  {
    if (std::abs(m[j]) > truncation_)
    {
      return {};
    }
    f = f * static_cast<std::size_t>(width()) + static_cast<std::size_t>(m[j] + truncation_);
  }
  return coeffs_[f];
}

cplx PeriodicCoefficients::mean() const
{
  return coefficient(std::vector<int>(dim_, 0));
}

bool PeriodicCoefficients::is_constant() const
{
  const std::size_t centre = (coeffs_.size() - 1) / 2;
  for (std::size_t f = 0; f < coeffs_.size(); ++f)
  {
    if (f != centre && coeffs_[f] != cplx{})
    {
      return false;
    }
  }
  return true;
}

double PeriodicCoefficients::hermitian_defect() const
{
  // Reversing the flat index maps m to -m on the symmetric storage box.
  double d = 0.0;
  const std::size_t n = coeffs_.size();
  for (std::size_t f = 0; f < n; ++f)
  {
    d = std::max(d, std::abs(coeffs_[n - 1 - f] - std::conj(coeffs_[f])));
  }
  return d;
}

cplx PeriodicCoefficients::evaluate(std::span<const double> x) const
{
  Shape shape(std::vector<int>(dim_, width()));
  std::vector<int> idx(dim_);
  cplx s{};
  for (std::size_t f = 0; f < coeffs_.size(); ++f)
  {
    shape.unflatten(f, idx);
    double phase = 0.0;
    for (int j = 0; j < dim_; ++j)
    {
      phase += (idx[j] - truncation_) * x[j];
    }
    s += coeffs_[f] * std::polar(1.0, phase);
  }
  return s;
}

PeriodicCoefficients PeriodicCoefficients::operator*(double s) const
{
  auto c = coeffs_;
  for (auto &v : c)
  {
    v *= s;
  }
  return PeriodicCoefficients(dim_, truncation_, std::move(c));
}

PeriodicCoefficients PeriodicCoefficients::operator+(double c) const
{
  auto copy = coeffs_;
  copy[(copy.size() - 1) / 2] += c;
  return PeriodicCoefficients(dim_, truncation_, std::move(copy));
}

std::vector<double> sample_on_cell(const PeriodicCoefficients &pc, int cell_points)
{
  const int d = pc.dim();
  const int n = pc.truncation();
  if (n > cell_points / 2 - 1)
  {
    throw AliasError(fmt::format("truncation N={} aliases on a {}-point cell grid (need N <= {})", n,
                                 cell_points, cell_points / 2 - 1));
  }
  const double scale = std::max(1.0, std::abs(pc.coefficients()[(pc.coefficients().size() - 1) / 2]));
  double cmax = 0.0;
  for (const auto &c : pc.coefficients())
  {
    cmax = std::max(cmax, std::abs(c));
  }
  if (pc.hermitian_defect() > reality_tolerance * std::max(scale, cmax))
  {
    throw RealityError(fmt::format("coefficients violate Hermitian symmetry by {:.3e}", pc.hermitian_defect()));
  }

  // exp(i m x_i) tables, one per mode offset, shared by every dimension.
  const int w = pc.width();
  std::vector<cplx> table(static_cast<std::size_t>(w) * cell_points);
  for (int mi = 0; mi < w; ++mi)
  {
    for (int i = 0; i < cell_points; ++i)
    {
      // Reduce m*i modulo P before converting to an angle to keep the phase exact.
      const int k = wrap_index((mi - n) * i, cell_points);
      table[static_cast<std::size_t>(mi) * cell_points + i] = std::polar(1.0, two_pi * k / cell_points);
    }
  }

  Shape cell(std::vector<int>(d, cell_points));
  Shape modes(std::vector<int>(d, w));
  std::vector<double> out(cell.size());
  std::vector<int> xi(d), mi(d);
  for (std::size_t p = 0; p < cell.size(); ++p)
  {
    cell.unflatten(p, xi);
    cplx s{};
    for (std::size_t f = 0; f < modes.size(); ++f)
    {
      const cplx c = pc.coefficients()[f];
      if (c == cplx{})
      {
        continue;
      }
      modes.unflatten(f, mi);
      cplx e = c;
      for (int j = 0; j < d; ++j)
      {
        e *= table[static_cast<std::size_t>(mi[j]) * cell_points + xi[j]];
      }
      s += e;
    }
    out[p] = s.real();
  }
  return out;
}

std::vector<double> sample_coefficients(const PeriodicCoefficients &pc, const Lattice &lattice)
{
  if (pc.dim() != lattice.dim())
  {
    throw ShapeError("coefficient and lattice dimensions differ");
  }
  return sample_on_cell(pc, lattice.cell_points());
}

std::vector<double> tile_cell_samples(std::span<const double> cell, const Lattice &lattice)
{
  const Shape box = lattice.box_shape();
  const Shape cs = lattice.cell_shape();
  if (cell.size() != cs.size())
  {
    throw ShapeError("cell sample count does not match the lattice");
  }
  const int d = lattice.dim();
  const int p = lattice.cell_points();
  std::vector<double> out(box.size());
  std::vector<int> bi(d), ci(d);
  for (std::size_t f = 0; f < box.size(); ++f)
  {
    box.unflatten(f, bi);
    for (int j = 0; j < d; ++j)
    {
      ci[j] = bi[j] % p;
    }
    out[f] = cell[cs.flat(ci)];
  }
  return out;
}

}  // namespace blochnls
