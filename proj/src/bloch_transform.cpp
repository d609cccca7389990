// SPDX-License-Identifier: Apache-2.0
#include "blochnls/bloch_transform.hpp"

#include <cmath>

#include "blochnls/errors.hpp"
#include "blochnls/fft.hpp"

namespace blochnls
{

namespace
{

// Placement of one box frequency inside the (k slot, m slot) regrouping.
struct Regroup
{
  std::vector<std::size_t> k_flat;  // per box frequency slot
  std::vector<std::size_t> m_flat;
  std::vector<cplx> offset_phase;   // exp(-i xi . offset)
};

Regroup make_regroup(const Lattice &lat, std::span<const double> offset)
{
  const int d = lat.dim();
  const int p = lat.cell_points();
  const Shape box = lat.box_shape();
  const Shape kg = lat.kgrid_shape();
  const Shape cell = lat.cell_shape();

  std::vector<long> offset_cells(d);
  for (int j = 0; j < d; ++j)
  {
    offset_cells[j] = std::lround(offset[j] / two_pi);
  }

  Regroup g;
  g.k_flat.resize(box.size());
  g.m_flat.resize(box.size());
  g.offset_phase.resize(box.size());
  std::vector<int> bi(d), ks(d), ms(d);
  for (std::size_t f = 0; f < box.size(); ++f)
  {
    box.unflatten(f, bi);
    double turns = 0.0;  // xi . offset in units of full turns
    for (int j = 0; j < d; ++j)
    {
      const int mj = lat.num_cells(j);
      const int q = signed_frequency(bi[j], lat.box_points(j));
      const int rmin = lat.reduced_index_min(j);
      const int r = rmin + wrap_index(q - rmin, mj);
      const int m = (q - r) / mj;
      ks[j] = r - rmin;
      ms[j] = wrap_index(m, p);
      const long qc = (static_cast<long>(q) * offset_cells[j]) % mj;
      turns += static_cast<double>(wrap_index(static_cast<int>(qc), mj)) / mj;
    }
    g.k_flat[f] = kg.flat(ks);
    g.m_flat[f] = cell.flat(ms);
    g.offset_phase[f] = std::polar(1.0, -two_pi * turns);
  }
  return g;
}

}  // namespace

BlochField::BlochField(Lattice lattice)
  : lattice_(std::move(lattice)), cell_size_(lattice_.cell_shape().size()),
    k_count_(lattice_.kgrid_shape().size()), values_(cell_size_ * k_count_, cplx{})
{
}

std::span<cplx> BlochField::profile(std::size_t k_flat)
{
  return {values_.data() + k_flat * cell_size_, cell_size_};
}

std::span<const cplx> BlochField::profile(std::size_t k_flat) const
{
  return {values_.data() + k_flat * cell_size_, cell_size_};
}

std::vector<cplx> BlochField::profile_at(std::span<const int> r) const
{
  const int d = lattice_.dim();
  if (static_cast<int>(r.size()) != d)
  {
    throw ShapeError("reduced index has the wrong dimension");
  }
  std::vector<int> slot(d), shift(d);
  for (int j = 0; j < d; ++j)
  {
    const int mj = lattice_.num_cells(j);
    const int rmin = lattice_.reduced_index_min(j);
    const int rc = rmin + wrap_index(r[j] - rmin, mj);
    slot[j] = rc - rmin;
    shift[j] = (r[j] - rc) / mj;
  }
  const auto base = profile(lattice_.kgrid_shape().flat(slot));
  std::vector<cplx> out(base.begin(), base.end());
  const Shape cell = lattice_.cell_shape();
  const int p = lattice_.cell_points();
  std::vector<int> xi(d);
  for (std::size_t f = 0; f < out.size(); ++f)
  {
    cell.unflatten(f, xi);
    int turns = 0;
    for (int j = 0; j < d; ++j)
    {
      turns += shift[j] * xi[j];
    }
    out[f] *= std::polar(1.0, -two_pi * wrap_index(turns, p) / p);
  }
  return out;
}

RealVector BlochField::wavenumber(std::size_t k_flat) const
{
  const int d = lattice_.dim();
  std::vector<int> ks(d);
  lattice_.kgrid_shape().unflatten(k_flat, ks);
  RealVector k(d);
  for (int j = 0; j < d; ++j)
  {
    k[j] = lattice_.reduced_wavenumber(j, ks[j] + lattice_.reduced_index_min(j));
  }
  return k;
}

BlochField bloch_transform(const ComplexField &u)
{
  const Lattice &lat = u.lattice();
  const Shape box = lat.box_shape();
  CVector hat(u.values().begin(), u.values().end());
  Fft(box).forward(hat);

  const Regroup g = make_regroup(lat, u.offset());
  const double inv_n = 1.0 / static_cast<double>(box.size());
  BlochField bf(lat);
  auto &vals = bf.values();
  for (std::size_t f = 0; f < box.size(); ++f)
  {
    vals[g.k_flat[f] * bf.cell_size() + g.m_flat[f]] = hat[f] * inv_n * g.offset_phase[f];
  }
  const Fft cell_fft(lat.cell_shape());
  for (std::size_t k = 0; k < bf.k_count(); ++k)
  {
    cell_fft.backward(bf.profile(k));
  }
  return bf;
}

ComplexField bloch_inverse(const BlochField &bf, std::vector<double> offset)
{
  const Lattice &lat = bf.lattice();
  ComplexField u(lat, std::move(offset));
  const Shape box = lat.box_shape();

  BlochField work = bf;
  const Fft cell_fft(lat.cell_shape());
  const double inv_p = 1.0 / static_cast<double>(bf.cell_size());
  for (std::size_t k = 0; k < work.k_count(); ++k)
  {
    auto prof = work.profile(k);
    cell_fft.forward(prof);
    for (auto &v : prof)
    {
      v *= inv_p;
    }
  }

  const Regroup g = make_regroup(lat, u.offset());
  auto &vals = u.values();
  for (std::size_t f = 0; f < box.size(); ++f)
  {
    vals[f] = work.values()[g.k_flat[f] * work.cell_size() + g.m_flat[f]] * std::conj(g.offset_phase[f]);
  }
  Fft(box).backward(vals);
  return u;
}

}  // namespace blochnls
