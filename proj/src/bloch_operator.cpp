// SPDX-License-Identifier: Apache-2.0
#include "blochnls/bloch_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>
#include <lapacke.h>
#include <fmt/format.h>

#include "blochnls/errors.hpp"
#include "blochnls/fft.hpp"

namespace blochnls
{

namespace
{

constexpr double fourier_tail_tolerance = 1e-10;

// Place the coefficients of `pc` into a {-n..n}^d table; throws if any nonzero mode lies outside.
std::vector<cplx> embed(const PeriodicCoefficients &pc, int n, double scale, const char *name)
{
  const int d = pc.dim();
  const int w = 2 * n + 1;
  Shape target(std::vector<int>(d, w));
  Shape source(std::vector<int>(d, pc.width()));
  std::vector<cplx> out(target.size(), cplx{});
  std::vector<int> si(d), ti(d);
  for (std::size_t f = 0; f < source.size(); ++f)
  {
    const cplx c = pc.coefficients()[f];
    source.unflatten(f, si);
    bool inside = true;
    for (int j = 0; j < d; ++j)
    {
      ti[j] = si[j] - pc.truncation() + n;
      inside = inside && ti[j] >= 0 && ti[j] < w;
    }
    if (!inside)
    {
      if (std::abs(c) > 0.0)
      {
        throw TruncationError(fmt::format("{} has Fourier modes beyond |m| = {}; raise the truncation", name, n));
      }
      continue;
    }
    out[target.flat(ti)] = c * scale;
  }
  return out;
}

// Fourier coefficients of real cell samples, restricted to {-n..n}^d.
std::vector<cplx> fourier_coefficients(std::vector<double> samples, int dim, int cell_points, int n,
                                       const char *name)
{
  Shape cell(std::vector<int>(dim, cell_points));
  CVector hat(samples.begin(), samples.end());
  Fft(cell).forward(hat);
  const double inv = 1.0 / static_cast<double>(cell.size());
  const int w = 2 * n + 1;
  Shape target(std::vector<int>(dim, w));
  std::vector<cplx> out(target.size(), cplx{});
  std::vector<int> ci(dim), ti(dim);
  double kept = 0.0, tail = 0.0;
  for (std::size_t f = 0; f < cell.size(); ++f)
  {
    cell.unflatten(f, ci);
    bool inside = true;
    for (int j = 0; j < dim; ++j)
    {
      const int m = signed_frequency(ci[j], cell_points);
      ti[j] = m + n;
      inside = inside && std::abs(m) <= n;
    }
    const cplx c = hat[f] * inv;
    if (inside)
    {
      out[target.flat(ti)] = c;
      kept = std::max(kept, std::abs(c));
    }
    else
    {
      tail = std::max(tail, std::abs(c));
    }
  }
  if (tail > fourier_tail_tolerance * std::max(kept, 1e-300))
  {
    throw TruncationError(fmt::format("{} needs Fourier modes beyond |m| = {} (tail {:.2e}); raise the truncation",
                                      name, n, tail));
  }
  return out;
}

}  // namespace

BlochOperatorSpec BlochOperatorSpec::schrodinger(PeriodicCoefficients potential, int truncation)
{
  const int d = potential.dim();
  return {PeriodicCoefficients::constant(d, 1.0), std::move(potential), truncation, OperatorKind::Schrodinger};
}

BlochOperatorSpec BlochOperatorSpec::wave(PeriodicCoefficients chi1, PeriodicCoefficients chi2, int truncation)
{
  return {std::move(chi1), std::move(chi2), truncation, OperatorKind::Wave};
}

std::vector<int> reduce_wavenumber(const RealVector &k, RealVector &k_reduced)
{
  k_reduced = k;
  std::vector<int> shift(k.size());
  for (Eigen::Index j = 0; j < k.size(); ++j)
  {
    const double s = std::ceil(k[j] - 0.5);
    shift[j] = static_cast<int>(s);
    k_reduced[j] = k[j] - s;
  }
  return shift;
}

double BlochMode::omega(OperatorKind kind) const
{
  if (kind == OperatorKind::Schrodinger)
  {
    return lam;
  }
  if (!(lam > 0.0))
  {
    throw EllipticityError(fmt::format("wave frequency undefined: lambda_{} = {} is not positive", band, lam));
  }
  return std::sqrt(lam);
}

cplx BlochMode::evaluate(std::span<const double> x) const
{
  const int w = 2 * truncation + 1;
  Shape shape(std::vector<int>(dim, w));
  std::vector<int> idx(dim);
  cplx s{};
  for (std::size_t f = 0; f < shape.size(); ++f)
  {
    shape.unflatten(f, idx);
    double phase = 0.0;
    for (int j = 0; j < dim; ++j)
    {
      phase += (idx[j] - truncation - shift[j]) * x[j];
    }
    s += coeffs[static_cast<Eigen::Index>(f)] * std::polar(1.0, phase);
  }
  return s * std::pow(two_pi, -0.5 * dim);
}

std::vector<cplx> BlochMode::sample_cell(int cell_points) const
{
  // Folding m modulo P and running one inverse DFT evaluates the series exactly at the grid points.
  Shape cell(std::vector<int>(dim, cell_points));
  Shape modes(std::vector<int>(dim, 2 * truncation + 1));
  CVector buf(cell.size(), cplx{});
  std::vector<int> mi(dim), ci(dim);
  for (std::size_t f = 0; f < modes.size(); ++f)
  {
    modes.unflatten(f, mi);
    for (int j = 0; j < dim; ++j)
    {
      ci[j] = wrap_index(mi[j] - truncation - shift[j], cell_points);
    }
    buf[cell.flat(ci)] += coeffs[static_cast<Eigen::Index>(f)];
  }
  Fft(cell).backward(buf);
  const double norm = std::pow(two_pi, -0.5 * dim);
  std::vector<cplx> out(buf.size());
  std::transform(buf.begin(), buf.end(), out.begin(), [norm](cplx v) { return v * norm; });
  return out;
}

BlochMode BlochMode::rephased(double theta) const
{
  BlochMode m = *this;
  m.coeffs *= std::polar(1.0, theta);
  return m;
}

BlochSolver::BlochSolver(BlochOperatorSpec spec) : spec_(std::move(spec))
{
  const int d = spec_.dim();
  const int n = spec_.truncation;
  if (spec_.chi1.dim() != d)
  {
    throw ShapeError("chi1 and chi2 dimensions differ");
  }
  if (n < 0)
  {
    throw ShapeError("truncation must be non-negative");
  }
  lookup_truncation_ = 2 * n;

  // Ellipticity (and positivity of chi2 for the wave operator) on a verification grid.
  const int nmax_coeff = std::max(spec_.chi1.truncation(), spec_.chi2.truncation());
  int pv = std::max(64, 4 * (2 * n + nmax_coeff) + 16);
  pv += pv % 2;
  const auto chi1_samples = sample_on_cell(spec_.chi1, pv);
  const double chi1_min = *std::min_element(chi1_samples.begin(), chi1_samples.end());
  if (!(chi1_min > 0.0))
  {
    throw EllipticityError(fmt::format("chi1 must be positive; sampled minimum is {}", chi1_min));
  }
  std::vector<double> chi2_samples;
  if (spec_.kind == OperatorKind::Wave)
  {
    chi2_samples = sample_on_cell(spec_.chi2, pv);
    const double chi2_min = *std::min_element(chi2_samples.begin(), chi2_samples.end());
    if (!(chi2_min > 0.0))
    {
      throw EllipticityError(fmt::format("chi2 must be positive for the wave operator; sampled minimum is {}",
                                         chi2_min));
    }
  }

  identity_mass_ = false;
  if (spec_.chi1.is_constant())
  {
    const double c1 = spec_.chi1.mean().real();
    quotient_ = embed(spec_.chi2, lookup_truncation_, 1.0 / c1, "chi2/chi1");
    mass_ = embed(PeriodicCoefficients::constant(d, 1.0 / c1), lookup_truncation_, 1.0, "1/chi1");
    identity_mass_ = c1 == 1.0;
  }
  else
  {
    if (chi2_samples.empty())
    {
      chi2_samples = sample_on_cell(spec_.chi2, pv);
    }
    std::vector<double> q(chi1_samples.size()), w(chi1_samples.size());
    for (std::size_t i = 0; i < q.size(); ++i)
    {
      q[i] = chi2_samples[i] / chi1_samples[i];
      w[i] = 1.0 / chi1_samples[i];
    }
    quotient_ = fourier_coefficients(std::move(q), d, pv, lookup_truncation_, "chi2/chi1");
    mass_ = fourier_coefficients(std::move(w), d, pv, lookup_truncation_, "1/chi1");
  }

  Shape modes(std::vector<int>(d, 2 * n + 1));
  basis_.resize(modes.size());
  for (std::size_t f = 0; f < modes.size(); ++f)
  {
    std::vector<int> idx(d);
    modes.unflatten(f, idx);
    for (auto &v : idx)
    {
      v -= n;
    }
    basis_[f] = std::move(idx);
  }
}

void BlochSolver::check_k(const RealVector &k) const
{
  if (k.size() != dim())
  {
    throw ShapeError(fmt::format("wavenumber has {} components, operator dimension is {}", k.size(), dim()));
  }
}

GalerkinProblem BlochSolver::assemble(const RealVector &k) const
{
  check_k(k);
  const int d = dim();
  const auto nb = static_cast<Eigen::Index>(basis_.size());
  const int w = 2 * lookup_truncation_ + 1;

  GalerkinProblem gp;
  gp.k = k;
  gp.shift = reduce_wavenumber(k, gp.k_reduced);
  gp.identity_mass = identity_mass_;
  gp.a.resize(nb, nb);
  if (!identity_mass_)
  {
    gp.b.resize(nb, nb);
  }
  for (Eigen::Index a = 0; a < nb; ++a)
  {
    for (Eigen::Index b = 0; b < nb; ++b)
    {
      std::size_t f = 0;
      for (int j = 0; j < d; ++j)
      {
        f = f * static_cast<std::size_t>(w) +
            static_cast<std::size_t>(basis_[a][j] - basis_[b][j] + lookup_truncation_);
      }
      gp.a(a, b) = quotient_[f];
      if (!identity_mass_)
      {
        gp.b(a, b) = mass_[f];
      }
    }
    double kin = 0.0;
    for (int j = 0; j < d; ++j)
    {
      const double km = gp.k_reduced[j] + basis_[a][j];
      kin += km * km;
    }
    gp.a(a, a) += kin;
  }
  if (identity_mass_)
  {
    gp.b = Eigen::MatrixXcd::Identity(nb, nb);
  }
  return gp;
}

namespace
{

Eigen::MatrixXcd reduce_to_standard(const GalerkinProblem &gp)
{
  if (gp.identity_mass)
  {
    return gp.a;
  }
  const Eigen::LLT<Eigen::MatrixXcd> llt(gp.b);
  Eigen::MatrixXcd c = llt.matrixL().solve(gp.a);
  return llt.matrixL().solve(c.adjoint().eval()).adjoint();
}

// Lowest `count` eigenvalues of a Hermitian matrix (lower triangle referenced).
Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd a, int count)
{
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  lapack_int found = 0;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  const lapack_int info =
      LAPACKE_zheevr(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, reinterpret_cast<lapack_complex_double *>(a.data()), n, 0.0,
                     0.0, 1, count, 0.0, &found, w.data(), nullptr, n, support.data());
  if (info != 0 || found != count)
  {
    throw NumericalError(fmt::format("zheevr failed (info {}, {} of {} eigenvalues)", info, found, count));
  }
  return w.head(count);
}

// Full eigensystem. zheevd returns non-orthogonal vectors at n ~ 600 with some
// OpenBLAS builds, so the MRRR driver is used for vectors as well.
void hermitian_eigensystem(Eigen::MatrixXcd a, Eigen::VectorXd &values, Eigen::MatrixXcd &vectors)
{
  const auto n = static_cast<lapack_int>(a.rows());
  values.resize(n);
  vectors.resize(n, n);
  lapack_int found = 0;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'A', 'L', n,
                                         reinterpret_cast<lapack_complex_double *>(a.data()), n, 0.0, 0.0, 0, 0, 0.0,
                                         &found, values.data(), reinterpret_cast<lapack_complex_double *>(vectors.data()),
                                         n, support.data());
  if (info != 0 || found != n)
  {
    throw NumericalError(fmt::format("zheevr failed (info {}, {} of {} eigenpairs)", info, found, n));
  }
}

}  // namespace

std::vector<double> BlochSolver::eigenvalues(const RealVector &k, int n_max) const
{
  if (n_max < 1 || n_max > galerkin_dimension())
  {
    throw ShapeError(fmt::format("n_max = {} outside [1, {}]", n_max, galerkin_dimension()));
  }
  const GalerkinProblem gp = assemble(k);
  const Eigen::VectorXd vals = hermitian_eigenvalues(reduce_to_standard(gp), n_max);
  return {vals.data(), vals.data() + n_max};
}

BlochSolver::Spectrum BlochSolver::full_spectrum(const RealVector &k) const
{
  Spectrum s;
  s.problem = assemble(k);
  if (identity_mass_)
  {
    hermitian_eigensystem(s.problem.a, s.values, s.vectors);
  }
  else
  {
    // B = L L^H turns A x = lam B x into (L^-1 A L^-H) y = lam y with x = L^-H y.
    const Eigen::LLT<Eigen::MatrixXcd> llt(s.problem.b);
    Eigen::MatrixXcd c = llt.matrixL().solve(s.problem.a);
    c = llt.matrixL().solve(c.adjoint().eval()).adjoint();
    hermitian_eigensystem(c, s.values, s.vectors);
    s.vectors = llt.matrixU().solve(s.vectors);
  }
  // Deterministic phase: largest-modulus coefficient real positive (first one on near-ties).
  for (Eigen::Index c = 0; c < s.vectors.cols(); ++c)
  {
    auto col = s.vectors.col(c);
    const double big = col.cwiseAbs().maxCoeff();
    Eigen::Index pick = 0;
    while (std::abs(col[pick]) < big * (1.0 - 1e-9))
    {
      ++pick;
    }
    col *= std::conj(col[pick]) / std::abs(col[pick]);
  }
  return s;
}

BlochMode BlochSolver::make_mode(const Spectrum &s, int column) const
{
  BlochMode m;
  m.k = s.problem.k;
  m.k_reduced = s.problem.k_reduced;
  m.shift = s.problem.shift;
  m.band = column + 1;
  m.lam = s.values[column];
  m.coeffs = s.vectors.col(column);
  m.norm = spec_.chi1.is_constant() && spec_.chi1.mean().real() == 1.0 ? NormConvention::L2 : NormConvention::L2Chi1;
  m.dim = dim();
  m.truncation = spec_.truncation;
  return m;
}

std::vector<BlochMode> BlochSolver::modes(const RealVector &k, int n_max) const
{
  if (n_max < 1 || n_max > galerkin_dimension())
  {
    throw ShapeError(fmt::format("n_max = {} outside [1, {}]", n_max, galerkin_dimension()));
  }
  const Spectrum s = full_spectrum(k);
  std::vector<BlochMode> out;
  out.reserve(n_max);
  for (int c = 0; c < n_max; ++c)
  {
    out.push_back(make_mode(s, c));
  }
  return out;
}

double relative_gap(std::span<const double> values, int n0)
{
  const auto i = static_cast<std::size_t>(n0 - 1);
  double gap = std::numeric_limits<double>::infinity();
  if (i > 0)
  {
    gap = std::min(gap, std::abs(values[i] - values[i - 1]));
  }
  if (i + 1 < values.size())
  {
    gap = std::min(gap, std::abs(values[i + 1] - values[i]));
  }
  return gap / std::max(std::abs(values[i]), 1e-300);
}

GalerkinProblem assemble_operator(const BlochOperatorSpec &spec, const RealVector &k)
{
  return BlochSolver(spec).assemble(k);
}

std::vector<BlochMode> solve_bands(const BlochOperatorSpec &spec, const RealVector &k, int n_max,
                                   std::optional<int> require_simple)
{
  const BlochSolver solver(spec);
  int n_solve = n_max;
  if (require_simple)
  {
    n_solve = std::min(std::max(n_max, *require_simple + 1), solver.galerkin_dimension());
  }
  auto modes = solver.modes(k, n_solve);
  if (require_simple)
  {
    std::vector<double> vals;
    for (const auto &m : modes)
    {
      vals.push_back(m.lam);
    }
    const double gap = relative_gap(vals, *require_simple);
    if (gap < degeneracy_tolerance)
    {
      throw DegenerateWarning(fmt::format("band {} is not simple at this k (relative gap {:.2e})", *require_simple, gap));
    }
  }
  modes.resize(n_max);
  return modes;
}

}  // namespace blochnls
