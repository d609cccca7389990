// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "blochnls/periodic_coefficients.hpp"

namespace blochnls
{

// Schrodinger: frequencies are the eigenvalues. Wave: frequencies are their square roots.
enum class OperatorKind
{
  Schrodinger,
  Wave
};

enum class NormConvention
{
  L2,      // int_P |p|^2 = 1
  L2Chi1,  // int_P |p|^2 / chi1 = 1
};

/// L(k) = -chi1 |grad + i k|^2 + chi2 on the periodicity cell, truncated to the
/// plane waves exp(i m.x) with |m_j| <= truncation.
struct BlochOperatorSpec
{
  PeriodicCoefficients chi1;
  PeriodicCoefficients chi2;
  int truncation;
  OperatorKind kind;

  static BlochOperatorSpec schrodinger(PeriodicCoefficients potential, int truncation);
  static BlochOperatorSpec wave(PeriodicCoefficients chi1, PeriodicCoefficients chi2, int truncation);

  int dim() const { return chi2.dim(); }
};

/// Galerkin matrices of -|grad + i k|^2 p + (chi2/chi1) p = lambda (1/chi1) p:
///   A_{m,m'} = |k + m|^2 delta_{m,m'} + (chi2/chi1)^_{m-m'},   B_{m,m'} = (1/chi1)^_{m-m'}.
struct GalerkinProblem
{
  Eigen::MatrixXcd a;
  Eigen::MatrixXcd b;
  bool identity_mass = true;
  RealVector k;          // as requested
  RealVector k_reduced;  // k - shift, in (-1/2, 1/2]^d
  std::vector<int> shift;
};

/// One Bloch eigenpair (lambda_n(k), p_n(., k)).
///
/// p(x, k_reduced) = (2 pi)^{-d/2} sum_m coeffs_m exp(i m.x); for k outside the
/// Brillouin zone p(x, k) = p(x, k_reduced) exp(-i shift.x).
struct BlochMode
{
  RealVector k;
  RealVector k_reduced;
  std::vector<int> shift;
  int band = 0;  // 1-based
  double lam = 0.0;
  Eigen::VectorXcd coeffs;
  NormConvention norm = NormConvention::L2;
  int dim = 1;
  int truncation = 0;

  double omega(OperatorKind kind) const;
  cplx evaluate(std::span<const double> x) const;
  // p(x_i, k) at x_i = i 2 pi / P on one cell (exact, no interpolation).
  std::vector<cplx> sample_cell(int cell_points) const;
  BlochMode rephased(double theta) const;
};

// Reduce k into (-1/2, 1/2]^d; returns the integer shift with k = k_reduced + shift.
std::vector<int> reduce_wavenumber(const RealVector &k, RealVector &k_reduced);

/// Bloch operator with its k-independent Fourier data precomputed.
class BlochSolver
{
public:
  explicit BlochSolver(BlochOperatorSpec spec);

  const BlochOperatorSpec &spec() const { return spec_; }
  int dim() const { return spec_.dim(); }
  int galerkin_dimension() const { return static_cast<int>(basis_.size()); }
  const std::vector<std::vector<int>> &basis() const { return basis_; }
  bool identity_mass() const { return identity_mass_; }

  GalerkinProblem assemble(const RealVector &k) const;

  // Lowest n_max eigenvalues, ascending.
  std::vector<double> eigenvalues(const RealVector &k, int n_max) const;

  // Lowest n_max eigenpairs, mass-orthonormal, phase fixed so the
  // largest-modulus coefficient is real positive.
  std::vector<BlochMode> modes(const RealVector &k, int n_max) const;

  struct Spectrum
  {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;  // columns, mass-orthonormal
    GalerkinProblem problem;
  };
  Spectrum full_spectrum(const RealVector &k) const;

private:
  void check_k(const RealVector &k) const;
  BlochMode make_mode(const Spectrum &s, int column) const;

  BlochOperatorSpec spec_;
  bool identity_mass_;
  int lookup_truncation_;       // 2N
  std::vector<cplx> quotient_;  // (chi2/chi1)^ on {-2N..2N}^d
  std::vector<cplx> mass_;      // (1/chi1)^ on {-2N..2N}^d
  std::vector<std::vector<int>> basis_;
};

// Relative gap below which neighbouring eigenvalues count as degenerate.
inline constexpr double degeneracy_tolerance = 1e-6;

// Relative distance of band n0 (1-based) to its nearest neighbour in `values`.
double relative_gap(std::span<const double> values, int n0);

GalerkinProblem assemble_operator(const BlochOperatorSpec &spec, const RealVector &k);

// Throws DegenerateWarning when `require_simple` names a band that is not simple.
std::vector<BlochMode> solve_bands(const BlochOperatorSpec &spec, const RealVector &k, int n_max,
                                   std::optional<int> require_simple = std::nullopt);

}  // namespace blochnls
