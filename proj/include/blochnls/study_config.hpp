// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "blochnls/bloch_operator.hpp"
#include "blochnls/effective_nls.hpp"
#include "blochnls/fft.hpp"

namespace blochnls
{

enum class ModelKind
{
  Gp,
  NlwCheck,
};

struct BoxPolicy
{
  enum class Kind
  {
    Paper,
    Scaled,
  };
  Kind kind = Kind::Scaled;
  double factor = 1.0;
};

struct TEndPolicy
{
  bool one_over_eps2 = true;
  double value = 1.0;  // T0 in t_end = T0 / eps^2, or the fixed end time

  double end_time(double eps) const { return one_over_eps2 ? value / (eps * eps) : value; }
};

/// Everything a study run needs; parsed from an INI-style file (see README).
struct StudyConfig
{
  ModelKind model = ModelKind::Gp;
  int dim = 2;
  // Named coefficients: V, sigma (GP) or chi1, chi2, chi3 (NLW).
  std::map<std::string, PeriodicCoefficients> coefficients;

  RealVector k0;
  int n0 = 1;
  int truncation = 12;
  int cell_points = 32;
  double dt = 0.02;
  FftPlanning fft_planning = FftPlanning::Estimate;

  std::vector<double> eps_list;
  BoxPolicy box;
  TEndPolicy t_end;
  int record_every = 50;
  RealVector center;
  double rho_max = 30.0;  // canonical extent of the soliton profile used in the ansatz
  double rho_cut = 8.0;   // canonical envelope radius the scaled box must hold
  int workers = 0;        // 0: hardware concurrency

  std::string k_path = "GXMG";
  int path_points = 40;
  int n_bands = 8;
  int n_scan = 20;

  std::string output_dir = "out";

  const PeriodicCoefficients &coefficient(const std::string &name) const;
  BlochOperatorSpec operator_spec() const;
  Nonlinearity nonlinearity() const;
};

// Parses one coefficient: "cosprod A c", "constant c" or "fourier m1,m2:re[:im] ...".
PeriodicCoefficients parse_coefficient(const std::string &text, int dim);

StudyConfig parse_study_config(std::istream &in);
StudyConfig load_study_config(const std::string &path);

}  // namespace blochnls
