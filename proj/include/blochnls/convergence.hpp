// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blochnls/effective_nls.hpp"
#include "blochnls/lattice.hpp"
#include "blochnls/split_step.hpp"
#include "blochnls/study_config.hpp"
#include "blochnls/townes.hpp"

namespace blochnls
{

struct SlopeFit
{
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log-log residuals
};

// Least squares fit of log(error) = slope log(eps) + intercept.
SlopeFit fit_slope(const std::vector<double> &eps, const std::vector<double> &errors);

// Shared by the CSV, metadata and SVG writers.
std::string format_slope(double slope);

struct SimulationBox
{
  Lattice lattice;
  std::vector<double> offset;
};

// Smallest M >= at_least whose prime factors are at most 7 and with M k0 an integer.
int commensurate_cells(int at_least, double k0);

// Half-lengths factor * rho_cut * sqrt(alpha/2) / eps plus 10 cells.
SimulationBox scaled_box(int dim, int cell_points, const RealVector &k0, double alpha, double eps, double factor,
                         double rho_cut);
// [-20 pi - 5/(4 eps^2), 20 pi + 5/(4 eps^2)] x [-40 pi, 40 pi], rounded out to whole cells.
SimulationBox paper_box(int dim, int cell_points, const RealVector &k0, double eps);

struct ErrorSeries
{
  std::vector<double> times;
  std::vector<double> sup_error;
  std::vector<double> mass;
  std::vector<std::vector<double>> peak;
};

struct RunResult
{
  double eps = 0.0;
  double t_end = 0.0;
  long steps = 0;
  std::vector<int> num_cells;
  int cell_points = 0;
  double wall_seconds = 0.0;
  ErrorSeries series;
  double max_error = 0.0;
  double final_error = 0.0;
  std::string failure;  // empty on success
};

struct ConvergenceReport
{
  std::vector<double> eps_list;
  std::vector<double> max_errors;
  std::vector<double> final_errors;
  SlopeFit fit;
  std::optional<SlopeFit> final_fit;
  std::vector<RunResult> runs;
  EffectiveNlsParams params;
  double alpha = 0.0;
  double profile_amplitude = 0.0;
  double dt = 0.0;
};

/// Precomputed, eps-independent data of a study.
struct StudyContext
{
  StudyConfig config;
  EffectiveNlsParams params;
  double alpha = 0.0;
  RadialProfile profile;
};

StudyContext prepare_study(const StudyConfig &cfg);

SimulationBox study_box(const StudyContext &ctx, double eps);

// One simulation at `eps`; numerical failures are recorded in RunResult::failure.
// `extra` observers see the same recorded fields as the error series.
RunResult run_single(const StudyContext &ctx, double eps, const std::optional<SimulationBox> &box = std::nullopt,
                     const std::vector<SplitStepSolver::Observer> &extra = {});

using ProgressSink = std::function<void(const std::string &)>;

/// Runs every eps of the config (concurrently when workers > 1) and fits the
/// slope of max-over-time sup errors. Paper-size boxes need `allow_large`.
ConvergenceReport run_convergence(const StudyConfig &cfg, bool allow_large = false, const ProgressSink &progress = {});

// Number of grid points above which a box counts as large.
inline constexpr std::size_t large_box_points = 16'000'000;

}  // namespace blochnls
