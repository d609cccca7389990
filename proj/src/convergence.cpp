// SPDX-License-Identifier: Apache-2.0
#include "blochnls/convergence.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "blochnls/errors.hpp"
#include "blochnls/wavepacket.hpp"

namespace blochnls
{

SlopeFit fit_slope(const std::vector<double> &eps, const std::vector<double> &errors)
{
  if (eps.size() != errors.size())
  {
    throw ShapeError("eps and error lists differ in length");
  }
  if (eps.size() < 2)
  {
    throw DomainError("a slope needs at least two points");
  }
  const auto n = static_cast<double>(eps.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i)
  {
    if (!(errors[i] > 0.0) || !(eps[i] > 0.0))
    {
      throw DomainError(fmt::format("log-log fit needs positive values (eps {}, error {})", eps[i], errors[i]));
    }
    sx += std::log(eps[i]);
    sy += std::log(errors[i]);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i)
  {
    const double dx = std::log(eps[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(errors[i]) - my);
  }
  if (sxx == 0.0)
  {
    throw DomainError("all eps values are equal");
  }
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i)
  {
    const double r = std::log(errors[i]) - (f.intercept + f.slope * std::log(eps[i]));
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

std::string format_slope(double slope)
{
  return fmt::format("{:.4f}", slope);
}

int commensurate_cells(int at_least, double k0)
{
  auto smooth = [](int m) {
    for (int p : {2, 3, 5, 7})
    {
      while (m % p == 0)
      {
        m /= p;
      }
    }
    return m == 1;
  };
  for (int m = std::max(at_least, 1); m < at_least + 100000; ++m)
  {
    const double turns = m * k0;
    if (smooth(m) && std::abs(turns - std::round(turns)) < 1e-9)
    {
      return m;
    }
  }
  throw DomainError(fmt::format("no box of at least {} cells makes exp(i {} x) periodic", at_least, k0));
}

namespace
{

SimulationBox box_from_half_lengths(int dim, int cell_points, const RealVector &k0, const std::vector<double> &half)
{
  std::vector<int> cells(static_cast<std::size_t>(dim));
  std::vector<double> offset(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j)
  {
    const auto need = static_cast<int>(std::ceil(2.0 * half[static_cast<std::size_t>(j)] / two_pi - 1e-9));
    const int m = commensurate_cells(need, k0[j]);
    cells[static_cast<std::size_t>(j)] = m;
    offset[static_cast<std::size_t>(j)] = -two_pi * (m / 2);
  }
  return {Lattice(dim, cell_points, cells), offset};
}

}  // namespace

SimulationBox scaled_box(int dim, int cell_points, const RealVector &k0, double alpha, double eps, double factor,
                         double rho_cut)
{
  const double half = factor * rho_cut * std::sqrt(alpha / 2.0) / eps + 10.0 * two_pi;
  return box_from_half_lengths(dim, cell_points, k0, std::vector<double>(static_cast<std::size_t>(dim), half));
}

SimulationBox paper_box(int dim, int cell_points, const RealVector &k0, double eps)
{
  const double pi = std::numbers::pi;
  std::vector<double> half(static_cast<std::size_t>(dim), 40.0 * pi);
  half[0] = 20.0 * pi + 5.0 / (4.0 * eps * eps);
  return box_from_half_lengths(dim, cell_points, k0, half);
}

StudyContext prepare_study(const StudyConfig &cfg)
{
  const BlochSolver solver(cfg.operator_spec());
  EffectiveNlsParams params = effective_params(solver, cfg.k0, cfg.n0, cfg.nonlinearity());
  const double alpha = isotropic_alpha(params);
  if (!(alpha > 0.0) || !(params.nu > 0.0))
  {
    throw DomainError(fmt::format("no focusing ground state: alpha = {}, nu = {}", alpha, params.nu));
  }
  ShootingOptions opts;
  opts.rho_max = cfg.rho_max;
  RadialProfile profile = townes_shoot(alpha, params.nu, cfg.dim, opts);
  return StudyContext{cfg, std::move(params), alpha, std::move(profile)};
}

SimulationBox study_box(const StudyContext &ctx, double eps)
{
  const auto &c = ctx.config;
  if (c.box.kind == BoxPolicy::Kind::Paper)
  {
    return paper_box(c.dim, c.cell_points, c.k0, eps);
  }
  return scaled_box(c.dim, c.cell_points, c.k0, ctx.alpha, eps, c.box.factor, c.rho_cut);
}

RunResult run_single(const StudyContext &ctx, double eps, const std::optional<SimulationBox> &box_override,
                     const std::vector<SplitStepSolver::Observer> &extra)
{
  const auto &c = ctx.config;
  const auto start = std::chrono::steady_clock::now();
  const SimulationBox box = box_override ? *box_override : study_box(ctx, eps);

  RunResult run;
  run.eps = eps;
  run.t_end = c.t_end.end_time(eps);
  run.num_cells = box.lattice.num_cells();
  run.cell_points = box.lattice.cell_points();

  const WavepacketSpec ws(eps, ctx.params, ctx.profile, c.center);
  const AnsatzEvaluator ansatz(ws, box.lattice, box.offset);
  SplitStepSolver solver(box.lattice, c.coefficient("V"), c.coefficient("sigma"), c.fft_planning);
  StepperConfig sc;
  sc.dt = c.dt;
  sc.t_end = run.t_end;
  sc.record_every = c.record_every;
  run.steps = step_count(sc);

  ComplexField u = ansatz.evaluate(0.0);
  auto record = [&](const ComplexField &f) {
    run.series.times.push_back(f.time());
    run.series.sup_error.push_back(sup_error(f, ansatz, f.time()));
    run.series.mass.push_back(f.mass());
    run.series.peak.push_back(peak_position(f));
  };
  try
  {
    std::vector<SplitStepSolver::Observer> observers{record};
    observers.insert(observers.end(), extra.begin(), extra.end());
    solver.evolve(u, sc, observers);
  }
  catch (const NumericalError &e)
  {
    run.failure = e.what();
  }
  if (!run.series.sup_error.empty())
  {
    run.max_error = *std::max_element(run.series.sup_error.begin(), run.series.sup_error.end());
    run.final_error = run.series.sup_error.back();
  }
  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

ConvergenceReport run_convergence(const StudyConfig &cfg, bool allow_large, const ProgressSink &progress)
{
  if (cfg.model != ModelKind::Gp)
  {
    throw ConfigError("the convergence study simulates the GP model only");
  }
  if (cfg.eps_list.empty())
  {
    throw ConfigError("study.eps is empty");
  }
  auto say = [&](const std::string &s) {
    if (progress)
    {
      progress(s);
    }
  };
  const StudyContext ctx = prepare_study(cfg);
  say(fmt::format("omega0 = {:.6f}, v_g = ({:.6f}), alpha = {:.6f}, nu = {:.6f}, R(0) = {:.6f}", ctx.params.omega0,
                  fmt::join(ctx.params.v_g.data(), ctx.params.v_g.data() + ctx.params.v_g.size(), ", "), ctx.alpha,
                  ctx.params.nu, ctx.profile.amplitude()));

  for (double eps : cfg.eps_list)
  {
    const auto box = study_box(ctx, eps);
    const std::size_t points = box.lattice.box_shape().size();
    if (points > large_box_points && !allow_large)
    {
      throw ConfigError(fmt::format("eps = {} needs a {}-point grid; rerun with --allow-large to accept the cost", eps,
                                    points));
    }
  }

  ConvergenceReport rep;
  rep.eps_list = cfg.eps_list;
  rep.params = ctx.params;
  rep.alpha = ctx.alpha;
  rep.profile_amplitude = ctx.profile.amplitude();
  rep.dt = cfg.dt;
  rep.runs.resize(cfg.eps_list.size());

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<std::size_t>(cfg.workers > 0 ? cfg.workers : static_cast<int>(hw));
  for (std::size_t first = 0; first < cfg.eps_list.size(); first += workers)
  {
    std::vector<std::future<RunResult>> batch;
    const std::size_t last = std::min(cfg.eps_list.size(), first + workers);
    for (std::size_t i = first; i < last; ++i)
    {
      const double eps = cfg.eps_list[i];
      say(fmt::format("eps = {}: starting", eps));
      batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                 [&ctx, eps] { return run_single(ctx, eps); }));
    }
    for (std::size_t i = first; i < last; ++i)
    {
      rep.runs[i] = batch[i - first].get();
      const auto &r = rep.runs[i];
      say(fmt::format("eps = {}: max error {:.6e}, final {:.6e}, {} cells x {}, {:.1f} s{}", r.eps, r.max_error,
                      r.final_error, fmt::join(r.num_cells, "x"), r.cell_points, r.wall_seconds,
                      r.failure.empty() ? "" : " FAILED: " + r.failure));
    }
  }

  std::vector<double> eps_ok;
  std::vector<double> final_ok;
  for (const auto &r : rep.runs)
  {
    rep.max_errors.push_back(r.max_error);
    rep.final_errors.push_back(r.final_error);
    if (r.failure.empty())
    {
      eps_ok.push_back(r.eps);
      final_ok.push_back(r.final_error);
    }
  }
  std::vector<double> max_ok;
  for (const auto &r : rep.runs)
  {
    if (r.failure.empty())
    {
      max_ok.push_back(r.max_error);
    }
  }
  if (eps_ok.size() < 2)
  {
    throw NumericalError("fewer than two runs finished; no slope to fit");
  }
  rep.fit = fit_slope(eps_ok, max_ok);
  if (std::all_of(final_ok.begin(), final_ok.end(), [](double e) { return e > 0.0; }))
  {
    rep.final_fit = fit_slope(eps_ok, final_ok);
  }
  return rep;
}

}  // namespace blochnls
