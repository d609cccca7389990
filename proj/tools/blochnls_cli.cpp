// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "blochnls/band_checks.hpp"
#include "blochnls/convergence.hpp"
#include "blochnls/effective_nls.hpp"
#include "blochnls/errors.hpp"
#include "blochnls/report.hpp"
#include "blochnls/study_config.hpp"
#include "blochnls/svg_plot.hpp"
#include "blochnls/townes.hpp"

namespace fs = std::filesystem;
using namespace blochnls;

namespace
{

fs::path prepare_dir(const std::string &out)
{
  const fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

void say(const std::string &s)
{
  std::cerr << s << std::endl;
}

int cmd_bands(const StudyConfig &cfg, const std::string &out, const std::optional<std::string> &path,
              std::optional<int> nmax)
{
  const BlochSolver solver(cfg.operator_spec());
  const int n = nmax.value_or(cfg.n_bands);
  const KPath kp = k_path(cfg.dim, path.value_or(cfg.k_path), cfg.path_points);
  const BandTable table = band_structure(solver, kp, n);

  fs::path csv;
  fs::path svg;
  if (fs::path(out).extension() == ".csv")
  {
    csv = out;
    svg = fs::path(out).replace_extension(".svg");
    if (csv.has_parent_path())
    {
      fs::create_directories(csv.parent_path());
    }
  }
  else
  {
    const auto dir = prepare_dir(out);
    csv = dir / "bands.csv";
    svg = dir / "bands.svg";
  }
  write_text_file(csv, band_csv(table));
  write_text_file(svg, band_svg(table));

  const auto at_k0 = solver.eigenvalues(cfg.k0, n);
  fmt::print("lambda_n at k0 = ({:.6f}), size-ordered:\n", fmt::join(cfg.k0.data(), cfg.k0.data() + cfg.k0.size(), ", "));
  for (int i = 0; i < n; ++i)
  {
    fmt::print("  n = {:2d}  {:.10f}\n", i + 1, at_k0[static_cast<std::size_t>(i)]);
  }
  fmt::print("wrote {} and {}\n", csv.string(), svg.string());
  return 0;
}

int cmd_coeffs(const StudyConfig &cfg, const std::optional<std::string> &out)
{
  const BlochSolver solver(cfg.operator_spec());
  const auto params = effective_params(solver, cfg.k0, cfg.n0, cfg.nonlinearity());
  fmt::print("{}", params_text(params));
  const auto json = params_json(params);
  fmt::print("{}", json);
  if (out)
  {
    const auto dir = prepare_dir(*out);
    write_text_file(dir / "coeffs.json", json);
    write_text_file(dir / "coeffs.txt", params_text(params));
  }
  return 0;
}

int cmd_soliton(const StudyConfig &cfg, const std::string &out, bool canonical, double rho_max)
{
  double alpha = 2.0;
  double nu = 1.0;
  if (!canonical)
  {
    const BlochSolver solver(cfg.operator_spec());
    const auto params = effective_params(solver, cfg.k0, cfg.n0, cfg.nonlinearity());
    alpha = isotropic_alpha(params);
    nu = params.nu;
  }
  ShootingOptions opts;
  opts.rho_max = rho_max;
  const auto profile = townes_shoot(alpha, nu, cfg.dim, opts);
  const auto dir = prepare_dir(out);
  write_text_file(dir / "soliton.csv", profile_csv(profile));
  write_text_file(dir / "soliton.svg", profile_svg(profile, 8.0 * std::sqrt(alpha / 2.0)));
  fmt::print("alpha = {:.10f}\nnu = {:.10f}\nR(0) = {:.12f}\nbisection iterations = {}\nODE residual = {:.3e}\n"
             "radial mass = {:.10f}\nwrote {}\n",
             alpha, nu, profile.amplitude(), profile.iterations(), profile.ode_residual(), profile.radial_mass(),
             (dir / "soliton.csv").string());
  return 0;
}

int cmd_simulate(const StudyConfig &cfg, const std::string &out, double eps, int slices, int stride)
{
  const StudyContext ctx = prepare_study(cfg);
  const double t_end = cfg.t_end.end_time(eps);
  const auto box = study_box(ctx, eps);
  const auto dir = prepare_dir(out);
  say(fmt::format("eps = {}: {} cells x {} points, t_end = {}", eps, fmt::join(box.lattice.num_cells(), "x"),
                  box.lattice.cell_points(), t_end));

  SliceSet along_x1{"x1", {}, {}, {}};
  SliceSet along_x2{"x2", {}, {}, {}};
  int next = 0;
  auto capture = [&](const ComplexField &u) {
    const double target = t_end * next / std::max(slices - 1, 1);
    if (next >= slices || u.time() + 0.5 * cfg.dt < target)
    {
      return;
    }
    ++next;
    std::vector<double> through(ctx.config.center.data(), ctx.config.center.data() + cfg.dim);
    auto [x, a] = line_slice(u, 0, through);
    along_x1.times.push_back(u.time());
    along_x1.coordinates.push_back(std::move(x));
    along_x1.values.push_back(std::move(a));
    if (cfg.dim == 2)
    {
      through[0] += ctx.params.v_g[0] * u.time();
      auto [y, b] = line_slice(u, 1, through);
      along_x2.times.push_back(u.time());
      along_x2.coordinates.push_back(std::move(y));
      along_x2.values.push_back(std::move(b));
    }
  };
  auto snapshot = [&](const ComplexField &u) {
    if (u.time() == 0.0 || u.time() + 0.5 * cfg.dt >= t_end)
    {
      write_text_file(dir / fmt::format("snapshot_t{:.2f}.csv", u.time()), snapshot_csv(u, stride));
    }
  };
  const RunResult run = run_single(ctx, eps, box, {capture, snapshot});

  write_text_file(dir / "series.csv", error_series_csv(run.series));
  write_text_file(dir / "slices_x1.svg", slices_svg(along_x1, "|u(x1, x2 = xi2, t)|"));
  if (cfg.dim == 2)
  {
    write_text_file(dir / "slices_x2.svg", slices_svg(along_x2, "|u(xi1 + v_g1 t, x2, t)|"));
  }
  fmt::print("eps = {}\nsteps = {}\nmax sup error = {:.6e}\nfinal sup error = {:.6e}\nwall time = {:.1f} s\n", eps,
             run.steps, run.max_error, run.final_error, run.wall_seconds);
  if (!run.failure.empty())
  {
    throw NanError(run.failure);
  }
  return 0;
}

int cmd_converge(const StudyConfig &cfg, const std::string &out, bool allow_large)
{
  const auto report = run_convergence(cfg, allow_large, say);
  const auto files = emit_report(report, out);
  fmt::print("{}", metadata_text(report));
  for (const auto &f : files)
  {
    fmt::print("wrote {}\n", f.string());
  }
  for (const auto &r : report.runs)
  {
    if (!r.failure.empty())
    {
      return 3;
    }
  }
  return 0;
}

int cmd_nonres(const StudyConfig &cfg, const std::optional<std::string> &out)
{
  if (cfg.model != ModelKind::NlwCheck)
  {
    throw ConfigError("nonres checks the wave model; set model.kind = nlw");
  }
  const BlochSolver solver(cfg.operator_spec());
  std::string text;
  int rc = 0;
  try
  {
    const auto r = check_nonresonance(solver, cfg.k0, cfg.n0, cfg.n_scan);
    text = fmt::format("omega0 = {:.12f}\nmargin = {:.6e}\nclosest band = {}\nharmonic = {}\ntail certified = {}\n"
                       "tail gap = {:.6e}\n",
                       r.omega0, r.margin, r.band, r.harmonic, r.tail_certified ? "yes" : "no", r.tail_gap);
  }
  catch (const ResonanceError &e)
  {
    text = fmt::format("resonant: {}\n", e.what());
    rc = 3;
  }
  fmt::print("{}", text);
  if (out)
  {
    write_text_file(prepare_dir(*out) / "nonres.txt", text);
  }
  return rc;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Bloch-wave envelope toolkit: bands, effective NLS coefficients, solitons and GP simulations"};
  app.require_subcommand(1);
  std::string config;
  auto add_config = [&](CLI::App *sub) { sub->add_option("--config", config, "study configuration file")->required(); };

  auto *bands = app.add_subcommand("bands", "band structure along a Brillouin-zone path");
  add_config(bands);
  std::string bands_out = "out";
  std::optional<std::string> bands_path;
  std::optional<int> bands_nmax;
  bands->add_option("--out", bands_out, "output directory, or a .csv file name");
  bands->add_option("--path", bands_path, "corner letters, e.g. GXMG");
  bands->add_option("--nmax", bands_nmax, "number of bands");

  auto *coeffs = app.add_subcommand("coeffs", "effective NLS coefficients of the configured carrier");
  add_config(coeffs);
  std::optional<std::string> coeffs_out;
  coeffs->add_option("--out", coeffs_out, "output directory");

  auto *soliton = app.add_subcommand("soliton", "radial ground state by shooting");
  add_config(soliton);
  std::string soliton_out = "out";
  bool canonical = false;
  double rho_max = 15.0;
  soliton->add_option("--out", soliton_out, "output directory");
  soliton->add_flag("--canonical", canonical, "alpha = 2, nu = 1 instead of the carrier's coefficients");
  soliton->add_option("--rho-max", rho_max, "profile extent in canonical units")->check(CLI::PositiveNumber);

  auto *simulate = app.add_subcommand("simulate", "one GP run against the wavepacket ansatz");
  add_config(simulate);
  std::string simulate_out = "out";
  double eps = 0.1;
  int slices = 5;
  int stride = 4;
  simulate->add_option("--out", simulate_out, "output directory");
  simulate->add_option("--eps", eps, "envelope scale")->required();
  simulate->add_option("--slices", slices, "number of slice times")->check(CLI::PositiveNumber);
  simulate->add_option("--stride", stride, "snapshot decimation")->check(CLI::PositiveNumber);

  auto *converge = app.add_subcommand("converge", "eps-convergence study");
  add_config(converge);
  std::string converge_out = "out";
  bool allow_large = false;
  converge->add_option("--out", converge_out, "output directory");
  converge->add_flag("--allow-large", allow_large, "permit grids above the desk-scale limit");

  auto *nonres = app.add_subcommand("nonres", "nonresonance margin of a wave-equation carrier");
  add_config(nonres);
  std::optional<std::string> nonres_out;
  nonres->add_option("--out", nonres_out, "output directory");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try
  {
    const StudyConfig cfg = load_study_config(config);
    if (bands->parsed())
    {
      return cmd_bands(cfg, bands_out, bands_path, bands_nmax);
    }
    if (coeffs->parsed())
    {
      return cmd_coeffs(cfg, coeffs_out);
    }
    if (soliton->parsed())
    {
      return cmd_soliton(cfg, soliton_out, canonical, rho_max);
    }
    if (simulate->parsed())
    {
      return cmd_simulate(cfg, simulate_out, eps, slices, stride);
    }
    if (converge->parsed())
    {
      return cmd_converge(cfg, converge_out, allow_large);
    }
    return cmd_nonres(cfg, nonres_out);
  }
  catch (const std::exception &e)
  {
    say(fmt::format("error: {}", e.what()));
    return exit_code_for(e);
  }
}
