// SPDX-License-Identifier: Apache-2.0
#include "blochnls/report.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "blochnls/errors.hpp"
#include "blochnls/svg_plot.hpp"

namespace blochnls
{

namespace
{

std::string num(double v)
{
  return fmt::format("{:.17g}", v);
}

std::vector<double> as_std(const Eigen::VectorXd &v)
{
  return {v.data(), v.data() + v.size()};
}

std::vector<std::vector<double>> as_rows(const Eigen::MatrixXd &m)
{
  std::vector<std::vector<double>> rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
  {
    rows.push_back(as_std(m.row(i).transpose()));
  }
  return rows;
}

}  // namespace

std::string band_csv(const BandTable &table)
{
  const auto d = table.k.empty() ? 0 : table.k.front().size();
  std::string out;
  for (Eigen::Index j = 0; j < d; ++j)
  {
    out += fmt::format("k_{},", j + 1);
  }
  if (!table.arc.empty())
  {
    out += "arc,";
  }
  for (int n = 1; n <= table.bands.cols(); ++n)
  {
    out += fmt::format("lambda_{}{}", n, n == table.bands.cols() ? "\n" : ",");
  }
  for (std::size_t i = 0; i < table.k.size(); ++i)
  {
    for (Eigen::Index j = 0; j < d; ++j)
    {
      out += num(table.k[i][j]) + ",";
    }
    if (!table.arc.empty())
    {
      out += num(table.arc[i]) + ",";
    }
    for (Eigen::Index n = 0; n < table.bands.cols(); ++n)
    {
      out += num(table.bands(static_cast<Eigen::Index>(i), n)) + (n + 1 == table.bands.cols() ? "\n" : ",");
    }
  }
  return out;
}

std::string convergence_csv(const ConvergenceReport &report)
{
  std::string out = "eps,max_error,final_error\n";
  for (std::size_t i = 0; i < report.eps_list.size(); ++i)
  {
    out += fmt::format("{},{},{}\n", num(report.eps_list[i]), num(report.max_errors[i]), num(report.final_errors[i]));
  }
  return out;
}

std::string error_series_csv(const ErrorSeries &s)
{
  const std::size_t d = s.peak.empty() ? 0 : s.peak.front().size();
  std::string out = "t,sup_error,mass";
  for (std::size_t j = 0; j < d; ++j)
  {
    out += fmt::format(",peak_x{}", j + 1);
  }
  out += "\n";
  for (std::size_t i = 0; i < s.times.size(); ++i)
  {
    out += fmt::format("{},{},{}", num(s.times[i]), num(s.sup_error[i]), num(s.mass[i]));
    for (std::size_t j = 0; j < d; ++j)
    {
      out += "," + num(s.peak[i][j]);
    }
    out += "\n";
  }
  return out;
}

std::string profile_csv(const RadialProfile &profile)
{
  std::string out = "r,R,dR\n";
  for (std::size_t i = 0; i < profile.r().size(); ++i)
  {
    out += fmt::format("{},{},{}\n", num(profile.r()[i]), num(profile.values()[i]), num(profile.slopes()[i]));
  }
  return out;
}

std::string snapshot_csv(const ComplexField &u, int stride)
{
  if (stride < 1)
  {
    throw DomainError("snapshot stride must be >= 1");
  }
  const Lattice &lat = u.lattice();
  std::string out = fmt::format("# t = {}\n# dx = {}\n# stride = {}\n", num(u.time()), num(lat.spacing()), stride);
  for (int j = 0; j < lat.dim(); ++j)
  {
    out += fmt::format("# box_x{} = [{}, {})\n", j + 1, num(u.offset()[static_cast<std::size_t>(j)]),
                       num(u.offset()[static_cast<std::size_t>(j)] + lat.box_length(j)));
  }
  for (int j = 0; j < lat.dim(); ++j)
  {
    out += fmt::format("x{},", j + 1);
  }
  out += "abs_u\n";
  const Shape shape = lat.box_shape();
  std::vector<int> idx(static_cast<std::size_t>(lat.dim()));
  for (std::size_t f = 0; f < shape.size(); ++f)
  {
    shape.unflatten(f, idx);
    if (std::any_of(idx.begin(), idx.end(), [stride](int i) { return i % stride != 0; }))
    {
      continue;
    }
    for (int j = 0; j < lat.dim(); ++j)
    {
      out += num(u.coordinate(j, idx[static_cast<std::size_t>(j)])) + ",";
    }
    out += num(std::abs(u[f])) + "\n";
  }
  return out;
}

std::string params_text(const EffectiveNlsParams &p)
{
  const auto &dv = p.derivatives;
  std::string out;
  out += fmt::format("{:<26}{}\n", "band (size-ordered)", p.mode.band);
  out += fmt::format("{:<26}({:.6f})\n", "k0", fmt::join(as_std(p.mode.k), ", "));
  out += fmt::format("{:<26}{:.10f}\n", "lambda0", dv.lam);
  out += fmt::format("{:<26}{:.10f}\n", "omega0", p.omega0);
  out += fmt::format("{:<26}({:.10f})\n", "v_g", fmt::join(as_std(p.v_g), ", "));
  for (Eigen::Index i = 0; i < p.hessian.rows(); ++i)
  {
    out += fmt::format("{:<26}[{:.10f}]\n", i == 0 ? "D2omega" : "", fmt::join(as_std(p.hessian.row(i).transpose()), ", "));
  }
  out += fmt::format("{:<26}{:.10f}\n", "alpha = tr(D2omega)/d", p.mean_curvature());
  out += fmt::format("{:<26}{:.3e}\n", "isotropy defect", p.isotropy_defect);
  out += fmt::format("{:<26}{:.10f}\n", "nu", p.nu);
  out += fmt::format("{:<26}({:.6e})\n", "grad(lambda) analytic", fmt::join(as_std(dv.gradient_analytic), ", "));
  out += fmt::format("{:<26}{:.3e}\n", "gradient FD vs analytic", dv.gradient_mismatch);
  out += fmt::format("{:<26}{:.3e}\n", "Hessian FD vs analytic", dv.hessian_mismatch);
  out += fmt::format("{:<26}{:.3e}\n", "relative band gap", dv.min_relative_gap);
  out += fmt::format("{:<26}{}\n", "band evaluations", dv.evaluations);
  return out;
}

std::string params_json(const EffectiveNlsParams &p)
{
  nlohmann::ordered_json j;
  j["band"] = p.mode.band;
  j["k0"] = as_std(p.mode.k);
  j["lambda0"] = p.derivatives.lam;
  j["omega0"] = p.omega0;
  j["v_g"] = as_std(p.v_g);
  j["hessian"] = as_rows(p.hessian);
  j["alpha"] = p.mean_curvature();
  j["isotropy_defect"] = p.isotropy_defect;
  j["nu"] = p.nu;
  j["checks"] = {{"gradient_mismatch", p.derivatives.gradient_mismatch},
                 {"hessian_mismatch", p.derivatives.hessian_mismatch},
                 {"gradient_refinement", p.derivatives.gradient_refinement},
                 {"hessian_refinement", p.derivatives.hessian_refinement},
                 {"min_relative_gap", p.derivatives.min_relative_gap}};
  return j.dump(2) + "\n";
}

std::string metadata_text(const ConvergenceReport &r)
{
  std::string out;
  out += fmt::format("omega0 = {}\n", num(r.params.omega0));
  out += fmt::format("v_g = {}\n", fmt::join(as_std(r.params.v_g), " "));
  out += fmt::format("alpha = {}\n", num(r.alpha));
  out += fmt::format("nu = {}\n", num(r.params.nu));
  out += fmt::format("R(0) = {}\n", num(r.profile_amplitude));
  out += fmt::format("dt = {}\n", num(r.dt));
  out += fmt::format("slope (max over t) = {}\n", format_slope(r.fit.slope));
  out += fmt::format("fit residual = {}\n", num(r.fit.residual));
  if (r.final_fit)
  {
    out += fmt::format("slope (final time) = {}\n", format_slope(r.final_fit->slope));
  }
  for (const auto &run : r.runs)
  {
    out += fmt::format("run eps = {}: t_end = {}, steps = {}, cells = {}, points per cell = {}, wall = {:.1f} s{}\n",
                       num(run.eps), num(run.t_end), run.steps, fmt::join(run.num_cells, "x"), run.cell_points,
                       run.wall_seconds, run.failure.empty() ? "" : ", failed: " + run.failure);
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> line_slice(const ComplexField &u, int axis,
                                                               const std::vector<double> &through)
{
  const Lattice &lat = u.lattice();
  if (axis < 0 || axis >= lat.dim() || static_cast<int>(through.size()) != lat.dim())
  {
    throw ShapeError("slice axis or point does not match the field dimension");
  }
  std::vector<int> idx(static_cast<std::size_t>(lat.dim()));
  for (int j = 0; j < lat.dim(); ++j)
  {
    const auto n = lat.box_points(j);
    const double rel = (through[static_cast<std::size_t>(j)] - u.offset()[static_cast<std::size_t>(j)]) / lat.spacing();
    idx[static_cast<std::size_t>(j)] = ((static_cast<int>(std::lround(rel)) % n) + n) % n;
  }
  std::vector<double> coords;
  std::vector<double> values;
  const Shape shape = lat.box_shape();
  for (int i = 0; i < lat.box_points(axis); ++i)
  {
    idx[static_cast<std::size_t>(axis)] = i;
    coords.push_back(u.coordinate(axis, i));
    values.push_back(std::abs(u[shape.flat(idx)]));
  }
  return {coords, values};
}

void write_text_file(const std::filesystem::path &path, const std::string &content)
{
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out)
  {
    throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  }
}

std::vector<std::filesystem::path> emit_report(const ConvergenceReport &report, const std::filesystem::path &dir)
{
  if (report.eps_list.empty())
  {
    throw DomainError("the report has no eps values");
  }
  if (report.max_errors.size() != report.eps_list.size() || report.final_errors.size() != report.eps_list.size())
  {
    throw ShapeError("report error lists do not match eps_list");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
  {
    throw std::runtime_error(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  }
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string &name, const std::string &content) {
    write_text_file(dir / name, content);
    written.push_back(dir / name);
  };
  put("convergence.csv", convergence_csv(report));
  put("convergence.svg", convergence_svg(report));
  put("metadata.txt", metadata_text(report));
  for (const auto &run : report.runs)
  {
    put(fmt::format("series_eps_{}.csv", run.eps), error_series_csv(run.series));
  }
  return written;
}

}  // namespace blochnls
