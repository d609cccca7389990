// SPDX-License-Identifier: Apache-2.0
#include "blochnls/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "blochnls/errors.hpp"

namespace blochnls
{

namespace
{

const std::vector<std::string> palette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string &s)
{
  std::string out;
  for (char c : s)
  {
    switch (c)
    {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

struct Axis
{
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;
  double pixel_lo = 0.0;
  double pixel_hi = 1.0;

  double value(double v) const { return log ? std::log10(v) : v; }
  double map(double v) const { return pixel_lo + (value(v) - lo) / (hi - lo) * (pixel_hi - pixel_lo); }
};

Axis make_axis(const std::vector<PlotSeries> &series, bool use_x, bool log, double pixel_lo, double pixel_hi)
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto &s : series)
  {
    for (double v : use_x ? s.x : s.y)
    {
      if (!std::isfinite(v) || (log && v <= 0.0))
      {
        continue;
      }
      const double w = log ? std::log10(v) : v;
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
  }
  if (!(lo <= hi))
  {
    throw DomainError("nothing to plot");
  }
  if (hi - lo < 1e-12)
  {
    lo -= 0.5;
    hi += 0.5;
  }
  else if (!use_x || log)
  {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, log, pixel_lo, pixel_hi};
}

// Tick values in data units.
std::vector<double> ticks(const Axis &a)
{
  std::vector<double> out;
  if (a.log)
  {
    for (int e = static_cast<int>(std::ceil(a.lo)); e <= static_cast<int>(std::floor(a.hi)); ++e)
    {
      out.push_back(std::pow(10.0, e));
    }
    if (out.size() < 2)
    {
      out = {std::pow(10.0, a.lo), std::pow(10.0, a.hi)};
    }
    return out;
  }
  const double raw = (a.hi - a.lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
  {
    if (m * mag >= raw)
    {
      step = m * mag;
      break;
    }
  }
  for (double v = std::ceil(a.lo / step) * step; v <= a.hi + 1e-9 * step; v += step)
  {
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return out;
}

std::string tick_label(double v, bool log)
{
  if (log)
  {
    return fmt::format("{:.3g}", v);
  }
  return fmt::format("{:g}", v);
}

}  // namespace

std::string render_svg(const PlotOptions &o, const std::vector<PlotSeries> &series)
{
  const double left = 70.0;
  const double right = o.width - 20.0;
  const double top = 40.0;
  const double bottom = o.height - 50.0;
  const Axis ax = make_axis(series, true, o.log_x, left, right);
  const Axis ay = make_axis(series, false, o.log_y, bottom, top);

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      o.width, o.height);
  svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", o.width, o.height);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     0.5 * (left + right), escape(o.title));
  svg += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
                     "stroke=\"black\"/>\n",
                     left, top, right - left, bottom - top);

  if (o.x_ticks.empty())
  {
    for (double v : ticks(ax))
    {
      const double px = ax.map(v);
      svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n", px,
                         bottom, bottom + 5.0);
      svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", px, bottom + 18.0,
                         tick_label(v, ax.log));
    }
  }
  else
  {
    for (const auto &[v, label] : o.x_ticks)
    {
      const double px = ax.map(v);
      svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"#bbbbbb\"/>\n",
                         px, top, bottom);
      svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", px, bottom + 18.0,
                         escape(label));
    }
  }
  for (double v : ticks(ay))
  {
    const double py = ay.map(v);
    svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"black\"/>\n",
                       left - 5.0, py, left);
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", left - 8.0, py + 4.0,
                       tick_label(v, ay.log));
  }
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", 0.5 * (left + right),
                     o.height - 12.0, escape(o.x_label));
  svg += fmt::format("<text x=\"16\" y=\"{0:.1f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.1f})\">{1}"
                     "</text>\n",
                     0.5 * (top + bottom), escape(o.y_label));

  svg += fmt::format("<clipPath id=\"frame\"><rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\"/>"
                     "</clipPath>\n",
                     left, top, right - left, bottom - top);
  int legend_row = 0;
  for (const auto &s : series)
  {
    std::string points;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
    {
      if ((o.log_x && s.x[i] <= 0.0) || (o.log_y && s.y[i] <= 0.0) || !std::isfinite(s.y[i]))
      {
        continue;
      }
      points += fmt::format("{:.2f},{:.2f} ", ax.map(s.x[i]), ay.map(s.y[i]));
    }
    if (!points.empty())
    {
      points.pop_back();
    }
    if (s.markers)
    {
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      {
        if ((o.log_x && s.x[i] <= 0.0) || (o.log_y && s.y[i] <= 0.0))
        {
          continue;
        }
        svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"{}\"/>\n", ax.map(s.x[i]),
                           ay.map(s.y[i]), s.color);
      }
    }
    else
    {
      svg += fmt::format("<polyline clip-path=\"url(#frame)\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{} "
                         "points=\"{}\"/>\n",
                         s.color, s.dashed ? " stroke-dasharray=\"6 4\"" : "", points);
    }
    if (!s.label.empty())
    {
      const double ly = top + 16.0 + 16.0 * legend_row++;
      svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"{3}\" "
                         "stroke-width=\"2\"/>\n",
                         right - 150.0, ly - 4.0, right - 130.0, s.color);
      svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", right - 124.0, ly, escape(s.label));
    }
  }
  for (std::size_t i = 0; i < o.notes.size(); ++i)
  {
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", left + 10.0, top + 18.0 + 16.0 * i,
                       escape(o.notes[i]));
  }
  svg += "</svg>\n";
  return svg;
}

std::string slope_annotation(const SlopeFit &fit)
{
  return "slope = " + format_slope(fit.slope);
}

std::string convergence_svg(const ConvergenceReport &report)
{
  PlotSeries data;
  PlotSeries fitted;
  for (std::size_t i = 0; i < report.eps_list.size(); ++i)
  {
    if (report.max_errors[i] > 0.0)
    {
      data.x.push_back(report.eps_list[i]);
      data.y.push_back(report.max_errors[i]);
    }
  }
  data.markers = true;
  data.label = "max sup error";
  const auto [lo, hi] = std::minmax_element(report.eps_list.begin(), report.eps_list.end());
  for (double e : {*lo, *hi})
  {
    fitted.x.push_back(e);
    fitted.y.push_back(std::exp(report.fit.intercept) * std::pow(e, report.fit.slope));
  }
  fitted.color = palette[1];
  fitted.dashed = true;
  fitted.label = "least-squares fit";
  PlotOptions o;
  o.title = "sup-norm error of the wavepacket approximation";
  o.x_label = "eps";
  o.y_label = "max over t of sup |u - u_app|";
  o.log_x = true;
  o.log_y = true;
  o.notes = {slope_annotation(report.fit)};
  return render_svg(o, {data, fitted});
}

std::string band_svg(const BandTable &table)
{
  std::vector<double> x = table.arc;
  if (x.empty())
  {
    for (std::size_t i = 0; i < table.k.size(); ++i)
    {
      x.push_back(static_cast<double>(i));
    }
  }
  std::vector<PlotSeries> series;
  for (int n = 0; n < table.bands.cols(); ++n)
  {
    PlotSeries s;
    s.x = x;
    s.y.assign(table.bands.col(n).data(), table.bands.col(n).data() + table.bands.rows());
    s.color = palette[static_cast<std::size_t>(n) % palette.size()];
    series.push_back(std::move(s));
  }
  PlotOptions o;
  o.title = "band structure";
  o.x_label = "k";
  o.y_label = "lambda_n(k)";
  o.x_ticks = table.ticks;
  return render_svg(o, series);
}

std::string profile_svg(const RadialProfile &profile, double r_show)
{
  PlotSeries s;
  const double r_end = std::min(r_show, profile.r_max());
  for (double r : profile.r())
  {
    if (r > r_end)
    {
      break;
    }
    s.x.push_back(r);
    s.y.push_back(profile(r));
  }
  PlotOptions o;
  o.title = "radial ground state";
  o.x_label = "r";
  o.y_label = "R(r)";
  o.notes = {fmt::format("R(0) = {:.8f}", profile.amplitude()),
             fmt::format("alpha = {:.6f}, nu = {:.6f}", profile.alpha(), profile.nu())};
  return render_svg(o, {s});
}

std::string slices_svg(const SliceSet &slices, const std::string &title)
{
  std::vector<PlotSeries> series;
  for (std::size_t i = 0; i < slices.times.size(); ++i)
  {
    PlotSeries s;
    s.x = slices.coordinates[i];
    s.y = slices.values[i];
    s.label = fmt::format("t = {:g}", slices.times[i]);
    s.color = palette[i % palette.size()];
    series.push_back(std::move(s));
  }
  PlotOptions o;
  o.title = title;
  o.x_label = slices.axis_label;
  o.y_label = "|u|";
  o.width = 900;
  return render_svg(o, series);
}

}  // namespace blochnls
