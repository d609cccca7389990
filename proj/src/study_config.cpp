// SPDX-License-Identifier: Apache-2.0
#include "blochnls/study_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "blochnls/errors.hpp"

namespace blochnls
{

namespace
{

namespace pt = boost::property_tree;

std::vector<std::string> split_words(const std::string &s)
{
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w)
  {
    out.push_back(w);
  }
  return out;
}

double to_double(const std::string &s, const std::string &what)
{
  try
  {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
    {
      throw std::invalid_argument(s);
    }
    return v;
  }
  catch (const std::exception &)
  {
    throw ConfigError(fmt::format("{}: '{}' is not a number", what, s));
  }
}

int to_int(const std::string &s, const std::string &what)
{
  const double v = to_double(s, what);
  if (v != std::round(v))
  {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", what, s));
  }
  return static_cast<int>(v);
}

std::vector<double> number_list(const std::string &s, const std::string &what)
{
  std::vector<double> out;
  for (const auto &w : split_words(s))
  {
    out.push_back(to_double(w, what));
  }
  return out;
}

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Typed access with the key path in error messages.
class Reader
{
public:
  explicit Reader(const pt::ptree &tree) : tree_(tree) {}

  std::optional<std::string> text(const std::string &key) const
  {
    auto v = tree_.get_optional<std::string>(key);
    if (!v)
    {
      return std::nullopt;
    }
    return *v;
  }
  std::string text(const std::string &key, const std::string &fallback) const { return text(key).value_or(fallback); }
  double number(const std::string &key, double fallback) const
  {
    const auto v = text(key);
    return v ? to_double(*v, key) : fallback;
  }
  int integer(const std::string &key, int fallback) const
  {
    const auto v = text(key);
    return v ? to_int(*v, key) : fallback;
  }

private:
  const pt::ptree &tree_;
};

}  // namespace

PeriodicCoefficients parse_coefficient(const std::string &text, int dim)
{
  const auto words = split_words(text);
  if (words.empty())
  {
    throw ConfigError("empty coefficient definition");
  }
  const std::string form = lower(words[0]);
  if (form == "constant")
  {
    if (words.size() != 2)
    {
      throw ConfigError("'constant' takes one value");
    }
    return PeriodicCoefficients::constant(dim, to_double(words[1], "constant"));
  }
  if (form == "cosprod")
  {
    if (words.size() < 2 || words.size() > 3)
    {
      throw ConfigError("'cosprod' takes an amplitude and an optional offset");
    }
    const double amplitude = to_double(words[1], "cosprod amplitude");
    const double offset = words.size() == 3 ? to_double(words[2], "cosprod offset") : 0.0;
    return PeriodicCoefficients::cosine_product(dim, amplitude, offset);
  }
  if (form == "fourier")
  {
    std::vector<FourierMode> modes;
    for (std::size_t w = 1; w < words.size(); ++w)
    {
      const std::string &tok = words[w];
      const auto colon = tok.find(':');
      if (colon == std::string::npos)
      {
        throw ConfigError(fmt::format("Fourier mode '{}' must look like m1,m2:re[:im]", tok));
      }
      FourierMode m;
      std::stringstream idx(tok.substr(0, colon));
      std::string part;
      while (std::getline(idx, part, ','))
      {
        m.index.push_back(to_int(part, "Fourier index"));
      }
      if (static_cast<int>(m.index.size()) != dim)
      {
        throw ConfigError(fmt::format("Fourier mode '{}' needs {} indices", tok, dim));
      }
      const std::string value = tok.substr(colon + 1);
      const auto colon2 = value.find(':');
      const double re = to_double(value.substr(0, colon2), "Fourier coefficient");
      const double im = colon2 == std::string::npos ? 0.0 : to_double(value.substr(colon2 + 1), "Fourier coefficient");
      m.value = cplx(re, im);
      modes.push_back(std::move(m));
    }
    if (modes.empty())
    {
      throw ConfigError("'fourier' needs at least one mode");
    }
    return PeriodicCoefficients::from_modes(dim, modes);
  }
  throw ConfigError(fmt::format("unknown coefficient form '{}' (use constant, cosprod or fourier)", words[0]));
}

const PeriodicCoefficients &StudyConfig::coefficient(const std::string &name) const
{
  const auto it = coefficients.find(name);
  if (it == coefficients.end())
  {
    throw ConfigError(fmt::format("coefficient '{}' is not defined in [coefficients]", name));
  }
  return it->second;
}

BlochOperatorSpec StudyConfig::operator_spec() const
{
  if (model == ModelKind::Gp)
  {
    return BlochOperatorSpec::schrodinger(coefficient("V"), truncation);
  }
  return BlochOperatorSpec::wave(coefficient("chi1"), coefficient("chi2"), truncation);
}

Nonlinearity StudyConfig::nonlinearity() const
{
  if (model == ModelKind::Gp)
  {
    return GpNonlinearity{coefficient("sigma")};
  }
  return WaveNonlinearity{coefficient("chi3")};
}

StudyConfig parse_study_config(std::istream &in)
{
  pt::ptree tree;
  try
  {
    pt::read_ini(in, tree);
  }
  catch (const pt::ini_parser_error &e)
  {
    throw ConfigError(fmt::format("configuration syntax error: {}", e.what()));
  }
  const Reader r(tree);
  StudyConfig c;

  const std::string kind = lower(r.text("model.kind", "gp"));
  if (kind == "gp")
  {
    c.model = ModelKind::Gp;
  }
  else if (kind == "nlw" || kind == "nlw-check")
  {
    c.model = ModelKind::NlwCheck;
  }
  else
  {
    throw ConfigError(fmt::format("model.kind must be gp or nlw (got '{}')", kind));
  }
  c.dim = r.integer("model.dim", 2);
  if (c.dim < 1 || c.dim > 2)
  {
    throw ConfigError(fmt::format("model.dim must be 1 or 2 (got {})", c.dim));
  }

  if (const auto sec = tree.get_child_optional("coefficients"))
  {
    for (const auto &[name, node] : *sec)
    {
      c.coefficients.emplace(name, parse_coefficient(node.get_value<std::string>(), c.dim));
    }
  }
  const std::vector<std::string> needed =
      c.model == ModelKind::Gp ? std::vector<std::string>{"V", "sigma"} : std::vector<std::string>{"chi1", "chi2", "chi3"};
  for (const auto &n : needed)
  {
    (void)c.coefficient(n);
  }

  const auto k0 = number_list(r.text("carrier.k0", ""), "carrier.k0");
  if (static_cast<int>(k0.size()) != c.dim)
  {
    throw ConfigError(fmt::format("carrier.k0 needs {} components", c.dim));
  }
  c.k0 = Eigen::Map<const RealVector>(k0.data(), c.dim);
  for (double k : k0)
  {
    if (k <= -0.5 || k > 0.5)
    {
      throw ConfigError(fmt::format("carrier.k0 component {} lies outside (-1/2, 1/2]", k));
    }
  }
  c.n0 = r.integer("carrier.n0", 1);
  if (c.n0 < 1)
  {
    throw ConfigError("carrier.n0 must be >= 1");
  }

  c.truncation = r.integer("discretization.truncation", c.truncation);
  c.cell_points = r.integer("discretization.cell_points", c.cell_points);
  c.dt = r.number("discretization.dt", c.dt);
  const std::string planning = lower(r.text("discretization.fft_planning", "estimate"));
  if (planning != "estimate" && planning != "measure")
  {
    throw ConfigError(fmt::format("discretization.fft_planning must be estimate or measure (got '{}')", planning));
  }
  c.fft_planning = planning == "measure" ? FftPlanning::Measure : FftPlanning::Estimate;
  if (c.truncation < 1 || c.cell_points < 4 || c.cell_points % 2 != 0 || !(c.dt > 0.0))
  {
    throw ConfigError("discretization needs truncation >= 1, even cell_points >= 4 and dt > 0");
  }

  c.eps_list = number_list(r.text("study.eps", "0.3 0.2 0.1"), "study.eps");
  for (std::size_t i = 0; i < c.eps_list.size(); ++i)
  {
    const double e = c.eps_list[i];
    if (!(e > 0.0 && e < 1.0))
    {
      throw ConfigError(fmt::format("study.eps value {} is not in (0, 1)", e));
    }
    if (i > 0 && !(e < c.eps_list[i - 1]))
    {
      throw ConfigError("study.eps must be strictly decreasing");
    }
  }
  const auto box = split_words(r.text("study.box", "scaled 1.0"));
  if (box.empty() || (lower(box[0]) != "paper" && lower(box[0]) != "scaled"))
  {
    throw ConfigError("study.box must be 'paper' or 'scaled <factor>'");
  }
  if (lower(box[0]) == "paper")
  {
    c.box.kind = BoxPolicy::Kind::Paper;
  }
  else
  {
    c.box.kind = BoxPolicy::Kind::Scaled;
    c.box.factor = box.size() > 1 ? to_double(box[1], "study.box") : 1.0;
    if (!(c.box.factor > 0.0))
    {
      throw ConfigError("scaled box factor must be positive");
    }
  }
  const auto tend = split_words(r.text("study.t_end", "one_over_eps2"));
  if (tend.empty())
  {
    throw ConfigError("study.t_end is empty");
  }
  if (lower(tend[0]) == "one_over_eps2")
  {
    c.t_end.one_over_eps2 = true;
    c.t_end.value = tend.size() > 1 ? to_double(tend[1], "study.t_end") : 1.0;
  }
  else if (lower(tend[0]) == "fixed" && tend.size() == 2)
  {
    c.t_end.one_over_eps2 = false;
    c.t_end.value = to_double(tend[1], "study.t_end");
  }
  else
  {
    throw ConfigError("study.t_end must be 'one_over_eps2 [T0]' or 'fixed <T>'");
  }
  if (!(c.t_end.value > 0.0))
  {
    throw ConfigError("study.t_end must be positive");
  }
  c.record_every = r.integer("study.record_every", c.record_every);
  if (c.record_every < 1)
  {
    throw ConfigError("study.record_every must be >= 1");
  }
  const auto center = number_list(r.text("study.center", ""), "study.center");
  c.center = RealVector::Zero(c.dim);
  if (!center.empty())
  {
    if (static_cast<int>(center.size()) != c.dim)
    {
      throw ConfigError(fmt::format("study.center needs {} components", c.dim));
    }
    c.center = Eigen::Map<const RealVector>(center.data(), c.dim);
  }
  c.rho_max = r.number("study.rho_max", c.rho_max);
  c.rho_cut = r.number("study.rho_cut", c.rho_cut);
  c.workers = r.integer("study.workers", c.workers);

  c.k_path = r.text("bands.path", c.k_path);
  c.path_points = r.integer("bands.points_per_segment", c.path_points);
  c.n_bands = r.integer("bands.nmax", c.n_bands);
  c.n_scan = r.integer("nonresonance.n_scan", c.n_scan);
  c.output_dir = r.text("output.dir", c.output_dir);
  return c;
}

StudyConfig load_study_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError(fmt::format("cannot open configuration file '{}'", path));
  }
  return parse_study_config(in);
}

}  // namespace blochnls
