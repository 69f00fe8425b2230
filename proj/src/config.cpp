#include "slve/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "slve/error.hpp"

namespace slve {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorKind::parse_error, "line " + std::to_string(line) + ": " + msg);
}

double to_double(std::string_view v, int line, std::string_view key) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    parse_fail(line, "key '" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
  return out;
}

int to_int(std::string_view v, int line, std::string_view key) {
  int out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    parse_fail(line, "key '" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'");
  return out;
}

std::vector<double> to_list(std::string_view v, int line, std::string_view key) {
  std::vector<double> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    const auto item = trim(v.substr(0, comma));
    if (item.empty()) parse_fail(line, "empty entry in list '" + std::string(key) + "'");
    out.push_back(to_double(item, line, key));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

template <class F>
auto enum_value(F parse, std::string_view v, int line) {
  try {
    return parse(v);
  } catch (const Error& e) {
    parse_fail(line, e.what());
  }
}

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::validation_error, msg); }

void require(bool ok, const std::string& msg) {
  if (!ok) invalid(msg);
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::dispersion: return "dispersion";
    case Command::twave: return "twave";
    case Command::audit: return "audit";
    case Command::energy: return "energy";
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  if (name == "simulate") return Command::simulate;
  if (name == "dispersion") return Command::dispersion;
  if (name == "twave") return Command::twave;
  if (name == "audit") return Command::audit;
  if (name == "energy") return Command::energy;
  throw Error(ErrorKind::parse_error, "unknown command '" + std::string(name) + "'");
}

RunConfig parse_config_unchecked(std::string_view text) {
  RunConfig cfg;
  using Setter = void (*)(RunConfig&, std::string_view, int, std::string_view);
  // section -> key -> setter
  static const std::map<std::string, std::map<std::string, Setter>, std::less<>> table = {
      {"",
       {{"command", [](RunConfig& c, std::string_view v, int l, std::string_view) {
          c.command = enum_value(parse_command, v, l);
        }}}},
      {"model",
       {{"variant", [](RunConfig& c, std::string_view v, int l, std::string_view) {
          c.model.variant = enum_value(parse_variant, v, l);
        }},
        {"nu", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.model.nu = to_double(v, l, k); }},
        {"gamma", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.model.gamma = to_double(v, l, k); }},
        {"rho", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.model.rho = to_double(v, l, k); }},
        {"mu", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.model.mu = to_double(v, l, k); }},
        {"length_scale", [](RunConfig& c, std::string_view v, int l, std::string_view k) {
           c.model.length_scale = to_double(v, l, k);
         }}}},
      {"constitutive",
       {{"kind", [](RunConfig& c, std::string_view v, int l, std::string_view) {
          c.kind = enum_value(parse_response_kind, v, l);
        }},
        {"beta", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.beta = to_double(v, l, k); }},
        {"a", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.a = to_double(v, l, k); }}}},
      {"grid",
       {{"length", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.length = to_double(v, l, k); }},
        {"n_cells", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.n_cells = to_int(v, l, k); }},
        {"boundary", [](RunConfig& c, std::string_view v, int l, std::string_view) {
           c.boundary = enum_value(parse_boundary, v, l);
         }},
        {"origin", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.origin = to_double(v, l, k); }}}},
      {"solver",
       {{"dt", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.dt = to_double(v, l, k); }},
        {"t_final", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.t_final = to_double(v, l, k); }},
        {"output_stride", [](RunConfig& c, std::string_view v, int l, std::string_view k) {
           c.output_stride = to_int(v, l, k);
         }},
        {"blowup_threshold", [](RunConfig& c, std::string_view v, int l, std::string_view k) {
           c.blowup_threshold = to_double(v, l, k);
         }}}},
      {"initial",
       {{"type", [](RunConfig& c, std::string_view v, int l, std::string_view) {
          if (v == "zero") c.initial.kind = InitialKind::zero;
          else if (v == "gaussian_bump") c.initial.kind = InitialKind::gaussian_bump;
          else if (v == "single_mode") c.initial.kind = InitialKind::single_mode;
          else parse_fail(l, "unknown initial type '" + std::string(v) + "'");
        }},
        {"center", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.initial.center = to_double(v, l, k); }},
        {"width", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.initial.width = to_double(v, l, k); }},
        {"amplitude", [](RunConfig& c, std::string_view v, int l, std::string_view k) {
           c.initial.amplitude = to_double(v, l, k);
         }},
        {"k", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.initial.k = to_double(v, l, k); }}}},
      {"dispersion",
       {{"k", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.k_values = to_list(v, l, k); }}}},
      {"twave",
       {{"T_minus", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.T_minus = to_double(v, l, k); }},
        {"T_plus", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.T_plus = to_double(v, l, k); }},
        {"xi_min", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.xi_min = to_double(v, l, k); }},
        {"xi_max", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.xi_max = to_double(v, l, k); }},
        {"n_samples", [](RunConfig& c, std::string_view v, int l, std::string_view k) { c.n_samples = to_int(v, l, k); }}}},
      {"output",
       {{"directory", [](RunConfig& c, std::string_view v, int, std::string_view) { c.out_dir = std::string(v); }},
        {"format", [](RunConfig& c, std::string_view v, int l, std::string_view) {
           if (v == "csv") c.format = OutputFormat::csv;
           else if (v == "json") c.format = OutputFormat::json;
           else parse_fail(l, "unknown output format '" + std::string(v) + "'");
         }}}},
  };

  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!table.contains(section)) parse_fail(line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_fail(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(line_no, "missing key");
    if (value.empty()) parse_fail(line_no, "missing value for key '" + std::string(key) + "'");
    const auto& keys = table.find(section)->second;
    const auto it = keys.find(std::string(key));
    if (it == keys.end())
      parse_fail(line_no, "unknown key '" + std::string(key) + "'" +
                              (section.empty() ? std::string() : " in section [" + section + "]"));
    it->second(cfg, value, line_no, key);
  }
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  try {
    cfg.model.validate();
  } catch (const Error& e) {
    invalid(e.what());
  }
  require(cfg.beta > 0.0 && std::isfinite(cfg.beta), "constitutive.beta must be positive");
  if (cfg.kind == ResponseKind::saturating)
    require(cfg.a > 0.0 && std::isfinite(cfg.a), "constitutive.a must be positive for the saturating kind");
  require(cfg.kind != ResponseKind::custom, "constitutive.kind = custom is only available through the library");

  switch (cfg.command) {
    case Command::dispersion:
      require(cfg.model.variant != Variant::elastic,
              "dispersion needs variant stress_rate or strain_rate");
      require(!cfg.k_values.empty(), "dispersion.k must list at least one wavenumber");
      for (double k : cfg.k_values) require(k >= 0.0 && std::isfinite(k), "dispersion.k entries must be >= 0");
      break;
    case Command::twave: {
      require(cfg.model.variant != Variant::elastic,
              "twave needs variant stress_rate or strain_rate (kappa = 0 is singular)");
      require(cfg.T_minus != cfg.T_plus, "twave.T_minus and twave.T_plus must differ");
      require(cfg.xi_min < 0.0 && cfg.xi_max > 0.0, "twave span must contain xi = 0");
      require(cfg.n_samples >= 2, "twave.n_samples must be >= 2");
      const auto f = response(cfg);
      require(f.strictly_increasing_on(std::min(cfg.T_minus, cfg.T_plus), std::max(cfg.T_minus, cfg.T_plus)),
              "response must be strictly increasing between the equilibria");
      break;
    }
    case Command::simulate:
    case Command::energy:
    case Command::audit: {
      require(cfg.length > 0.0 && std::isfinite(cfg.length), "grid.length must be positive");
      require(cfg.n_cells >= 4, "grid.n_cells must be >= 4");
      require(cfg.output_stride >= 1, "solver.output_stride must be >= 1");
      require(cfg.t_final > 0.0, "solver.t_final must be positive");
      require(cfg.dt > 0.0, "solver.dt must be positive");
      require(cfg.blowup_threshold > 0.0, "solver.blowup_threshold must be positive");
      if (cfg.initial.kind == InitialKind::gaussian_bump)
        require(cfg.initial.width > 0.0, "initial.width must be positive");
      if (cfg.initial.kind == InitialKind::single_mode)
        require(cfg.initial.k > 0.0, "initial.k must be positive");
      const Grid1D grid(cfg.length, cfg.n_cells, cfg.boundary, cfg.origin);
      SolverConfig sc;
      sc.dt = cfg.dt;
      sc.t_final = cfg.t_final;
      sc.output_stride = cfg.output_stride;
      sc.model = material_model(cfg);
      try {
        sc.validate(grid);
      } catch (const Error& e) {
        invalid(e.what());
      }
      break;
    }
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg = parse_config_unchecked(text);
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, bool validate) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_config_unchecked(ss.str());
  if (validate) validate_config(cfg);
  return cfg;
}

ConstitutiveFunction response(const RunConfig& cfg) {
  return make_constitutive(cfg.kind, cfg.beta, cfg.a);
}

MaterialModel material_model(const RunConfig& cfg) {
  const NondimScales s = nondimensionalize(cfg.model);
  MaterialModel m;
  m.variant = cfg.model.variant;
  m.rho = 1.0;
  m.nu = cfg.model.variant == Variant::strain_rate ? s.nu_bar : 0.0;
  m.gamma = cfg.model.variant == Variant::stress_rate ? s.gamma_bar : 0.0;
  m.response = response(cfg);
  return m;
}

}  // namespace slve
