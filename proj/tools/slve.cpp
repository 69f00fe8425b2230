#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "slve/config.hpp"
#include "slve/error.hpp"
#include "slve/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stress-relaxation and strain-rate viscoelastic wave solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<double> nu, gamma, k, t_final;
  std::optional<std::string> out_dir, format;

  for (const char* name : {"simulate", "dispersion", "twave", "audit", "energy"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_path, "INI configuration file")->required();
    sub->add_option("--nu", nu, "dimensional strain-rate coefficient");
    sub->add_option("--gamma", gamma, "dimensional stress-rate coefficient");
    sub->add_option("--k", k, "single wavenumber (dispersion)");
    sub->add_option("--t-final", t_final, "dimensionless final time");
    sub->add_option("-o,--out", out_dir, "output directory");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  slve::RunConfig cfg;
  try {
    cfg = slve::load_config(config_path, false);
    cfg.command = slve::parse_command(command);
    if (nu) cfg.model.nu = *nu;
    if (gamma) cfg.model.gamma = *gamma;
    if (k) cfg.k_values = {*k};
    if (t_final) cfg.t_final = *t_final;
    if (out_dir) cfg.out_dir = *out_dir;
    if (format) cfg.format = *format == "json" ? slve::OutputFormat::json : slve::OutputFormat::csv;
  } catch (const slve::Error& e) {
    std::cerr << "slve: " << e.what() << '\n';
    return e.kind() == slve::ErrorKind::io_error ? slve::exit_error : slve::exit_config;
  }

  const slve::RunOutcome out = slve::run(cfg);
  std::cout << out.record << '\n';
  if (out.exit_code != slve::exit_ok) std::cerr << "slve: " << out.message << '\n';
  return out.exit_code;
}
