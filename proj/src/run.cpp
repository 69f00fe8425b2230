#include "slve/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include <json.hpp>

#include "slve/dispersion.hpp"
#include "slve/error.hpp"
#include "slve/pde.hpp"
#include "slve/twave.hpp"

namespace slve {

namespace {

using Row = std::vector<std::string>;

// Writes a table as CSV with a header row, or as JSON lines keyed by column.
// Cells that are not numbers are quoted in JSON.
class TableWriter {
 public:
  TableWriter(const std::filesystem::path& dir, const std::string& stem, OutputFormat fmt,
              std::vector<std::string> columns)
      : fmt_(fmt), columns_(std::move(columns)) {
    path_ = dir / (stem + (fmt == OutputFormat::csv ? ".csv" : ".jsonl"));
    out_.open(path_);
    if (!out_) throw Error(ErrorKind::io_error, "cannot write " + path_.string());
  }

  void comment(const std::string& json_object) {
    if (fmt_ == OutputFormat::csv) out_ << "# " << json_object << '\n';
    else out_ << json_object << '\n';
  }

  void header() {
    if (fmt_ != OutputFormat::csv) return;
    for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
    out_ << '\n';
  }

  void row(const Row& cells) {
    if (fmt_ == OutputFormat::csv) {
      for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    } else {
      out_ << '{';
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const bool numeric = is_number(cells[i]);
        out_ << (i ? "," : "") << '"' << columns_[i] << "\":" << (numeric ? "" : "\"") << cells[i]
             << (numeric ? "" : "\"");
      }
      out_ << '}';
    }
    out_ << '\n';
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  static bool is_number(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(v);
  }

  OutputFormat fmt_;
  std::vector<std::string> columns_;
  std::filesystem::path path_;
  std::ofstream out_;
};

SolverConfig solver_config(const RunConfig& cfg) {
  SolverConfig sc;
  sc.dt = cfg.dt;
  sc.t_final = cfg.t_final;
  sc.output_stride = cfg.output_stride;
  sc.model = material_model(cfg);
  sc.blowup_threshold = cfg.blowup_threshold;
  return sc;
}

Grid1D grid_of(const RunConfig& cfg) {
  return Grid1D(cfg.length, cfg.n_cells, cfg.boundary, cfg.origin);
}

void write_trajectory_rows(TableWriter& w, const SimState& s) {
  for (std::size_t i = 0; i < s.v.size(); ++i)
    w.row({format_number(s.t), format_number(s.v.grid().x(i)), format_number(s.v[i]),
           format_number(s.eps[i]), format_number(s.stress[i])});
}

void run_simulate(const RunConfig& cfg, RunOutcome& out) {
  const Grid1D grid = grid_of(cfg);
  const SolverConfig sc = solver_config(cfg);
  TableWriter w(cfg.out_dir, "trajectory", cfg.format, {"t", "x", "v", "eps", "T"});
  out.files.push_back(w.path());
  w.header();
  const auto steps = static_cast<long>(std::ceil(cfg.t_final / cfg.dt - 1e-9));
  simulate(make_initial_state(grid, cfg.initial, sc.model), sc, [&](const SimState& s, long n) {
    if (n % cfg.output_stride == 0 || n == steps) write_trajectory_rows(w, s);
  });
}

void run_energy(const RunConfig& cfg, RunOutcome& out) {
  const Grid1D grid = grid_of(cfg);
  const SolverConfig sc = solver_config(cfg);
  TableWriter w(cfg.out_dir, "energy", cfg.format,
                {"t", "kinetic", "internal", "total", "dissipation_rate", "balance_residual"});
  out.files.push_back(w.path());
  w.header();
  // Keep a sliding window of three strided states; rows are emitted as soon
  // as a centered difference is available, so a later blow-up keeps them.
  std::vector<SimState> window;
  simulate(make_initial_state(grid, cfg.initial, sc.model), sc, [&](const SimState& s, long n) {
    if (n % cfg.output_stride != 0) return;
    window.push_back(s);
    if (window.size() > 3) window.erase(window.begin());
    if (window.size() == 3) {
      const EnergyReport r = energy_report(window, sc.model);
      w.row({format_number(r.t), format_number(r.kinetic), format_number(r.internal),
             format_number(r.total), format_number(r.dissipation_rate),
             format_number(r.balance_residual)});
    }
  });
}

void run_audit(const RunConfig& cfg, RunOutcome& out) {
  const Grid1D grid = grid_of(cfg);
  const SolverConfig sc = solver_config(cfg);
  std::vector<std::vector<StressSample>> histories(grid.node_count());
  const auto steps = static_cast<long>(std::ceil(cfg.t_final / cfg.dt - 1e-9));
  auto audit_all = [&] {
    TableWriter w(cfg.out_dir, "audit", cfg.format,
                  {"node", "x", "min_rate", "total_dissipation", "passed"});
    out.files.push_back(w.path());
    w.header();
    bool all = true;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < histories.size(); ++i) {
      if (histories[i].size() < 3) return;
      const DissipationAudit a = audit_dissipation(sc.model.gamma, histories[i]);
      all = all && a.passed;
      worst = std::min(worst, a.min_rate);
      w.row({std::to_string(i), format_number(grid.x(i)), format_number(a.min_rate),
             format_number(a.total_dissipation), a.passed ? "1" : "0"});
    }
    out.message = std::string("dissipation audit ") + (all ? "passed" : "failed") +
                  ", min rate " + format_number(worst);
    if (!all) {
      out.status = "error";
      out.error_kind = "audit_failed";
      out.exit_code = exit_error;
    }
  };
  try {
    simulate(make_initial_state(grid, cfg.initial, sc.model), sc, [&](const SimState& s, long n) {
      if (n % cfg.output_stride != 0 && n != steps) return;
      for (std::size_t i = 0; i < histories.size(); ++i) histories[i].push_back({s.t, s.stress[i]});
    });
  } catch (const BlowUpError&) {
    audit_all();
    throw;
  }
  audit_all();
}

void run_dispersion(const RunConfig& cfg, RunOutcome& out) {
  const LinearModel model = cfg.model.variant == Variant::strain_rate ? LinearModel::strain_rate
                                                                     : LinearModel::stress_rate;
  const NondimScales s = nondimensionalize(cfg.model);
  const double coeff = model == LinearModel::strain_rate ? s.nu_bar : s.gamma_bar;
  const auto n = static_cast<std::ptrdiff_t>(cfg.k_values.size());
  std::vector<DispersionResult> results(cfg.k_values.size());
  // Validate serially so errors surface outside the parallel region.
  (void)dispersion(model, coeff, cfg.k_values.front());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) results[i] = dispersion(model, coeff, cfg.k_values[i]);

  const int nroots = model == LinearModel::strain_rate ? 2 : 3;
  std::vector<std::string> cols{"k"};
  for (int r = 1; r <= nroots; ++r) {
    cols.push_back("re_r" + std::to_string(r));
    cols.push_back("im_r" + std::to_string(r));
  }
  cols.insert(cols.end(), {"max_re", "discriminant", "classification"});
  TableWriter w(cfg.out_dir, "dispersion", cfg.format, cols);
  out.files.push_back(w.path());
  w.header();
  for (const auto& r : results) {
    Row row{format_number(r.k)};
    for (const auto& z : r.roots) {
      row.push_back(format_number(z.real()));
      row.push_back(format_number(z.imag()));
    }
    row.push_back(format_number(r.max_real_part()));
    row.push_back(format_number(r.discriminant));
    row.emplace_back(to_string(r.classification));
    w.row(row);
  }
}

void run_twave(const RunConfig& cfg, RunOutcome& out) {
  const NondimScales s = nondimensionalize(cfg.model);
  const double coeff = cfg.model.variant == Variant::strain_rate ? s.nu_bar : s.gamma_bar;
  const auto problem = TravelingWaveProblem::for_variant(response(cfg), cfg.T_minus, cfg.T_plus,
                                                         cfg.model.variant, coeff);
  const KinkProfile prof = kink_profile(problem, cfg.xi_min, cfg.xi_max, cfg.n_samples);
  TableWriter w(cfg.out_dir, "twave", cfg.format, {"xi", "T"});
  out.files.push_back(w.path());
  w.comment("{\"c\":" + format_number(problem.c) + ",\"kappa\":" + format_number(problem.kappa) +
            ",\"A2\":" + format_number(problem.A2) + ",\"T_minus\":" + format_number(problem.T_minus) +
            ",\"T_plus\":" + format_number(problem.T_plus) + "}");
  w.header();
  for (std::size_t j = 0; j < prof.xi().size(); ++j)
    w.row({format_number(prof.xi()[j]), format_number(prof.stress()[j])});
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RunOutcome run(const RunConfig& cfg) {
  RunOutcome out;
  try {
    std::filesystem::create_directories(cfg.out_dir);
  } catch (const std::exception& e) {
    out.exit_code = exit_error;
    out.status = "error";
    out.error_kind = std::string(to_string(ErrorKind::io_error));
    out.message = e.what();
  }

  if (out.status == "ok") {
    try {
      validate_config(cfg);
      switch (cfg.command) {
        case Command::simulate: run_simulate(cfg, out); break;
        case Command::energy: run_energy(cfg, out); break;
        case Command::audit: run_audit(cfg, out); break;
        case Command::dispersion: run_dispersion(cfg, out); break;
        case Command::twave: run_twave(cfg, out); break;
      }
    } catch (const BlowUpError& e) {
      out.exit_code = exit_blow_up;
      out.status = "blow_up";
      out.error_kind = std::string(to_string(e.kind()));
      out.message = e.what();
      out.blow_up_time = e.time();
      out.blow_up_max_stress = e.max_abs_stress();
    } catch (const Error& e) {
      const bool config = e.kind() == ErrorKind::validation_error || e.kind() == ErrorKind::parse_error;
      out.exit_code = config ? exit_config : exit_error;
      out.status = "error";
      out.error_kind = std::string(to_string(e.kind()));
      out.message = e.what();
    } catch (const std::exception& e) {
      out.exit_code = exit_error;
      out.status = "error";
      out.error_kind = "internal";
      out.message = e.what();
    }
  }

  nlohmann::ordered_json rec;
  rec["status"] = out.status;
  rec["command"] = std::string(to_string(cfg.command));
  rec["exit_code"] = out.exit_code;
  if (!out.error_kind.empty()) rec["kind"] = out.error_kind;
  if (!out.message.empty()) rec["message"] = out.message;
  if (out.status == "blow_up") {
    rec["t"] = out.blow_up_time;
    rec["max_abs_T"] = std::isfinite(out.blow_up_max_stress) ? nlohmann::ordered_json(out.blow_up_max_stress)
                                                             : nlohmann::ordered_json("inf");
  }
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& f : out.files) files.push_back(f.filename().string());
  rec["files"] = files;
  out.record = rec.dump();

  std::error_code ec;
  if (std::filesystem::is_directory(cfg.out_dir, ec)) {
    std::ofstream status(cfg.out_dir / "status.json");
    status << out.record << '\n';
  }
  return out;
}

}  // namespace slve
