#include "specorder/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "specorder/acceptance.hpp"
#include "specorder/config.hpp"
#include "specorder/errors.hpp"
#include "specorder/flow.hpp"
#include "specorder/hamiltonian.hpp"
#include "specorder/report.hpp"

#ifndef SPECORDER_VERSION
#define SPECORDER_VERSION "0.0.0"
#endif

namespace specorder::cli {
namespace {

using config::Command;
using config::RunConfig;
using report::Column;
using report::Json;
using report::Kind;
using report::Table;

struct Output {
  Table table;
  Json summary = Json::object();
};

struct Flags {
  std::string config_path;
  std::string format;
  std::string out_path;
  std::size_t levels = 0;
  std::size_t grid = 0;
  bool list = false;
};

long long as_int(int v) { return static_cast<long long>(v); }

// ---- solve -------------------------------------------------------------------

Output cmd_solve(const RunConfig& cfg, std::ostream& err) {
  const auto& p = cfg.problems.front();
  Output o{Table({{"n", Kind::integer},
                  {"l", Kind::integer},
                  {"E", Kind::real},
                  {"basis_N", Kind::integer},
                  {"b_used", Kind::real}})};
  Json warnings = Json::array();
  for (int l : cfg.l_values) {
    const basis::BasisSpec tmpl{l, cfg.basis_size, cfg.b.value_or(1.0)};
    if (cfg.b) {
      for (const auto& lv : ham::solve_levels(p.kinetic, p.potential, tmpl, cfg.level_count))
        o.table.add({as_int(lv.n), as_int(l), lv.energy, static_cast<long long>(cfg.basis_size), *cfg.b});
      continue;
    }
    for (const auto& ol : ham::solve_levels_optimized(p.kinetic, p.potential, tmpl, cfg.level_count)) {
      if (!ol.bracketed) {
        std::ostringstream w;
        w << "level (" << ol.level.n << "," << l << "): oscillator-length search hit its boundary at b="
          << report::format_short(ol.b);
        warnings.push_back(w.str());
        err << "warning: " << w.str() << "\n";
      }
      o.table.add({as_int(ol.level.n), as_int(l), ol.level.energy, static_cast<long long>(cfg.basis_size), ol.b});
    }
  }
  if (!warnings.empty()) o.summary["warnings"] = warnings;
  if (p.kinetic.ultrarelativistic()) o.summary["note"] = "massless kinetic operator 2|p|";
  return o;
}

// ---- compare -----------------------------------------------------------------

Json pointwise_json(const flow::PointwiseVerdict& v) {
  Json j = Json::object();
  j["min_difference"] = v.min_difference;
  j["location"] = v.location;
  j["holds"] = v.holds;
  return j;
}

Output cmd_compare(const RunConfig& cfg) {
  const auto& p1 = cfg.problems[0];
  const auto& p2 = cfg.problems[1];
  Output o{Table({{"n", Kind::integer},
                  {"l", Kind::integer},
                  {"E1", Kind::real},
                  {"E2", Kind::real},
                  {"dE", Kind::real},
                  {"ordered", Kind::boolean},
                  {"b_used", Kind::real}})};
  double gap = INFINITY;
  bool all_ordered = true;
  // Rows n in [first, last) from one shared basis.
  auto add_rows = [&](const basis::BasisSpec& b, std::size_t first, std::size_t last) {
    const auto h1 = ham::assemble(p1.kinetic, p1.potential, b);
    const auto h2 = ham::assemble(p2.kinetic, p2.potential, b);
    const auto c = flow::compare_spectra(h1, h2, cfg.tolerance);
    gap = std::min(gap, c.psd_gap);
    const auto ev1 = linalg::eigvalsh(h1);
    const auto ev2 = linalg::eigvalsh(h2);
    for (std::size_t n = first; n < last; ++n) {
      const bool ordered = ev1[n] <= ev2[n] + cfg.tolerance;
      all_ordered = all_ordered && ordered;
      o.table.add({static_cast<long long>(n), as_int(b.l), ev1[n], ev2[n], ev2[n] - ev1[n], ordered, b.b});
    }
  };
  for (int l : cfg.l_values) {
    if (cfg.b) {
      add_rows({l, cfg.basis_size, *cfg.b}, 0, cfg.level_count);
      continue;
    }
    for (std::size_t n = 0; n < cfg.level_count; ++n) {
      basis::BasisSpec b{l, cfg.basis_size, 1.0};
      b.b = ham::optimize_basis_scale(p1.kinetic, p1.potential, b, n).b;
      add_rows(b, n, n + 1);
    }
  }

  const auto r_grid = flow::log_grid(1e-3, 50.0, 200);
  std::vector<double> p_grid(501);
  for (std::size_t i = 0; i < p_grid.size(); ++i) p_grid[i] = 0.1 * static_cast<double>(i);
  const auto pot = flow::pointwise_ordering([&](double r) { return p1.potential(r); },
                                            [&](double r) { return p2.potential(r); }, r_grid, cfg.tolerance);
  const auto kin = flow::pointwise_ordering([&](double q) { return p1.kinetic(q * q); },
                                            [&](double q) { return p2.kinetic(q * q); }, p_grid, cfg.tolerance);
  o.summary["psd_gap"] = gap;
  o.summary["psd_nonnegative"] = gap >= -cfg.tolerance;
  o.summary["all_ordered"] = all_ordered;
  o.summary["consistent"] = gap < -cfg.tolerance || all_ordered;
  o.summary["potential_pointwise"] = pointwise_json(pot);
  o.summary["kinetic_pointwise"] = pointwise_json(kin);
  return o;
}

// ---- flow --------------------------------------------------------------------

Output cmd_flow(const RunConfig& cfg) {
  const flow::Endpoint first{cfg.problems[0].kinetic, cfg.problems[0].potential};
  const flow::Endpoint second{cfg.problems[1].kinetic, cfg.problems[1].potential};
  std::vector<flow::LevelKey> keys;
  for (int l : cfg.l_values)
    for (std::size_t n = 0; n < cfg.level_count; ++n) keys.push_back({static_cast<int>(n), l});

  auto make_spec = [&] {
    if (!cfg.b) return flow::make_flow_spec(first, second, keys, cfg.basis_size, cfg.grid);
    flow::FlowSpec fixed{first, second, {}, flow::uniform_grid(cfg.grid), keys};
    for (int l : cfg.l_values) fixed.bases.push_back({l, cfg.basis_size, *cfg.b});
    return fixed;
  };
  const flow::FlowSpec spec = make_spec();
  flow::FlowOptions options;
  options.richardson_levels = cfg.richardson;
  options.tolerance = cfg.tolerance;
  const auto result = flow::flow_levels(spec, options);

  const bool refined = cfg.richardson > 0;
  std::vector<Column> cols{{"a", Kind::real},
                           {"n", Kind::integer},
                           {"l", Kind::integer},
                           {"E", Kind::real},
                           {"hf_expectation", Kind::real},
                           {"fd_derivative", Kind::real}};
  if (refined) cols.push_back({"refined_derivative", Kind::real});
  cols.push_back({"residual", Kind::real});
  cols.push_back({"degenerate", Kind::boolean});
  Output o{Table(std::move(cols))};
  for (const auto& t : result.tracks)
    for (std::size_t i = 0; i < t.a.size(); ++i) {
      std::vector<report::Cell> row{t.a[i], as_int(t.key.n), as_int(t.key.l), t.energy[i], t.hf_expectation[i],
                                    t.fd_derivative[i]};
      if (refined) row.emplace_back(t.refined_derivative[i]);
      row.emplace_back(std::abs(t.fd_derivative[i] - t.hf_expectation[i]));
      row.emplace_back(static_cast<bool>(t.degenerate[i]));
      o.table.add(std::move(row));
    }

  const auto& s = result.summary;
  o.summary["max_residual"] = s.max_hf_residual;
  if (refined) o.summary["max_refined_residual"] = s.max_refined_residual;
  o.summary["min_hf_expectation"] = s.min_hf;
  o.summary["monotone"] = s.monotone;
  o.summary["hf_nonnegative"] = s.hf_nonnegative;
  o.summary["endpoint_ordered"] = s.endpoint_ordered;
  o.summary["any_degenerate"] = s.any_degenerate;
  o.summary["psd_gap"] = flow::psd_gap(spec);
  Json lengths = Json::object();
  for (const auto& b : spec.bases) lengths["l" + std::to_string(b.l)] = b.b;
  o.summary["b_used"] = lengths;
  return o;
}

// ---- verify ------------------------------------------------------------------

Output cmd_verify(bool& all_passed) {
  Output o{Table({{"id", Kind::integer},
                  {"name", Kind::text},
                  {"quantity", Kind::text},
                  {"measured", Kind::real},
                  {"tolerance", Kind::real},
                  {"passed", Kind::boolean},
                  {"seconds", Kind::real},
                  {"time_limit", Kind::real},
                  {"note", Kind::text}})};
  all_passed = true;
  for (const auto& r : acceptance::run_all()) {
    all_passed = all_passed && r.passed;
    o.table.add({as_int(r.id), r.name, r.quantity, r.measured, r.tolerance, r.passed, r.seconds, r.time_limit, r.note});
  }
  o.summary["passed"] = all_passed;
  return o;
}

void write_verify_text(const Table& t, std::ostream& out) {
  for (const auto& row : t.rows()) {
    const bool passed = std::get<bool>(row[5]);
    out << (passed ? "PASS" : "FAIL") << " criterion " << std::get<long long>(row[0]) << " ("
        << std::get<std::string>(row[1]) << "): " << std::get<std::string>(row[2]) << " = "
        << report::format_short(std::get<double>(row[3])) << ", tolerance "
        << report::format_short(std::get<double>(row[4])) << ", " << report::format_short(std::get<double>(row[6]))
        << "s of " << report::format_short(std::get<double>(row[7])) << "s";
    const auto& note = std::get<std::string>(row[8]);
    if (!note.empty()) out << "; " << note;
    out << "\n";
  }
}

// ---- plumbing ----------------------------------------------------------------

const char* command_name(Command c) {
  switch (c) {
    case Command::solve:
      return "solve";
    case Command::compare:
      return "compare";
    case Command::flow:
      return "flow";
  }
  return "?";
}

Json meta(const std::string& command, const std::map<std::string, std::string>& echo) {
  Json m = Json::object();
  m["tool"] = "specorder";
  m["version"] = std::string(version());
  m["command"] = command;
  Json c = Json::object();
  for (const auto& [k, v] : echo) c[k] = v;
  m["config"] = c;
  return m;
}

int emit(const std::string& rendered, const std::string& path, std::ostream& out, std::ostream& err) {
  if (path.empty() || path == "-") {
    out << rendered;
    out.flush();
    return kSuccess;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write output file '" << path << "'\n";
    return kUsageError;
  }
  f << rendered;
  return f ? kSuccess : kUsageError;
}

int run_table_command(Command command, const Flags& flags, std::ostream& out, std::ostream& err) {
  auto cfg = config::interpret(config::read_file(flags.config_path), command);
  if (!flags.format.empty()) {
    cfg.format = flags.format;
    cfg.echo["output.format"] = flags.format;
  }
  if (!flags.out_path.empty()) {
    cfg.out_path = flags.out_path;
    cfg.echo["output.path"] = flags.out_path;
  }
  if (flags.levels > 0) {
    if (flags.levels > cfg.basis_size)
      throw config::ConfigError("--levels " + std::to_string(flags.levels) + " exceeds basis.size " +
                                std::to_string(cfg.basis_size));
    cfg.level_count = flags.levels;
    cfg.echo["levels.count"] = std::to_string(flags.levels);
  }
  if (flags.grid > 0) {
    cfg.grid = flags.grid;
    cfg.echo["flow.grid"] = std::to_string(flags.grid);
  }

  Output o = command == Command::solve     ? cmd_solve(cfg, err)
             : command == Command::compare ? cmd_compare(cfg)
                                           : cmd_flow(cfg);
  std::ostringstream buf;
  if (cfg.format == "json") {
    buf << report::document(meta(command_name(command), cfg.echo), o.table, o.summary).dump(2) << "\n";
  } else {
    report::write_csv(o.table, buf);
    report::write_summary(o.summary, err);
  }
  return emit(buf.str(), cfg.out_path, out, err);
}

int run_verify(const Flags& flags, std::ostream& out, std::ostream& err) {
  if (flags.list) {
    std::ostringstream buf;
    for (const auto& c : acceptance::criteria()) buf << c.id << " " << c.name << "\n";
    return emit(buf.str(), flags.out_path, out, err);
  }
  bool passed = false;
  const Output o = cmd_verify(passed);
  std::ostringstream buf;
  if (flags.format == "json") {
    buf << report::document(meta("verify", {}), o.table, o.summary).dump(2) << "\n";
  } else if (flags.format == "csv") {
    report::write_csv(o.table, buf);
  } else {
    write_verify_text(o.table, buf);
  }
  const int code = emit(buf.str(), flags.out_path, out, err);
  if (code != kSuccess) return code;
  return passed ? kSuccess : kVerificationFailed;
}

}  // namespace

std::string_view version() noexcept { return SPECORDER_VERSION; }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bound-state spectra and eigenvalue comparison checks for two-body radial Hamiltonians"};
  app.name("specorder");
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  Flags flags;
  auto add_table_options = [&](CLI::App* sub, bool with_grid) {
    sub->add_option("--config", flags.config_path, "configuration file")->required();
    sub->add_option("--format", flags.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", flags.out_path, "output file ('-' for standard output)");
    sub->add_option("--levels", flags.levels, "levels per l (overrides levels.count)")->check(CLI::PositiveNumber);
    if (with_grid)
      sub->add_option("--grid", flags.grid, "a-grid points (overrides flow.grid)")->check(CLI::Range(3, 1000000));
  };
  auto* solve = app.add_subcommand("solve", "lowest levels of one Hamiltonian");
  add_table_options(solve, false);
  auto* compare = app.add_subcommand("compare", "level-by-level ordering of two Hamiltonians");
  add_table_options(compare, false);
  auto* flow_cmd = app.add_subcommand("flow", "levels along the straight path between two Hamiltonians");
  add_table_options(flow_cmd, true);
  auto* verify = app.add_subcommand("verify", "run the built-in acceptance suite");
  verify->add_flag("--list", flags.list, "print criterion names without running them");
  verify->add_option("--format", flags.format, "output format")->check(CLI::IsMember({"text", "csv", "json"}));
  verify->add_option("--out", flags.out_path, "output file ('-' for standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (verify->parsed()) return run_verify(flags, out, err);
    const Command c = solve->parsed() ? Command::solve : compare->parsed() ? Command::compare : Command::flow;
    return run_table_command(c, flags, out, err);
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  }
}

}  // namespace specorder::cli
