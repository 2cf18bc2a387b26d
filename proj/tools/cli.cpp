#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lienard/center.hpp"
#include "lienard/cohomology.hpp"
#include "lienard/json_io.hpp"
#include "lienard/obstruction.hpp"
#include "lienard/poly_index.hpp"
#include "lienard/svg.hpp"

namespace lienard::cli {

namespace {

struct Common {
  std::string field_path;
  std::string out_path;
  double rel_tol = FlowSettings{}.rel_tol;
  double abs_tol = FlowSettings{}.abs_tol;
  double max_time = FlowSettings{}.max_time;
  int threads = -1;
};

struct Box {
  double x_min = -4, x_max = 4, y_min = -4, y_max = 4;
};

Box parse_box(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("--box: '" + item + "' is not a number");
    }
  }
  if (parts.size() != 4) throw ParseError("--box expects x_min:x_max:y_min:y_max");
  if (!(parts[1] > parts[0]) || !(parts[3] > parts[2])) throw ValidationFailure("--box must have positive extent");
  return {parts[0], parts[1], parts[2], parts[3]};
}

unsigned thread_count(int flag) {
  if (flag >= 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("LIENARD_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw ValidationFailure(std::string("LIENARD_THREADS must be a nonnegative integer, got '") + env + "'");
  }
  return 0;
}

FlowSettings settings_from(const Common& c) {
  FlowSettings s;
  s.rel_tol = c.rel_tol;
  s.abs_tol = c.abs_tol;
  s.max_time = c.max_time;
  s.validate();
  return s;
}

void emit(const Json& report, const std::string& path, std::ostream& out) {
  const std::string text = dump(report);
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ParseError("cannot write " + path);
  file << text;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ParseError("cannot write " + path);
  file << text;
}

Rhs load_rhs(const std::string& path, bool from_g, const LienardField& field) {
  if (path.empty()) throw ValidationFailure("--rhs is required");
  const BiPoly p = load_bipoly(path);
  return Rhs(from_g ? lie_derivative_poly(field, p) : p);
}

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::input:
      return input;
    case ErrorCategory::numerics:
      return numerics;
    case ErrorCategory::obstruction:
      return obstruction;
  }
  return internal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limit cycles, cohomological equations and truncated indices for Lienard fields"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lienard 0.3.0");

  Common common;
  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--field", common.field_path, "Field JSON file")->required();
    sub->add_option("--out", common.out_path, "Report path (default: stdout)");
    sub->add_option("--rel-tol", common.rel_tol, "Integrator relative tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--abs-tol", common.abs_tol, "Integrator absolute tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--max-time", common.max_time, "Integration time cap")->check(CLI::PositiveNumber);
    sub->add_option("--threads", common.threads, "Worker threads, 0 = all cores (env LIENARD_THREADS)")
        ->check(CLI::NonNegativeNumber);
  };

  std::string svg_path;
  std::string box_text = "-4:4:-4:4";
  std::string rhs_path;
  bool rhs_from_g = false;
  double obstruction_tol = 1e-6;
  double h = 0.05;
  bool force = false;
  int residual_samples = 200;
  int max_degree = 8;
  int cap = kDefaultSweepCap;
  bool no_timings = false;
  bool table = false;
  int orbits = 10;
  double s_min = 0.2;
  double s_max = 2.0;

  auto* analyze = app.add_subcommand("analyze", "Find and certify limit cycles");
  add_common(analyze);
  analyze->add_option("--svg", svg_path, "Write a phase portrait");
  analyze->add_option("--box", box_text, "Portrait box x_min:x_max:y_min:y_max");

  auto* obstruct = app.add_subcommand("obstruct", "Evaluate the obstruction functionals on a right-hand side");
  add_common(obstruct);
  obstruct->add_option("--rhs", rhs_path, "Right-hand side polynomial JSON")->required();
  obstruct->add_flag("--rhs-from-g", rhs_from_g, "Treat --rhs as g and use f = L.g");
  obstruct->add_option("--tol", obstruction_tol, "Admissibility tolerance")->check(CLI::PositiveNumber);

  auto* solve = app.add_subcommand("solve", "Solve L.g = f on a grid");
  solve->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
  add_common(solve);
  solve->add_option("--rhs", rhs_path, "Right-hand side polynomial JSON")->required();
  solve->add_flag("--rhs-from-g", rhs_from_g, "Treat --rhs as g and use f = L.g");
  solve->add_option("--box", box_text, "Solve box x_min:x_max:y_min:y_max");
  solve->add_option("--h", h, "Grid spacing")->check(CLI::PositiveNumber);
  solve->add_flag("--force", force, "Solve even when the right-hand side is inadmissible");
  solve->add_option("--tol", obstruction_tol, "Admissibility tolerance")->check(CLI::PositiveNumber);
  solve->add_option("--samples", residual_samples, "Residual verification samples")->check(CLI::NonNegativeNumber);
  solve->add_option("--svg", svg_path, "Write a phase portrait of the solve box");

  auto* index = app.add_subcommand("index", "Exact rank data of the truncated operator");
  add_common(index);
  index->add_option("--max-degree", max_degree, "Largest source degree")->check(CLI::NonNegativeNumber);
  index->add_option("--cap", cap, "Resource cap on --max-degree")->check(CLI::NonNegativeNumber);
  index->add_flag("--no-timings", no_timings, "Omit per-row timings for byte-stable output");
  index->add_flag("--table", table, "Print an aligned text table instead of JSON");

  auto* center = app.add_subcommand("center", "Verify the center case and its first integrals");
  add_common(center);
  center->add_option("--orbits", orbits, "Number of orbits")->check(CLI::PositiveNumber);
  center->add_option("--s-min", s_min, "Innermost section point")->check(CLI::PositiveNumber);
  center->add_option("--s-max", s_max, "Outermost section point")->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return ok;
  } catch (const CLI::ParseError& e) {
    err << dump(Json{{"error", "ParseError"}, {"category", "input"}, {"message", e.what()}});
    return input;
  }

  try {
    const unsigned threads = thread_count(common.threads);
    const FlowSettings settings = settings_from(common);
    const LienardField field = load_field(common.field_path);

    if (analyze->parsed()) {
      CycleSearchOptions opts;
      opts.threads = threads;
      const CycleSet cycles = find_cycles(field, opts, settings);
      emit(Json{{"field", to_json(field)}, {"cycles", to_json(cycles)}}, common.out_path, out);
      if (!svg_path.empty()) {
        const Box b = parse_box(box_text);
        write_text(svg_path, phase_portrait_svg(field, cycles, {b.x_min, b.x_max, b.y_min, b.y_max}, settings));
      }
      return ok;
    }

    if (obstruct->parsed()) {
      CycleSearchOptions opts;
      opts.threads = threads;
      const CycleSet cycles = find_cycles(field, opts, settings);
      const Rhs f = load_rhs(rhs_path, rhs_from_g, field);
      const ObstructionReport report = admissibility(field, cycles, f, obstruction_tol, settings);
      emit(Json{{"field", to_json(field)}, {"cycles", to_json(cycles)}, {"obstruction", to_json(report)}},
           common.out_path, out);
      return ok;
    }

    if (solve->parsed()) {
      const Box b = parse_box(box_text);
      CycleSearchOptions opts;
      opts.threads = threads;
      const CycleSet cycles = find_cycles(field, opts, settings);
      const Rhs f = load_rhs(rhs_path, rhs_from_g, field);
      const ObstructionReport report = admissibility(field, cycles, f, obstruction_tol, settings);
      Json doc{{"field", to_json(field)}, {"cycles", to_json(cycles)}, {"obstruction", to_json(report)}};
      if (!report.admissible && !force) {
        emit(doc, common.out_path, out);
        err << dump(to_json(InadmissibleRhs(report)));
        return obstruction;
      }
      SolverOptions so;
      so.obstruction_tol = obstruction_tol;
      so.force = force;
      so.threads = threads;
      CohomologySolver solver(field, cycles, f, settings, so);
      std::optional<std::string> chain_failure;
      try {
        solver.chain();
      } catch (const Error& e) {
        if (!force) throw;
        chain_failure = e.kind() + ": " + e.what();
      }
      CohomSolution sol = solver.solve_grid({b.x_min, b.x_max, b.y_min, b.y_max, h});
      sol.chain_failure = chain_failure;
      sol.residual_max = solver.verify_residual(sol, residual_samples);
      doc["solution"] = to_json(sol);
      emit(doc, common.out_path, out);
      if (!svg_path.empty()) {
        write_text(svg_path, phase_portrait_svg(field, cycles, {b.x_min, b.x_max, b.y_min, b.y_max}, settings));
      }
      return ok;
    }

    if (index->parsed()) {
      const auto sweep = index_sweep(field, max_degree, cap, threads);
      if (table) {
        const std::string text = sweep_table(sweep, !no_timings);
        if (common.out_path.empty() || common.out_path == "-") {
          out << text;
        } else {
          write_text(common.out_path, text);
        }
      } else {
        emit(Json{{"field", to_json(field)}, {"sweep", to_json(sweep, !no_timings)}}, common.out_path, out);
      }
      return ok;
    }

    if (center->parsed()) {
      CenterOptions co;
      co.orbit_count = orbits;
      co.s_min = s_min;
      co.s_max = s_max;
      co.threads = threads;
      if (!(s_max > s_min)) throw ValidationFailure("--s-max must exceed --s-min");
      const CenterReport report = verify_center(field, co, settings);
      emit(Json{{"field", to_json(field)}, {"center", to_json(report)}}, common.out_path, out);
      return ok;
    }
  } catch (const Error& e) {
    err << dump(to_json(e));
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << dump(Json{{"error", "InternalError"}, {"category", "internal"}, {"message", e.what()}});
    return internal;
  }
  return internal;
}

}  // namespace lienard::cli
