#include "cli.hpp"

#include "coulomb_eq/bifurcation.hpp"
#include "coulomb_eq/inverse.hpp"
#include "coulomb_eq/io.hpp"
#include "coulomb_eq/morse.hpp"
#include "coulomb_eq/solver.hpp"
#include "coulomb_eq/verification.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace ceq::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

unsigned threads_from_env() {
  if (const char* v = std::getenv("COULOMB_EQ_THREADS")) {
    try {
      const long n = std::stol(v);
      if (n >= 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
  }
  return 0;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
  }
}

ChargeVector charges_for(const Space& space, const std::vector<double>& values) {
  if (values.size() != charge_count(space)) {
    throw InputError("expected " + std::to_string(charge_count(space)) + " charges, got " +
                     std::to_string(values.size()));
  }
  return ChargeVector(values);
}

struct SettingsFlags {
  SolveSettings settings;

  void attach(CLI::App* app) {
    app->add_option("--grid-density", settings.grid_density, "Seed grid points per chart coordinate")
        ->capture_default_str();
    app->add_option("--newton-tol", settings.newton_tol, "Gradient tolerance, scaled by max(1, max|q|^2)")
        ->capture_default_str();
    app->add_option("--max-iters", settings.max_iters, "Newton iterations per seed")->capture_default_str();
    app->add_option("--dedup-tol", settings.dedup_tol, "Coordinate distance for merging critical points")
        ->capture_default_str();
    app->add_option("--max-seeds", settings.max_seeds, "Polygon grid size above which Halton seeds are used")
        ->capture_default_str();
    app->add_option("--threads", settings.threads, "Worker threads (0 = logical cores)");
  }
};

// --------------------------------------------------------------------------
// solve

struct SolveCmd {
  std::string space;
  std::vector<double> charges;
  std::string potential = "coulomb";
  std::string out_path;
  SettingsFlags flags;

  int run(std::ostream& out, std::ostream& err) {
    const Space sp = parse_space(space);
    const ChargeVector q = charges_for(sp, charges);
    const PotentialSpec spec = PotentialSpec::parse(potential);
    flags.settings.validate();

    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult res = find_critical_points(sp, q, spec, flags.settings);
    const MorseSummary summary = euler_count_check(res.points, sp);
    json doc = solve_document(sp, q, spec, res, summary);
    json args = {{"space", space_name(sp)}, {"charges", charges}, {"potential", spec.name()},
                 {"settings", to_json(flags.settings)}};
    doc["manifest"] = RunManifest::make("solve", args).to_json();
    emit(doc.dump(2) + "\n", out_path, out);

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    err << "solve: " << res.points.size() << " critical points (" << summary.minima << " min / " << summary.saddles
        << " saddle / " << summary.maxima << " max / " << summary.degenerate << " degenerate), euler "
        << to_string(summary.euler) << ", " << format_double(secs) << " s\n";
    return summary.euler == EulerStatus::failed ? kExitEulerFailed : kExitOk;
  }
};

// --------------------------------------------------------------------------
// bifurcate

struct BifurcateCmd {
  std::string space;
  std::vector<double> charges;
  std::string path;
  std::string potential = "coulomb";
  int steps = 111;
  int resolution = 200;
  double fit_window = 0.05;
  std::string out_dir = ".";
  SettingsFlags flags;

  int run(std::ostream& out, std::ostream& err) {
    const Space sp = parse_space(space);
    const PotentialSpec spec = PotentialSpec::parse(potential);
    flags.settings.validate();
    if (const auto* p = std::get_if<PolygonSpace>(&sp); p && p->n != 3) {
      throw InputError("bifurcation analysis is available for polygon:3 and the torus");
    }
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);

    json args = {{"space", space_name(sp)},  {"potential", spec.name()},   {"resolution", resolution},
                 {"path", path},             {"steps", steps},             {"fit_window", fit_window},
                 {"charges", charges},       {"settings", to_json(flags.settings)}};
    const json manifest = RunManifest::make("bifurcate", args).to_json();

    std::vector<BifurcationCurve> curves;
    if (const auto* t = std::get_if<TorusSpace>(&sp)) {
      const auto& r = t->radii;
      if (r[0] == r[1] || r[1] == r[2] || r[0] == r[2]) throw InputError("torus curves need distinct radii");
      curves = torus_bifurcation_set(r, resolution);
    } else {
      curves = polygon_bifurcation_set(resolution);
    }
    write_file(dir / "curves.csv", curves_csv(curves));

    json summary = {{"curves_file", "curves.csv"}, {"curves", curves.size()}, {"manifest", manifest}};
    if (!path.empty()) {
      if (charges.empty()) charges.assign(charge_count(sp), 1.0);
      charges_for(sp, charges);
      auto [charge_path, lo, hi] = ChargePath::parse(path, charges);
      const BranchDiagram diagram = trace_pitchfork(sp, charge_path, lo, hi, steps, spec, flags.settings);
      write_file(dir / "branches.csv", branch_csv(diagram));
      summary["branches_file"] = "branches.csv";
      summary["threshold"] = to_json(diagram.threshold);
      out << "threshold: " << format_double(diagram.threshold.lambda_c) << " (" << diagram.threshold.tracked.name()
          << ")\n";
      try {
        const ExponentFit fit = fit_branch_exponent(diagram, fit_window);
        summary["exponent_fit"] = {{"exponent", fit.exponent}, {"prefactor", fit.prefactor}, {"samples", fit.samples},
                                   {"window", fit_window}};
        out << "branch exponent: " << format_double(fit.exponent) << " from " << fit.samples << " samples\n";
      } catch (const BifurcationError& e) {
        summary["exponent_fit"] = nullptr;
        err << "bifurcate: " << e.what() << "\n";
      }
    }
    write_file(dir / "bifurcation.json", summary.dump(2) + "\n");
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    out << "wrote " << (dir / "curves.csv").string() << (path.empty() ? "" : " and branches.csv") << "\n";
    return kExitOk;
  }
};

// --------------------------------------------------------------------------
// inverse

struct InverseCmd {
  std::vector<double> sides;
  std::string points_file;
  std::string potential = "coulomb";
  std::string out_path;

  int run(std::ostream& out, std::ostream&) {
    const PotentialSpec spec = PotentialSpec::parse(potential);
    InverseResult result;
    json args;
    if (!sides.empty()) {
      if (sides.size() != 3) throw InputError("--sides needs three lengths");
      if (spec.kind != PotentialSpec::Kind::coulomb) throw InputError("triangle inverse is for the Coulomb potential");
      result = stabilizing_charges_triangle(sides[0], sides[1], sides[2]);
      args = {{"sides", sides}};
    } else {
      std::ifstream f(points_file);
      if (!f) throw InputError("cannot read " + points_file);
      json j;
      try {
        j = json::parse(f);
      } catch (const json::exception& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
      }
      const Configuration config = config_from_json(j);
      if (const auto* p = std::get_if<PolygonConfig>(&config)) {
        if (p->size() != 3) throw InputError("polygon inverse is available for triangles only");
        if (spec.kind != PotentialSpec::Kind::coulomb) throw InputError("triangle inverse is for the Coulomb potential");
        const auto& pts = p->points();
        result = stabilizing_charges_triangle((pts[1] - pts[2]).norm(), (pts[2] - pts[0]).norm(),
                                              (pts[0] - pts[1]).norm());
      } else {
        result = stabilizing_charges_torus(std::get<TorusConfig>(config), spec);
      }
      args = {{"config", to_json(config)}};
    }
    args["potential"] = spec.name();
    json doc = to_json(result);
    if (result.charges && result.config) {
      const EquilibriumReport rep = verify_equilibrium(*result.config, *result.charges, spec);
      doc["verification"] = {{"grad_norm", rep.grad_norm},
                             {"stationarity_residual", rep.stationarity_residual},
                             {"passed", rep.passed}};
    }
    doc["manifest"] = RunManifest::make("inverse", args).to_json();
    emit(doc.dump(2) + "\n", out_path, out);
    return kExitOk;
  }
};

// --------------------------------------------------------------------------
// verify

struct VerifyCmd {
  std::string suite = "quick";
  unsigned threads = 0;
  std::string out_path;

  int run(std::ostream& out, std::ostream& err) {
    VerifyOptions opt;
    opt.threads = threads;
    opt.full = suite == "full";
    const auto results = run_suite(opt);
    for (const auto& r : results) {
      err << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name << " ("
          << format_double(r.seconds) << " s)\n";
    }
    json doc = report_json(results, opt.full);
    doc["manifest"] = RunManifest::make("verify", {{"suite", suite}}).to_json();
    emit(doc.dump(2) + "\n", out_path, out);
    return doc["passed"].get<bool>() ? kExitOk : kExitFailure;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equilibria of point charges on fixed-perimeter polygons and concentric circles", "coulomb_eq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  const unsigned env_threads = threads_from_env();

  SolveCmd solve;
  solve.flags.settings.threads = env_threads;
  auto* s = app.add_subcommand("solve", "Find and classify all critical points");
  s->add_option("--space", solve.space, "polygon:<n> or torus:<r1>,<r2>,<r3>")->required();
  s->add_option("--charges", solve.charges, "Comma separated charges")->required()->delimiter(',');
  s->add_option("--potential", solve.potential, "coulomb, power:<k> or log")->capture_default_str();
  s->add_option("--out", solve.out_path, "Output file (default stdout)");
  solve.flags.attach(s);

  BifurcateCmd bif;
  bif.flags.settings.threads = env_threads;
  auto* b = app.add_subcommand("bifurcate", "Bifurcation curves and pitchfork branch diagrams");
  b->add_option("--space", bif.space, "polygon:3 or torus:<r1>,<r2>,<r3>")->required();
  b->add_option("--charges", bif.charges, "Base charges for the path")->delimiter(',');
  b->add_option("--path", bif.path, "q<k>:<from>:<to>, the varied charge and its range");
  b->add_option("--potential", bif.potential, "coulomb, power:<k> or log")->capture_default_str();
  b->add_option("--steps", bif.steps, "Samples along the path")->capture_default_str();
  b->add_option("--resolution", bif.resolution, "Samples per bifurcation curve")->capture_default_str();
  b->add_option("--fit-window", bif.fit_window, "Exponent fit window past the threshold")->capture_default_str();
  b->add_option("--out-dir", bif.out_dir, "Directory for CSV and JSON output")->capture_default_str();
  bif.flags.attach(b);

  InverseCmd inv;
  auto* i = app.add_subcommand("inverse", "Charges that make a configuration critical");
  auto* sides_opt = i->add_option("--sides", inv.sides, "Triangle sides |p2p3|,|p3p1|,|p1p2|")->delimiter(',');
  auto* points_opt = i->add_option("--points", inv.points_file, "JSON configuration file");
  sides_opt->excludes(points_opt);
  i->add_option("--potential", inv.potential, "coulomb, power:<k> or log")->capture_default_str();
  i->add_option("--out", inv.out_path, "Output file (default stdout)");

  VerifyCmd ver;
  ver.threads = env_threads;
  auto* v = app.add_subcommand("verify", "Run the acceptance suite");
  v->add_option("--suite", ver.suite, "quick or full")->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
  v->add_option("--threads", ver.threads, "Worker threads (0 = logical cores)");
  v->add_option("--out", ver.out_path, "Output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  try {
    if (s->parsed()) return solve.run(out, err);
    if (b->parsed()) return bif.run(out, err);
    if (i->parsed()) {
      if (inv.sides.empty() && inv.points_file.empty()) throw InputError("inverse needs --sides or --points");
      return inv.run(out, err);
    }
    if (v->parsed()) return ver.run(out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const BifurcationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitInvalidInput;
}

}  // namespace ceq::cli
