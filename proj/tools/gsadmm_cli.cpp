#include "gsadmm/certify.hpp"
#include "gsadmm/csv.hpp"
#include "gsadmm/engine.hpp"
#include "gsadmm/io.hpp"
#include "gsadmm/lvggms.hpp"
#include "gsadmm/oracles.hpp"
#include "gsadmm/stepsize.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace gsadmm;

namespace {

struct Common {
  std::string problem = "lvggms";  // lvggms | quad | file
  std::string path;                // bundle path for --problem file
  std::string variant = "I";       // block grouping for lvggms
  std::string special_case = "none";
  double beta = 0.06, tau = 0.8, s = 1.17, sigma1 = 2.0, sigma2 = 3.0;
  double tol = 1e-7, tol_cer = 1e-4;
  std::optional<double> tol_oer;
  int max_iter = 1000;
  std::uint64_t seed = 0;
  int n = 100, p = 2, q = 2;
  double density = 0.001, nu = 0.005, mu = 0.05;
  int sample_factor = 10;
  std::string out = ".";
  std::string fstar = "none";  // none | auto | numeric value
  int threads = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--problem", c.problem, "Problem kind: lvggms, quad or file")
      ->check(CLI::IsMember({"lvggms", "quad", "file"}));
  sub->add_option("--path", c.path, "Problem bundle path (with --problem file)");
  sub->add_option("--variant", c.variant, "Block grouping for lvggms: I = (X,S | L), II = (X | S,L)")
      ->check(CLI::IsMember({"I", "II"}));
  sub->add_option("--special-case", c.special_case,
                  "a drops the y-group proximal term, b the x-group one")
      ->check(CLI::IsMember({"none", "a", "b"}));
  sub->add_option("--beta", c.beta, "Penalty parameter");
  sub->add_option("--tau", c.tau, "First dual stepsize factor");
  sub->add_option("--s", c.s, "Second dual stepsize factor");
  sub->add_option("--sigma1", c.sigma1, "x-group proximal factor");
  sub->add_option("--sigma2", c.sigma2, "y-group proximal factor");
  sub->add_option("--tol", c.tol, "Stopping tolerance on iterate changes (IER)");
  sub->add_option("--tol-cer", c.tol_cer, "Stopping tolerance on the residual norm (CER)");
  sub->add_option("--tol-oer", c.tol_oer, "Stopping tolerance on relative objective error");
  sub->add_option("--max-iter", c.max_iter, "Sweep limit");
  sub->add_option("--seed", c.seed, "Instance seed");
  sub->add_option("--n", c.n, "Instance dimension");
  sub->add_option("--p", c.p, "x-group block count (quad)");
  sub->add_option("--q", c.q, "y-group block count (quad)");
  sub->add_option("--density", c.density, "Sparsity density of the synthetic precision matrix");
  sub->add_option("--sample-factor", c.sample_factor, "Samples per dimension for the covariance");
  sub->add_option("--nu", c.nu, "l1 weight");
  sub->add_option("--mu", c.mu, "trace weight");
  sub->add_option("--out", c.out, "Output directory");
  sub->add_option("--fstar", c.fstar, "Reference objective: none, auto or a number");
  sub->add_option("--threads", c.threads, "Within-group solver threads");
}

std::string termination_name(Termination t) {
  return t == Termination::TolerancesMet ? "tolerances_met" : "max_iter";
}

SolverConfig make_config(const Common& c) {
  SolverConfig cfg;
  cfg.params = StepsizeParams{c.beta, c.tau, c.s, c.sigma1, c.sigma2};
  if (c.special_case == "a") {
    cfg.special_case = SpecialCase::A;
    cfg.params.sigma2 = 0.0;
  } else if (c.special_case == "b") {
    cfg.special_case = SpecialCase::B;
    cfg.params.sigma1 = 0.0;
  }
  cfg.max_iter = c.max_iter;
  cfg.tol_ier = c.tol;
  cfg.tol_cer = c.tol_cer;
  cfg.tol_oer = c.tol_oer;
  cfg.threads = c.threads;
  return cfg;
}

ordered_json config_json(const Common& c, const SolverConfig& cfg) {
  ordered_json j;
  j["beta"] = cfg.params.beta;
  j["tau"] = cfg.params.tau;
  j["s"] = cfg.params.s;
  j["sigma1"] = cfg.params.sigma1;
  j["sigma2"] = cfg.params.sigma2;
  j["variant"] = c.variant;
  j["special_case"] = c.special_case;
  j["tol"] = cfg.tol_ier;
  j["tol_cer"] = cfg.tol_cer;
  if (cfg.tol_oer) j["tol_oer"] = *cfg.tol_oer;
  j["max_iter"] = cfg.max_iter;
  j["threads"] = cfg.threads;
  return j;
}

void write_manifest(const fs::path& dir, const ordered_json& manifest) {
  fs::create_directories(dir);
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << '\n';
}

ordered_json base_manifest(const std::string& command, int argc, char** argv) {
  ordered_json j;
  j["command"] = command;
  ordered_json args = ordered_json::array();
  for (int i = 0; i < argc; ++i) args.push_back(argv[i]);
  j["argv"] = args;
  return j;
}

// Problem assembly for solve/sweep/certify. The descriptor goes into the
// manifest verbatim.
struct BuiltRun {
  SeparableProblem problem;
  GroupedPoint start;
  ordered_json descriptor;
  std::optional<lvggms::Instance> instance;     // set for lvggms
  std::optional<GroupedPoint> known_solution;   // set for quad
  std::optional<double> known_objective;        // set for quad
};

BuiltRun build_run(const Common& c) {
  if (c.problem == "quad") {
    QuadraticFixture fix = make_quadratic_test_problem(c.p, c.q, c.n, c.seed);
    ordered_json d{{"kind", "quad"}, {"p", c.p}, {"q", c.q}, {"n", c.n}, {"seed", c.seed}};
    GroupedPoint start = zero_point(fix.problem);
    return BuiltRun{fix.problem, start, d, std::nullopt, fix.w_star, fix.f_star};
  }
  if (c.problem == "file") {
    if (c.path.empty()) throw std::invalid_argument("--problem file requires --path");
    SeparableProblem problem = load_problem(c.path);
    ordered_json d{{"kind", "file"}, {"path", c.path}};
    GroupedPoint start = zero_point(problem);
    return BuiltRun{std::move(problem), std::move(start), d, std::nullopt, std::nullopt,
                    std::nullopt};
  }
  lvggms::Instance instance =
      lvggms::generate_instance(c.n, c.seed, c.density, c.sample_factor, c.nu, c.mu);
  lvggms::Grouping grouping =
      c.variant == "II" ? lvggms::Grouping::VariantII : lvggms::Grouping::VariantI;
  lvggms::BuiltProblem built = lvggms::make_problem(instance, grouping);
  ordered_json d{{"kind", "lvggms"}, {"n", c.n},           {"seed", c.seed},
                 {"density", c.density}, {"sample_factor", c.sample_factor},
                 {"nu", c.nu},        {"mu", c.mu}};
  return BuiltRun{built.problem, built.start, d, std::move(instance), std::nullopt, std::nullopt};
}

std::optional<double> resolve_fstar(const Common& c, const BuiltRun& run,
                                    const SolverConfig& cfg) {
  if (c.fstar == "none") return std::nullopt;
  if (c.fstar == "auto") {
    if (run.known_objective) return run.known_objective;
    if (run.instance) {
      StepsizeParams ref{cfg.params.beta, cfg.params.tau, cfg.params.s, 2.0, 3.0};
      return lvggms::reference_objective(*run.instance, ref);
    }
    return std::nullopt;  // no reference recipe for file bundles
  }
  return std::stod(c.fstar);
}

// Pre-run validation shared by solve, sweep rows and certify. On failure the
// returned string is the user-facing message (the stepsize admissibility
// failure spells out the boundary polynomial).
std::optional<std::string> reject_reason(const SeparableProblem& problem,
                                         const SolverConfig& cfg) {
  ParamReport report = validate_params(static_cast<int>(problem.p()),
                                       static_cast<int>(problem.q()), cfg.params,
                                       cfg.variant, cfg.special_case);
  if (report.ok) return std::nullopt;
  std::string message = report.summary();
  if (!in_region_G(cfg.params.tau, cfg.params.s)) {
    message += "; -tau^2 - s^2 - tau*s + tau + s + 1 = " +
               csv::format_double(region_quadratic(cfg.params.tau, cfg.params.s)) +
               " and tau + s = " + csv::format_double(cfg.params.tau + cfg.params.s) +
               ", both must be > 0";
  }
  return message;
}

ordered_json final_metrics(const SolveResult& result) {
  ordered_json j;
  j["iterations"] = result.history.rows.size();
  j["termination"] = termination_name(result.history.termination);
  if (!result.history.rows.empty()) {
    const HistoryRow& last = result.history.rows.back();
    j["ier"] = last.ier;
    j["cer"] = last.cer;
    if (last.oer) j["oer"] = *last.oer;
    j["objective"] = last.objective;
  }
  return j;
}

int run_solve(const Common& c, ordered_json manifest) {
  SolverConfig cfg = make_config(c);
  manifest["config"] = config_json(c, cfg);
  BuiltRun run = build_run(c);
  manifest["problem"] = run.descriptor;

  if (auto reason = reject_reason(run.problem, cfg)) {
    manifest["error"] = *reason;
    write_manifest(c.out, manifest);
    std::cerr << "solve: " << *reason << '\n';
    return 1;
  }
  cfg.reference_objective = resolve_fstar(c, run, cfg);
  if (cfg.reference_objective) manifest["fstar"] = *cfg.reference_objective;

  auto t0 = std::chrono::steady_clock::now();
  SolveResult result = solve(run.problem, run.start, cfg);
  std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;

  fs::create_directories(c.out);
  write_history_csv(result.history, fs::path(c.out) / "history.csv");
  manifest["outputs"] = ordered_json{{"history", "history.csv"}};
  manifest["wall_clock_seconds"] = dt.count();
  manifest["final"] = final_metrics(result);
  write_manifest(c.out, manifest);

  const ordered_json& fin = manifest["final"];
  std::cout << fin["termination"].get<std::string>() << " after " << fin["iterations"]
            << " sweeps";
  if (fin.contains("ier")) {
    std::cout << ": ier=" << fin["ier"] << " cer=" << fin["cer"]
              << " objective=" << fin["objective"];
  }
  std::cout << '\n';
  return result.history.termination == Termination::TolerancesMet ? 0 : 2;
}

int run_sweep(const Common& c, const std::string& axis, const std::string& values,
              const std::string& pairs, ordered_json manifest) {
  SolverConfig base = make_config(c);
  manifest["config"] = config_json(c, base);
  manifest["axis"] = axis;

  // Parse the requested settings up front; an empty list is a usage error.
  std::vector<StepsizeParams> settings;
  std::vector<std::string> labels;
  const std::string& list = axis == "beta" ? values : pairs;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      StepsizeParams prm = base.params;
      if (axis == "beta") {
        prm.beta = std::stod(item);
        labels.push_back(csv::format_double(prm.beta));
      } else {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("expected tau:s");
        prm.tau = std::stod(item.substr(0, colon));
        prm.s = std::stod(item.substr(colon + 1));
        labels.push_back(csv::format_double(prm.tau) + ":" + csv::format_double(prm.s));
      }
      settings.push_back(prm);
    } catch (const std::exception&) {
      manifest["error"] = "sweep: cannot parse setting '" + item + "'";
      write_manifest(c.out, manifest);
      std::cerr << manifest["error"].get<std::string>() << '\n';
      return 1;
    }
  }
  if (settings.empty()) {
    manifest["error"] = "sweep: no settings given (use --values or --pairs)";
    write_manifest(c.out, manifest);
    std::cerr << manifest["error"].get<std::string>() << '\n';
    return 1;
  }

  BuiltRun run = build_run(c);
  manifest["problem"] = run.descriptor;

  std::string csv_text = "axis,value,iterations,termination,ier,cer,oer,objective\n";
  ordered_json rows = ordered_json::array();
  auto sweep_t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < settings.size(); ++i) {
    SolverConfig cfg = base;
    cfg.params = settings[i];
    ordered_json row{{"value", labels[i]}};
    std::string line = axis + "," + labels[i];
    if (auto reason = reject_reason(run.problem, cfg)) {
      row["termination"] = "invalid";
      row["error"] = *reason;
      line += ",,invalid,,,,";
      std::cout << labels[i] << ": invalid (" << *reason << ")\n";
    } else {
      cfg.reference_objective = resolve_fstar(c, run, cfg);
      auto t0 = std::chrono::steady_clock::now();
      SolveResult result = solve(run.problem, run.start, cfg);
      std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
      const HistoryRow& last = result.history.rows.back();
      row["iterations"] = result.history.rows.size();
      row["termination"] = termination_name(result.history.termination);
      row["cpu_seconds"] = dt.count();
      row["ier"] = last.ier;
      row["cer"] = last.cer;
      if (last.oer) row["oer"] = *last.oer;
      row["objective"] = last.objective;
      line += "," + std::to_string(result.history.rows.size()) + "," +
              termination_name(result.history.termination) + "," + csv::format_double(last.ier) +
              "," + csv::format_double(last.cer) + "," +
              (last.oer ? csv::format_double(*last.oer) : "") + "," +
              csv::format_double(last.objective);
      std::cout << labels[i] << ": " << termination_name(result.history.termination) << " after "
                << result.history.rows.size() << " sweeps\n";
    }
    csv_text += line + "\n";
    rows.push_back(row);
  }
  std::chrono::duration<double> sweep_dt = std::chrono::steady_clock::now() - sweep_t0;

  fs::create_directories(c.out);
  std::ofstream out(fs::path(c.out) / "sweep.csv", std::ios::binary);
  out << csv_text;
  out.close();
  manifest["outputs"] = ordered_json{{"sweep", "sweep.csv"}};
  manifest["rows"] = rows;
  manifest["wall_clock_seconds"] = sweep_dt.count();
  write_manifest(c.out, manifest);
  return 0;
}

int run_region(const Common& c, double tau_min, double tau_max, double s_min, double s_max,
               int resolution, ordered_json manifest) {
  manifest["bounds"] =
      ordered_json{{"tau", {tau_min, tau_max}}, {"s", {s_min, s_max}}, {"resolution", resolution}};
  try {
    auto t0 = std::chrono::steady_clock::now();
    RegionGrid grid = region_grid({tau_min, tau_max}, {s_min, s_max}, resolution, c.threads);
    fs::create_directories(c.out);
    write_region_csv(grid, fs::path(c.out) / "region.csv");
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    manifest["outputs"] = ordered_json{{"region", "region.csv"}};
    manifest["wall_clock_seconds"] = dt.count();
    write_manifest(c.out, manifest);
    std::cout << "wrote region.csv (" << resolution << "x" << resolution << ")\n";
    return 0;
  } catch (const std::exception& e) {
    manifest["error"] = e.what();
    write_manifest(c.out, manifest);
    std::cerr << "region: " << e.what() << '\n';
    return 1;
  }
}

ordered_json certificate_json(const CertificateReport& report) {
  ordered_json j;
  j["ok"] = report.ok;
  j["xi1"] = report.xi1;
  j["xi2"] = report.xi.xi2;
  j["xi3"] = report.xi.xi3;
  j["xi4"] = report.xi.xi4;
  j["eta"] = report.eta;
  j["h_pd"] = ordered_json{{"is_pd", report.h_pd.is_pd},
                           {"min_eigenvalue", report.h_pd.min_eigenvalue},
                           {"subject", report.h_pd.subject}};
  j["structural_h_defect"] = report.structural_h_defect;
  j["structural_g_defect"] = report.structural_g_defect;
  ordered_json sections = ordered_json::array();
  for (const auto& section : report.sections) {
    ordered_json s{{"name", section.name},
                   {"ok", section.ok},
                   {"steps", section.steps},
                   {"violations", section.violations},
                   {"first_violation", section.first_violation},
                   {"max_defect", section.max_defect},
                   {"slack", section.slack}};
    ordered_json worst = ordered_json::array();
    for (const auto& step : section.worst) {
      worst.push_back(ordered_json{
          {"k", step.k}, {"lhs", step.lhs}, {"rhs", step.rhs}, {"defect", step.defect}});
    }
    s["worst"] = worst;
    sections.push_back(s);
  }
  j["sections"] = sections;
  return j;
}

int run_certify(const Common& c, int steps, int ref_iters, bool corrupt_m,
                ordered_json manifest) {
  SolverConfig cfg = make_config(c);
  manifest["config"] = config_json(c, cfg);
  manifest["steps"] = steps;
  if (c.problem == "file") {
    manifest["error"] = "certify supports lvggms and quad problems";
    write_manifest(c.out, manifest);
    std::cerr << manifest["error"].get<std::string>() << '\n';
    return 1;
  }
  BuiltRun run = build_run(c);
  manifest["problem"] = run.descriptor;
  if (auto reason = reject_reason(run.problem, cfg)) {
    manifest["error"] = *reason;
    write_manifest(c.out, manifest);
    std::cerr << "certify: " << *reason << '\n';
    return 1;
  }

  // Reference point: the quadratic fixture knows its saddle point; the
  // lvggms one is settled by a long plain run.
  GroupedPoint w_star;
  if (run.known_solution) {
    w_star = *run.known_solution;
  } else {
    manifest["ref_iters"] = ref_iters;
    SolverConfig ref_cfg = cfg;
    w_star = run_steps(run.problem, run.start, ref_cfg, ref_iters).point;
  }

  SolverConfig rec_cfg = cfg;
  rec_cfg.record_certificates = true;
  auto t0 = std::chrono::steady_clock::now();
  SolveResult result = run_steps(run.problem, run.start, rec_cfg, steps);
  AnalysisMatrices matrices = build_analysis(run.problem, rec_cfg.params, rec_cfg.special_case);
  if (corrupt_m) {
    // Negative control: a perturbed correction matrix must be caught.
    matrices.M.bottomLeftCorner(run.problem.n(), run.problem.x_dim() + run.problem.y_dim()) *=
        1.01;
  }
  CertificateReport report =
      certify_trajectory(run.problem, *result.trajectory, w_star, rec_cfg, &matrices);
  std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;

  fs::create_directories(c.out);
  std::ofstream cert_out(fs::path(c.out) / "certificate.json", std::ios::binary);
  cert_out << certificate_json(report).dump(2) << '\n';
  cert_out.close();
  manifest["outputs"] = ordered_json{{"certificate", "certificate.json"}};
  manifest["wall_clock_seconds"] = dt.count();
  manifest["ok"] = report.ok;
  write_manifest(c.out, manifest);

  if (report.ok) {
    std::cout << "certificates ok: " << report.sections.size() << " sections over " << steps
              << " sweeps\n";
    return 0;
  }
  for (const auto& section : report.sections) {
    if (section.ok) continue;
    std::cerr << "certificate violation: " << section.name << " first at sweep "
              << section.first_violation;
    if (!section.worst.empty()) std::cerr << " (worst defect " << section.worst.front().defect << ")";
    std::cerr << '\n';
  }
  if (!report.h_pd.is_pd) {
    std::cerr << "metric not positive definite: min eigenvalue " << report.h_pd.min_eigenvalue
              << " of " << report.h_pd.subject << '\n';
  }
  if (report.structural_h_defect > 1e-12 || report.structural_g_defect > 1e-12) {
    std::cerr << "structural identity defect: H " << report.structural_h_defect << ", G "
              << report.structural_g_defect << '\n';
  }
  return 3;
}

int run_generate(const Common& c, ordered_json manifest) {
  try {
    auto t0 = std::chrono::steady_clock::now();
    lvggms::Instance instance =
        lvggms::generate_instance(c.n, c.seed, c.density, c.sample_factor, c.nu, c.mu);
    lvggms::save_instance(instance, c.out);
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    manifest["problem"] = ordered_json{{"kind", "lvggms"},  {"n", c.n},
                                       {"seed", c.seed},    {"density", c.density},
                                       {"sample_factor", c.sample_factor}, {"nu", c.nu},
                                       {"mu", c.mu}};
    manifest["outputs"] = ordered_json{{"instance", "instance.json"}, {"covariance", "C.csv"}};
    manifest["wall_clock_seconds"] = dt.count();
    write_manifest(c.out, manifest);
    std::cout << "wrote instance bundle (n=" << c.n << ", seed=" << c.seed << ")\n";
    return 0;
  } catch (const std::exception& e) {
    manifest["error"] = e.what();
    write_manifest(c.out, manifest);
    std::cerr << "generate: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-block splitting solver benchmark harness"};
  app.require_subcommand(1);

  Common c;
  std::string axis = "beta", values, pairs;
  double tau_min = -1.5, tau_max = 2.0, s_min = -1.5, s_max = 2.0;
  int resolution = 701, steps = 200, ref_iters = 5000;
  bool corrupt_m = false;

  CLI::App* solve_cmd = app.add_subcommand("solve", "Run one solve and record its history");
  add_common(solve_cmd, c);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a list of settings and tabulate them");
  add_common(sweep_cmd, c);
  sweep_cmd->add_option("--axis", axis, "What varies: beta or steps")
      ->check(CLI::IsMember({"beta", "steps"}));
  sweep_cmd->add_option("--values", values, "Comma-separated beta values");
  sweep_cmd->add_option("--pairs", pairs, "Comma-separated tau:s pairs");

  CLI::App* region_cmd = app.add_subcommand("region", "Tabulate the admissible stepsize regions");
  region_cmd->add_option("--tau-min", tau_min, "Lower tau bound");
  region_cmd->add_option("--tau-max", tau_max, "Upper tau bound");
  region_cmd->add_option("--s-min", s_min, "Lower s bound");
  region_cmd->add_option("--s-max", s_max, "Upper s bound");
  region_cmd->add_option("--resolution", resolution, "Samples per axis");
  region_cmd->add_option("--out", c.out, "Output directory");
  region_cmd->add_option("--threads", c.threads, "Grid evaluation threads");

  CLI::App* certify_cmd =
      app.add_subcommand("certify", "Re-run a fixture and check every convergence certificate");
  add_common(certify_cmd, c);
  certify_cmd->add_option("--steps", steps, "Recorded sweeps");
  certify_cmd->add_option("--ref-iters", ref_iters,
                          "Reference-run sweeps for the lvggms saddle point");
  certify_cmd->add_flag("--corrupt-m", corrupt_m)->group("");

  CLI::App* generate_cmd = app.add_subcommand("generate", "Write a synthetic lvggms instance");
  generate_cmd->add_option("--n", c.n, "Dimension");
  generate_cmd->add_option("--seed", c.seed, "Seed");
  generate_cmd->add_option("--density", c.density, "Sparsity density");
  generate_cmd->add_option("--sample-factor", c.sample_factor, "Samples per dimension");
  generate_cmd->add_option("--nu", c.nu, "l1 weight");
  generate_cmd->add_option("--mu", c.mu, "trace weight");
  generate_cmd->add_option("--out", c.out, "Output directory");

  // quad defaults aimed at a small well-conditioned fixture
  if (argc > 1 && std::string(argv[1]) == "certify") {
    c.problem = "quad";
    c.beta = 1.0;
    c.tau = 0.9;
    c.s = 1.09;
    c.sigma1 = 2.0;
    c.sigma2 = 2.0;
    c.n = 8;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::string active = app.get_subcommands().empty() ? std::string("none")
                                                     : app.get_subcommands()[0]->get_name();
  try {
    if (solve_cmd->parsed()) return run_solve(c, base_manifest(active, argc, argv));
    if (sweep_cmd->parsed())
      return run_sweep(c, axis, values, pairs, base_manifest(active, argc, argv));
    if (region_cmd->parsed())
      return run_region(c, tau_min, tau_max, s_min, s_max, resolution,
                        base_manifest(active, argc, argv));
    if (certify_cmd->parsed())
      return run_certify(c, steps, ref_iters, corrupt_m, base_manifest(active, argc, argv));
    if (generate_cmd->parsed()) return run_generate(c, base_manifest(active, argc, argv));
  } catch (const std::exception& e) {
    ordered_json manifest = base_manifest(active, argc, argv);
    manifest["error"] = e.what();
    write_manifest(c.out, manifest);
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
