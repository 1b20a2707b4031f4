#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpimex/csv.hpp"
#include "mpimex/errors.hpp"
#include "mpimex/integrator.hpp"
#include "mpimex/parallel.hpp"
#include "mpimex/problems/registry.hpp"
#include "mpimex/stability.hpp"
#include "mpimex/study.hpp"

using nlohmann::json;
using namespace mpimex;

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

struct Options {
  std::string problem;
  std::string scheme = "imex2";
  std::string predictor = "weak-jacobi";
  std::vector<double> dt_list;
  double dt = 0.0;
  double t0 = 0.0;
  std::optional<double> t_final;
  std::map<std::string, double> params;
  std::string out;
  std::uint64_t seed = 12345;
  std::string ref_scheme = "imex4";
  std::string ref_predictor = "strong-gs";
  double ref_dt = 0.0;
  std::vector<double> lambda1_list, lambda2_list, alpha_list;
  std::vector<double> n_list = {2, 4, 8};
  int count = 100;
};

// JSON config supplies defaults; explicitly passed flags override it.
void merge_config(Options& o, const std::string& path, const CLI::App& cmd) {
  std::ifstream in(path);
  if (!in) throw RejectedInput("cannot open config file: " + path);
  json j = json::parse(in);
  auto overridden = [&](const std::string& flag) { return cmd.count(flag) > 0; };
  if (j.contains("problem") && !overridden("--problem")) o.problem = j["problem"];
  if (j.contains("scheme") && !overridden("--scheme")) o.scheme = j["scheme"];
  if (j.contains("predictor") && !overridden("--predictor")) o.predictor = j["predictor"];
  if (j.contains("dt_list") && !overridden("--dt-list")) o.dt_list = j["dt_list"].get<std::vector<double>>();
  if (j.contains("dt") && !overridden("--dt")) o.dt = j["dt"];
  if (j.contains("t0") && !overridden("--t0")) o.t0 = j["t0"];
  if (j.contains("t_final") && !overridden("--t-final")) o.t_final = j["t_final"].get<double>();
  if (j.contains("out") && !overridden("--out")) o.out = j["out"];
  if (j.contains("seed") && !overridden("--seed")) o.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("count") && !overridden("--count")) o.count = j["count"];
  if (j.contains("params")) {
    for (auto& [k, v] : j["params"].items())
      if (!o.params.count(k)) o.params[k] = v.get<double>();
  }
  if (j.contains("reference")) {
    const json& r = j["reference"];
    if (r.contains("scheme") && !overridden("--ref-scheme")) o.ref_scheme = r["scheme"];
    if (r.contains("predictor") && !overridden("--ref-predictor")) o.ref_predictor = r["predictor"];
    if (r.contains("dt") && !overridden("--ref-dt")) o.ref_dt = r["dt"];
  }
  auto list = [&](const char* key, const char* flag, std::vector<double>& dst) {
    if (j.contains(key) && !overridden(flag)) dst = j[key].get<std::vector<double>>();
  };
  list("lambda1_list", "--lambda1-list", o.lambda1_list);
  list("lambda2_list", "--lambda2-list", o.lambda2_list);
  list("alpha_list", "--alpha-list", o.alpha_list);
  list("n_list", "--n-list", o.n_list);
}

void add_params(Options& o, const std::vector<std::string>& kvs) {
  for (const auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw RejectedInput("--param expects key=value, got: " + kv);
    o.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
}

// The CSV goes to --out (or stdout); the human-readable summary goes to
// stdout (or stderr when the CSV occupies stdout).
struct Output {
  std::ofstream file;
  bool to_file = false;
  std::ostream& csv() { return to_file ? file : std::cout; }
  std::ostream& info() { return to_file ? std::cout : std::cerr; }
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) throw RejectedInput("cannot open output file: " + path);
      to_file = true;
    }
  }
};

int cmd_converge(const Options& o) {
  if (o.dt_list.empty()) throw RejectedInput("converge: --dt-list is required");
  ProblemInstance prob = make_problem(o.problem, o.params);
  if (o.t_final) prob.t1 = *o.t_final;
  prob.t0 = o.t0;
  ConvergenceConfig cfg;
  cfg.scheme = scheme_from_string(o.scheme);
  cfg.kind = predictor_from_string(o.predictor);
  cfg.dts = o.dt_list;
  cfg.ref_scheme = scheme_from_string(o.ref_scheme);
  cfg.ref_kind = predictor_from_string(o.ref_predictor);
  cfg.ref_dt = o.ref_dt;
  cfg.threads = env_thread_count();
  ConvergenceResult res = convergence_study(prob, cfg);

  Output out(o.out);
  CsvWriter csv(out.csv());
  csv.header({"dt", "error", "observed_slope"});
  int diverged = 0;
  for (const auto& row : res.rows) {
    csv.field(row.dt).field(row.error);
    csv.field(std::isnan(row.slope) ? std::string{} : format_g17(row.slope));
    csv.end_row();
    if (row.diverged) ++diverged;
  }
  out.info() << "converge " << o.problem << " " << o.scheme << " " << o.predictor << ": rows="
             << res.rows.size() << " diverged=" << diverged
             << " terminal_slope=" << format_g17(res.terminal_slope()) << "\n";
  return diverged == static_cast<int>(res.rows.size()) ? 1 : 0;
}

int cmd_stability(const Options& o) {
  std::vector<StabilityScanRow> rows =
      scan_stability(scheme_from_string(o.scheme), predictor_from_string(o.predictor), o.dt_list,
                     o.lambda1_list, o.lambda2_list, o.alpha_list, env_thread_count());
  Output out(o.out);
  CsvWriter csv(out.csv());
  csv.header({"scheme", "predictor", "dt", "lambda1", "lambda2", "alpha", "rho", "stable", "error"});
  int unstable = 0;
  for (const auto& r : rows) {
    csv.field(o.scheme).field(o.predictor).field(r.dt).field(r.lambda1).field(r.lambda2).field(r.alpha);
    csv.field(r.rho).field(r.stable).field(r.error);
    csv.end_row();
    if (!r.stable) ++unstable;
  }
  out.info() << "stability " << o.scheme << " " << o.predictor << ": points=" << rows.size()
             << " unstable=" << unstable << "\n";
  return 0;
}

int cmd_run(const Options& o) {
  if (!(o.dt > 0.0)) throw RejectedInput("run: --dt is required and must be positive");
  ProblemInstance prob = make_problem(o.problem, o.params);
  if (o.t_final) prob.t1 = *o.t_final;
  prob.t0 = o.t0;

  Output out(o.out);
  CsvWriter csv(out.csv());
  std::vector<std::string> cols = {"t"};
  for (const auto& [name, fn] : prob.observables) cols.push_back(name);
  cols.push_back("newton_iters");

  IntegrateOptions iopts;
  iopts.threads = env_thread_count();
  bool failed = false;
  std::string failure;
  Trajectory traj;
  try {
    traj = integrate(prob.sys, builtin_tableau(scheme_from_string(o.scheme)),
                     predictor_from_string(o.predictor), prob.u0, prob.t0, prob.t1, o.dt, iopts);
  } catch (const StepFailure& e) {
    failed = true;
    failure = e.what();
  }
  csv.header(cols);
  for (size_t k = 1; k < traj.states.size(); ++k) {
    csv.field(traj.times[k]);
    for (const auto& [name, fn] : prob.observables) csv.field(fn(traj.states[k]));
    csv.field(static_cast<long long>(traj.newton_iters[k - 1]));
    csv.end_row();
  }
  out.info() << "run " << o.problem << " " << o.scheme << " " << o.predictor << ": steps=" << traj.steps()
             << " diverged=" << (traj.diverged ? "true" : "false")
             << (failed ? (" step_failure=\"" + failure + "\"") : "") << "\n";
  return failed ? 1 : 0;
}

int cmd_tableau_check(const Options& o) {
  std::vector<SchemeId> ids;
  if (!o.scheme.empty() && o.scheme != "all")
    ids.push_back(scheme_from_string(o.scheme));
  else
    ids = {SchemeId::imex1, SchemeId::imex2, SchemeId::imex3, SchemeId::imex4};
  int bad = 0;
  for (SchemeId id : ids) {
    ImexTableau t = builtin_tableau(id);
    ValidationReport rep = validate_tableau(t);
    if (rep.ok()) {
      std::cout << to_string(id) << ": OK (" << t.name << ", stages=" << t.stages << ", order=" << t.order
                << (t.stiffly_accurate ? ", stiffly accurate" : "") << ")\n";
    } else {
      ++bad;
      std::cout << to_string(id) << ": " << rep.issues.size() << " issue(s)\n";
      for (const auto& issue : rep.issues) {
        std::cout << "  - " << issue.message;
        if (issue.i >= 0) std::cout << " [i=" << issue.i + 1 << (issue.j >= 0 ? ",j=" : "") << (issue.j >= 0 ? std::to_string(issue.j + 1) : "") << "]";
        std::cout << "\n";
      }
    }
  }
  return bad ? 1 : 0;
}

int cmd_theorem_check(const Options& o) {
  Output out(o.out);
  CsvWriter csv(out.csv());
  csv.header({"n", "instance", "dt", "predictor", "rho", "pass"});
  int failures = 0;
  double max_rho = 0.0;
  for (double nd : o.n_list) {
    const int n = static_cast<int>(nd);
    DiagDominantSummary s = diag_dominant_theorem_check(
        n, o.count, o.dt_list.empty() ? std::vector<double>{0.1, 1.0, 10.0, 1000.0} : o.dt_list, o.seed);
    for (const auto& r : s.rows) {
      csv.field(r.n).field(r.instance).field(r.dt).field(to_string(r.kind)).field(r.rho).field(r.pass);
      csv.end_row();
    }
    failures += s.failures;
    max_rho = std::max(max_rho, s.max_rho);
  }
  out.info() << "theorem-check: instances=" << o.count << " failures=" << failures
             << " max_rho=" << format_g17(max_rho) << "\n";
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partitioned IMEX-RK integrators for coupled multiphysics ODE systems"};
  app.require_subcommand(1);

  Options o;
  std::string config_path;
  std::vector<std::string> param_kvs;
  std::string dt_list_str, l1_str, l2_str, al_str, n_str;

  auto add_common = [&](CLI::App* cmd, bool needs_problem) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its fields");
    if (needs_problem) cmd->add_option("--problem", o.problem, "problem id");
    cmd->add_option("--scheme", o.scheme, "imex1|imex2|imex3|imex4");
    cmd->add_option("--predictor", o.predictor,
                    "weak-jacobi|strong-jacobi|weak-gs|strong-gs|stage-variant|exact");
    cmd->add_option("--out", o.out, "output CSV path (default: stdout)");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--param", param_kvs, "problem parameter override key=value")->take_all();
    return cmd;
  };

  CLI::App* conv = add_common(app.add_subcommand("converge", "temporal convergence study"), true);
  conv->add_option("--dt-list", dt_list_str, "comma-separated step sizes, strictly decreasing");
  conv->add_option("--t0", o.t0, "start time");
  double tf = 0.0;
  auto* tf_opt = conv->add_option("--t-final", tf, "final time");
  conv->add_option("--ref-scheme", o.ref_scheme, "self-reference scheme");
  conv->add_option("--ref-predictor", o.ref_predictor, "self-reference predictor");
  conv->add_option("--ref-dt", o.ref_dt, "self-reference step size");

  CLI::App* stab = add_common(app.add_subcommand("stability", "linear stability scan on the model problem"),
                              false);
  stab->add_option("--dt-list", dt_list_str, "comma-separated step sizes");
  stab->add_option("--lambda1-list", l1_str, "comma-separated lambda1 values");
  stab->add_option("--lambda2-list", l2_str, "comma-separated lambda2 values");
  stab->add_option("--alpha-list", al_str, "comma-separated alpha values");

  CLI::App* run = add_common(app.add_subcommand("run", "single integration, CSV trajectory"), true);
  run->add_option("--dt", o.dt, "step size");
  run->add_option("--t0", o.t0, "start time");
  auto* tf_opt_run = run->add_option("--t-final", tf, "final time");

  CLI::App* tabc = app.add_subcommand("tableau-check", "validate builtin tableaus");
  tabc->add_option("--scheme", o.scheme, "one scheme or 'all'")->default_val("all");

  CLI::App* thm = add_common(
      app.add_subcommand("theorem-check", "diagonally dominant unconditional stability check"), false);
  thm->add_option("--n-list", n_str, "comma-separated system sizes");
  thm->add_option("--count", o.count, "random instances per size");
  thm->add_option("--dt-list", dt_list_str, "comma-separated step sizes");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) merge_config(o, config_path, *active);
    add_params(o, param_kvs);
    if (!dt_list_str.empty()) o.dt_list = parse_list(dt_list_str);
    if (!l1_str.empty()) o.lambda1_list = parse_list(l1_str);
    if (!l2_str.empty()) o.lambda2_list = parse_list(l2_str);
    if (!al_str.empty()) o.alpha_list = parse_list(al_str);
    if (!n_str.empty()) o.n_list = parse_list(n_str);
    if (tf_opt->count() || tf_opt_run->count()) o.t_final = tf;

    if (active == conv) return cmd_converge(o);
    if (active == stab) return cmd_stability(o);
    if (active == run) {
      if (o.dt == 0.0 && !o.dt_list.empty()) o.dt = o.dt_list.front();
      return cmd_run(o);
    }
    if (active == tabc) return cmd_tableau_check(o);
    if (active == thm) return cmd_theorem_check(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
