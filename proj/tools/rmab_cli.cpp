// rmab: certify instances, simulate policies, and run gap-ratio sweeps.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rmab/error.hpp"
#include "rmab/json_io.hpp"
#include "rmab/parallel.hpp"
#include "rmab/simulator.hpp"

using namespace rmab;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitLoad = 2;
constexpr int kExitNumerical = 3;

struct RunSpec {
  std::vector<std::string> instances;
  std::vector<std::string> policies = {"two-set", "lp-index", "id"};
  std::vector<int> sizes = {100};
  long horizon = 10000;
  long burn_in = -1;
  int reps = 10;
  std::uint64_t seed = 1;
  bool diagnostics = false;
  bool series = false;
  std::string out;
  int jobs = 0;
};

// Writes to --out when given, stdout otherwise.
void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error(ErrorCode::kOutOfRange, "cannot write " + out);
  f << text;
}

std::string num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Cell {
  std::string instance;
  std::string policy;
  int n = 0;
  std::optional<TrajectoryStats> stats;
  std::string error;
};

// Contexts are built once per instance; a failure here marks every cell of
// that instance.
struct Prepared {
  std::string name;
  std::shared_ptr<const PolicyContext> ctx;
  InitialCondition init;
  std::string error;
};

std::vector<Prepared> prepare(const RunSpec& spec) {
  bool whittle = false;
  for (const auto& p : spec.policies) whittle |= p == "whittle";
  std::vector<Prepared> out;
  for (const auto& src : spec.instances) {
    const Instance inst = load_instance(src);  // load errors abort the run
    Prepared p;
    p.name = inst.name();
    p.init = builtin_initial_condition(inst.name());
    try {
      p.ctx = make_context(inst, whittle);
    } catch (const Error& e) {
      p.error = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Cell> run_cells(const RunSpec& spec) {
  const auto prepared = prepare(spec);
  std::vector<Cell> cells;
  std::vector<const Prepared*> owner;
  for (const auto& p : prepared)
    for (const auto& policy : spec.policies)
      for (int n : spec.sizes) {
        cells.push_back({p.name, policy, n, std::nullopt, p.error});
        owner.push_back(&p);
      }

  auto run = [&](std::size_t i) {
    Cell& c = cells[i];
    if (!c.error.empty()) return;
    SimConfig cfg;
    cfg.n_arms = c.n;
    cfg.horizon = spec.horizon;
    cfg.burn_in = spec.burn_in;
    cfg.replications = spec.reps;
    cfg.master_seed = spec.seed;
    cfg.init = owner[i]->init;
    cfg.diagnostics = spec.diagnostics || spec.series;
    cfg.record_series = spec.series;
    try {
      c.stats = simulate(owner[i]->ctx, c.policy, cfg);
    } catch (const Error& e) {
      c.error = e.what();
    }
  };
  // With fewer cells than workers the replications inside each cell are the
  // better unit of parallel work.
  if (cells.size() >= static_cast<std::size_t>(worker_count())) {
    parallel_for(cells.size(), run);
  } else {
    for (std::size_t i = 0; i < cells.size(); ++i) run(i);
  }
  return cells;
}

std::string sweep_csv(const RunSpec& spec, const std::vector<Cell>& cells) {
  std::ostringstream s;
  s << "# rmab-sweep-csv v1\n";
  s << "instance,policy,N,T,reps,seed,avg_reward,ci_half,r_rel,gap_ratio,log_gap_ratio,d_ic_avg,frac_ol_full,error\n";
  for (const auto& c : cells) {
    s << c.instance << ',' << c.policy << ',' << c.n << ',' << spec.horizon << ',' << spec.reps << ',' << spec.seed << ',';
    if (c.stats) {
      const auto& t = *c.stats;
      s << num(t.avg_reward) << ',' << num(t.ci_half) << ',' << num(t.r_rel) << ','
        << (t.gap_defined ? num(t.gap_ratio) : "") << ',' << (t.gap_defined ? num(t.log_gap_ratio) : "") << ','
        << (t.has_diagnostics ? num(t.d_ic_avg) : "") << ',' << (t.has_sets ? num(t.frac_ol_full) : "") << ',';
    } else {
      s << ",,,,,,,";
    }
    std::string err = c.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    s << err << '\n';
  }
  return s.str();
}

std::string simulate_json(const std::vector<Cell>& cells) {
  Json runs = Json::array();
  for (const auto& c : cells) {
    if (c.stats) {
      runs.push_back(stats_to_json(*c.stats));
    } else {
      runs.push_back(Json{{"instance", c.instance}, {"policy", c.policy}, {"N", c.n}, {"error", c.error}});
    }
  }
  return runs.dump(2) + "\n";
}

// Policies side by side at each N, best first. A policy is marked
// "separated" when its 95% interval does not meet the best one's.
std::string compare_table(const std::vector<Cell>& cells) {
  std::ostringstream s;
  char line[256];
  std::vector<std::pair<std::string, int>> groups;
  for (const auto& c : cells)
    if (std::find(groups.begin(), groups.end(), std::make_pair(c.instance, c.n)) == groups.end())
      groups.emplace_back(c.instance, c.n);
  for (const auto& [inst, n] : groups) {
    std::vector<const Cell*> row;
    for (const auto& c : cells)
      if (c.instance == inst && c.n == n) row.push_back(&c);
    std::stable_sort(row.begin(), row.end(), [](const Cell* a, const Cell* b) {
      if (!a->stats || !b->stats) return a->stats.has_value() && !b->stats.has_value();
      return a->stats->avg_reward > b->stats->avg_reward;
    });
    s << inst << "  N=" << n << "\n";
    std::snprintf(line, sizeof line, "  %-18s %12s %10s %12s %10s  %s\n", "policy", "avg_reward", "ci_half", "gap_ratio",
                  "gap_ci", "vs best");
    s << line;
    const Cell* best = row.empty() || !row.front()->stats ? nullptr : row.front();
    for (const Cell* c : row) {
      if (!c->stats) {
        s << "  " << c->policy << "  error: " << c->error << "\n";
        continue;
      }
      const auto& t = *c->stats;
      const double gap_ci = t.r_rel > 0 ? n * t.ci_half / t.r_rel : NAN;
      std::string vs = "best";
      if (c != best) {
        const bool apart = t.avg_reward + t.ci_half < best->stats->avg_reward - best->stats->ci_half;
        vs = apart ? "separated" : "overlapping";
      }
      std::snprintf(line, sizeof line, "  %-18s %12.6f %10.6f %12s %10s  %s\n", c->policy.c_str(), t.avg_reward,
                    t.ci_half, t.gap_defined ? num(t.gap_ratio).c_str() : "-", num(gap_ci).c_str(), vs.c_str());
      s << line;
    }
  }
  return s.str();
}

int exit_code_for(const Error& e) { return is_numerical(e.code()) ? kExitNumerical : kExitLoad; }

void add_run_options(CLI::App* cmd, RunSpec& spec, bool many_instances) {
  if (many_instances)
    cmd->add_option("--instance", spec.instances, "builtin names or JSON paths")->required()->delimiter(',');
  else
    cmd->add_option("--instance", spec.instances, "builtin name or JSON path")->required()->expected(1);
  cmd->add_option("--policies", spec.policies, "two-set, two-set-fallback, lp-index, id, whittle")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--N", spec.sizes, "numbers of arms")->delimiter(',')->capture_default_str();
  cmd->add_option("--T", spec.horizon, "steps per replication")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--burn-in", spec.burn_in, "steps discarded before averaging; default min(1e4, T/10)");
  cmd->add_option("--reps", spec.reps, "replications")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--seed", spec.seed, "master seed")->capture_default_str();
  cmd->add_flag("--diagnostics", spec.diagnostics, "record d_IC and the OL-set statistics");
  cmd->add_option("--out", spec.out, "output file (default stdout)");
  cmd->add_option("--jobs", spec.jobs, "worker threads, 0 = hardware")->capture_default_str()->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restless bandit policies: certification, simulation and sweeps"};
  app.require_subcommand(1);

  std::string certify_target, certify_out;
  auto* certify_cmd = app.add_subcommand("certify", "check the assumptions of an instance and print a JSON report");
  certify_cmd->add_option("source", certify_target, "builtin name or JSON path");
  certify_cmd->add_option("--instance", certify_target, "builtin name or JSON path");
  certify_cmd->add_option("--out", certify_out, "output file (default stdout)");

  RunSpec sim_spec, sweep_spec, compare_spec;
  auto* simulate_cmd = app.add_subcommand("simulate", "simulate policies and print JSON statistics");
  add_run_options(simulate_cmd, sim_spec, false);
  simulate_cmd->add_flag("--series", sim_spec.series, "include per-step diagnostics of replication 0");
  auto* sweep_cmd = app.add_subcommand("sweep", "CSV row per (instance, policy, N)");
  add_run_options(sweep_cmd, sweep_spec, true);
  auto* compare_cmd = app.add_subcommand("compare", "table of policies ranked at each N");
  add_run_options(compare_cmd, compare_spec, false);

  std::string export_dir = "data";
  auto* export_cmd = app.add_subcommand("export", "write every builtin instance as JSON");
  export_cmd->add_option("--out", export_dir, "directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (certify_cmd->parsed()) {
      if (certify_target.empty()) {
        std::cerr << "certify: an instance is required\n";
        return kExitUsage;
      }
      const Instance inst = load_instance(certify_target);
      Json report{{"certificate", certificate_to_json(certify(inst))}};
      try {
        report["lp"] = lp_to_json(solve_lp_relaxation(inst));
      } catch (const Error& e) {
        report["lp"] = Json{{"error", e.what()}};
      }
      emit(report.dump(2) + "\n", certify_out);
      return 0;
    }
    if (export_cmd->parsed()) {
      std::filesystem::create_directories(export_dir);
      for (const auto& name : builtin_names()) {
        const auto path = std::filesystem::path(export_dir) / (name + ".json");
        emit(instance_to_json(builtin(name)).dump(2) + "\n", path.string());
        std::cout << path.string() << "\n";
      }
      return 0;
    }
    RunSpec* spec = simulate_cmd->parsed() ? &sim_spec : sweep_cmd->parsed() ? &sweep_spec : &compare_spec;
    if (spec->sizes.empty()) {
      std::cerr << "--N needs at least one value\n";
      return kExitUsage;
    }
    for (const auto& p : spec->policies) {
      const auto names = policy_names();
      if (std::find(names.begin(), names.end(), p) == names.end()) {
        std::cerr << "unknown policy: " << p << "\n";
        return kExitUsage;
      }
    }
    set_worker_count(spec->jobs);
    const auto cells = run_cells(*spec);
    if (simulate_cmd->parsed()) {
      emit(simulate_json(cells), spec->out);
    } else if (sweep_cmd->parsed()) {
      emit(sweep_csv(*spec, cells), spec->out);
    } else {
      emit(compare_table(cells), spec->out);
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  }
}
