#include "beamforge/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "beamforge/experiment.hpp"
#include "beamforge/ilp_model.hpp"
#include "beamforge/io.hpp"

namespace beamforge {

namespace {

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) throw IoError("cannot write " + path);
}

// Writes to `path`, or to `out` when no path was given.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

std::string join_violations(const ValidationError& e) {
  std::string s;
  for (const auto& v : e.violations()) s += (s.empty() ? "" : "; ") + v;
  return s;
}

struct GenArgs {
  std::uint64_t seed = 0;
  int types = 1;
  int molds = 5;
  std::string out;
};

struct SolveArgs {
  std::string instance;
  std::uint64_t seed = 0;
  RelativeParams rel;
  std::string out;
  std::string trace;
  bool gantt = false;
};

struct BenchArgs {
  std::string dir;
  int reps = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string trials_out;
  int threads = 1;
  double scale = 1.0;
  std::vector<int> trials;
  bool log10 = false;
  bool no_time = false;
};

int run_gen(const GenArgs& a, std::ostream& out) {
  if (a.types < 1) throw std::invalid_argument("--types must be >= 1");
  if (a.molds < 1) throw std::invalid_argument("--molds must be >= 1");
  emit(a.out, serialize_instance(generate_instance(a.seed, a.types, a.molds)), out);
  return kExitOk;
}

int run_solve(const SolveArgs& a, std::ostream& out) {
  const Instance inst = load_instance(a.instance);
  const PatternSet pats = enumerate_patterns(inst);
  const GaParams params = resolve_params(a.rel, pats, a.seed);
  validate_params(params);
  const GaResult result = run_ga(inst, pats, params);
  emit(a.out, solution_json(result.best, inst, pats), out);
  if (!a.trace.empty()) write_file(a.trace, trace_csv(result.trace));
  if (a.gantt) out << render_gantt(decode_schedule(result.best, inst, pats), inst);
  return kExitOk;
}

int run_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  if (!fs::is_directory(a.dir, ec)) throw IoError("cannot read directory " + a.dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  if (ec) throw IoError("cannot read directory " + a.dir);
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::invalid_argument("no .json instances in " + a.dir);

  std::vector<BenchInstance> instances;
  for (const auto& f : files) {
    instances.push_back(prepare_instance(f.stem().string(), load_instance(f.string())));
  }
  BenchOptions opt;
  opt.replications = a.reps;
  opt.seed = a.seed;
  opt.threads = a.threads;
  opt.scale = a.scale;
  opt.record_time = !a.no_time;
  opt.log_base = a.log10 ? LogBase::ten : LogBase::natural;
  opt.trials = a.trials;
  const auto results = run_trials(TrialDesign::d_optimal(), instances, opt);

  emit(a.out, results_csv(results), out);
  std::string trials_path = a.trials_out;
  if (trials_path.empty() && !a.out.empty()) {
    trials_path = (fs::path(a.out).parent_path() / "trials.csv").string();
  }
  emit(trials_path, trials_csv(results), out);
  for (const auto& r : results) {
    if (r.missing > 0) {
      err << "trial " << r.trial << ": " << r.missing << " rejected runs excluded\n";
    }
  }
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Precast beam production planner", "beamforge"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->required();
  gen_cmd->add_option("--types", gen.types, "Number of beam types");
  gen_cmd->add_option("--molds", gen.molds, "Number of molds");
  gen_cmd->add_option("--out", gen.out, "Output file");

  std::string instance_path;
  std::string out_path;
  auto* pat_cmd = app.add_subcommand("patterns", "Enumerate patterns");
  pat_cmd->add_option("--instance", instance_path, "Instance file")->required();
  pat_cmd->add_option("--out", out_path, "Output file");

  auto* bound_cmd = app.add_subcommand("bound", "Print the lower bound");
  bound_cmd->add_option("--instance", instance_path, "Instance file")->required();
  bound_cmd->add_option("--out", out_path, "Output file");

  auto* lp_cmd = app.add_subcommand("emit-lp", "Write the integer model in LP format");
  lp_cmd->add_option("--instance", instance_path, "Instance file")->required();
  lp_cmd->add_option("--out", out_path, "Output file");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run the genetic algorithm");
  solve_cmd->add_option("--instance", solve.instance, "Instance file")->required();
  solve_cmd->add_option("--seed", solve.seed, "Random seed");
  solve_cmd->add_option("--tp", solve.rel.population_size, "Population size");
  solve_cmd->add_option("--ng-mult", solve.rel.ng_mult, "Generations per packing pattern");
  solve_cmd->add_option("--mut", solve.rel.mutation_rate, "Mutation rate");
  solve_cmd->add_option("--rst", solve.rel.rst_fraction, "Restart patience as a fraction of NG");
  solve_cmd->add_option("--as-mult", solve.rel.as_mult, "Restart constructions per packing pattern");
  solve_cmd->add_option("--crs", solve.rel.crossover_kind, "Crossover type (1 or 2)");
  solve_cmd->add_option("--ter", solve.rel.restart_elites, "Members kept on restart");
  solve_cmd->add_option("--out", solve.out, "Solution file");
  solve_cmd->add_option("--trace", solve.trace, "Convergence trace CSV file");
  solve_cmd->add_flag("--gantt", solve.gantt, "Print the mold timetable");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run the trial design over an instance directory");
  bench_cmd->add_option("--instances", bench.dir, "Directory of instance files")->required();
  bench_cmd->add_option("--reps", bench.reps, "Replications per instance");
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--out", bench.out, "Per-replication CSV file");
  bench_cmd->add_option("--trials-out", bench.trials_out,
                        "Per-trial CSV file (default: trials.csv next to --out)");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads");
  bench_cmd->add_option("--scale", bench.scale, "Multiplier on NG and AS");
  bench_cmd->add_option("--trial", bench.trials, "Trials to run (default: all)");
  bench_cmd->add_flag("--log10", bench.log10, "Use log10 in the S/N ratio");
  bench_cmd->add_flag("--no-time", bench.no_time, "Write 0 for wall times");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (gen_cmd->parsed()) return run_gen(gen, out);
    if (solve_cmd->parsed()) return run_solve(solve, out);
    if (bench_cmd->parsed()) return run_bench(bench, out, err);
    const Instance inst = load_instance(instance_path);
    if (lp_cmd->parsed()) {
      emit(out_path, emit_lp(build_model(inst, enumerate_patterns(inst))), out);
    } else if (bound_cmd->parsed()) {
      emit(out_path, bound_json(lower_bound(inst, enumerate_patterns(inst))), out);
    } else {
      emit(out_path, patterns_json(enumerate_patterns(inst)), out);
    }
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "error: invalid instance: " << join_violations(e) << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "error: malformed instance at byte " << e.position() << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const InfeasibleInstance& e) {
    err << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InfeasibleChromosome& e) {
    err << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const EmptyRatioSet& e) {
    err << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace beamforge
