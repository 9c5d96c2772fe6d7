#include "beamforge/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "beamforge/io.hpp"

namespace beamforge {

TrialDesign TrialDesign::d_optimal() {
  return {{
      {1, 1, 1, 2, 2, 1, 1},
      {1, 2, 3, 1, 1, 2, 1},
      {1, 2, 2, 1, 2, 1, 2},
      {1, 1, 2, 2, 1, 2, 2},
      {2, 2, 2, 2, 1, 1, 1},
      {2, 1, 2, 1, 2, 2, 1},
      {2, 1, 3, 1, 1, 1, 2},
      {2, 2, 1, 1, 1, 2, 2},
      {2, 2, 3, 2, 2, 2, 2},
  }};
}

namespace {

int level(int index, int count, const char* factor) {
  if (index < 1 || index > count) {
    throw std::invalid_argument(std::string("level of ") + factor + " out of range");
  }
  return index - 1;
}

std::int64_t scaled(std::int64_t value, double scale) {
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(value * scale - 1e-9)));
}

}  // namespace

GaParams trial_params(const TrialLevels& lv, const Instance& inst, const PatternSet& pats,
                      std::uint64_t seed, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  const std::int64_t r = std::max(1, pats.num_packing());
  const std::int64_t tr = static_cast<std::int64_t>(inst.horizon) * r;
  GaParams p;
  p.population_size = std::array{25, 50}[level(lv.tp, 2, "TP")];
  p.generations = scaled(std::array<std::int64_t, 2>{500 * r, 1000 * r}[level(lv.ng, 2, "NG")], scale);
  p.mutation_rate = std::array{0.01, 0.025, 0.05}[level(lv.mut, 3, "MUT")];
  p.restart_patience = level(lv.rst, 2, "RST") == 0 ? ceil_div(p.generations, 10)
                                                     : ceil_div(p.generations, 5);
  p.construction_pool = static_cast<int>(
      scaled(std::array<std::int64_t, 2>{100 * r, 500 * r}[level(lv.as, 2, "AS")], scale));
  p.crossover_kind = level(lv.crs, 2, "CRS") + 1;
  const std::int64_t ter = level(lv.ter, 2, "TER") == 0 ? ceil_div(tr, 10) : ceil_div(tr, 5);
  p.restart_elites = static_cast<int>(std::clamp<std::int64_t>(ter, 1, p.population_size - 1));
  p.seed = seed;
  return p;
}

double lbd(double fit, double lb) {
  if (!(lb > 0.0)) throw std::domain_error("lower bound must be positive");
  return (fit - lb) / lb;
}

double snr(std::span<const double> fits, LogBase base) {
  if (fits.empty()) throw std::domain_error("snr of an empty list");
  double sum = 0.0;
  for (double f : fits) sum += f * f;
  const double mean = sum / static_cast<double>(fits.size());
  if (!(mean > 0.0)) throw std::domain_error("snr of a zero mean square");
  return -10.0 * (base == LogBase::natural ? std::log(mean) : std::log10(mean));
}

std::uint64_t replication_seed(std::uint64_t base, int trial, int instance, int rep) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(base);
  for (int v : {trial, instance, rep}) h = mix(h ^ static_cast<std::uint64_t>(v));
  return h;
}

BenchInstance prepare_instance(std::string name, Instance inst) {
  BenchInstance b;
  b.name = std::move(name);
  b.instance = std::move(inst);
  b.patterns = enumerate_patterns(b.instance);
  b.lower_bound = lower_bound(b.instance, b.patterns).total;
  if (!(b.lower_bound > 0.0)) {
    throw std::domain_error("instance " + b.name + " has a nonpositive lower bound");
  }
  return b;
}

void aggregate(TrialResult& result, LogBase base) {
  std::vector<double> fits;
  double lbd_sum = 0.0;
  double time_sum = 0.0;
  result.missing = 0;
  for (const auto& row : result.rows) {
    if (!row.fitness) {
      ++result.missing;
      continue;
    }
    fits.push_back(*row.fitness);
    lbd_sum += *row.lbd;
    time_sum += row.time_s;
  }
  const double n = static_cast<double>(fits.size());
  result.lbd_mean = fits.empty() ? 0.0 : lbd_sum / n;
  result.avg_time_s = fits.empty() ? 0.0 : time_sum / n;
  result.snr = fits.empty() ? 0.0 : snr(fits, base);
}

std::vector<TrialResult> run_trials(const TrialDesign& design,
                                    const std::vector<BenchInstance>& instances,
                                    const BenchOptions& options) {
  if (instances.empty()) throw std::invalid_argument("no instances to run");
  if (options.replications < 1) throw std::invalid_argument("replications must be >= 1");
  std::vector<int> trials = options.trials;
  if (trials.empty()) {
    for (int t = 1; t <= static_cast<int>(design.rows.size()); ++t) trials.push_back(t);
  }
  for (int t : trials) {
    if (t < 1 || t > static_cast<int>(design.rows.size())) {
      throw std::invalid_argument("trial " + std::to_string(t) + " is not in the design");
    }
  }

  const int per_trial = static_cast<int>(instances.size()) * options.replications;
  std::vector<TrialResult> results(trials.size());
  for (std::size_t k = 0; k < trials.size(); ++k) {
    results[k].trial = trials[k];
    results[k].rows.resize(per_trial);
  }

  const int total = static_cast<int>(trials.size()) * per_trial;
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int task = next++; task < total; task = next++) {
      const int k = task / per_trial;
      const int i = (task % per_trial) / options.replications;
      const int rep = task % options.replications + 1;
      const int trial = trials[k];
      const BenchInstance& b = instances[i];
      ReplicationRow& row = results[k].rows[task % per_trial];
      row.trial = trial;
      row.instance = b.name;
      row.rep = rep;
      row.seed = replication_seed(options.seed, trial, i, rep);
      const GaParams params =
          trial_params(design.rows[trial - 1], b.instance, b.patterns, row.seed, options.scale);
      const auto start = std::chrono::steady_clock::now();
      try {
        const GaResult r = run_ga(b.instance, b.patterns, params);
        row.fitness = r.fitness;
        row.makespan = Evaluator(b.instance, b.patterns).makespan(r.best);
        row.lbd = lbd(r.fitness, b.lower_bound);
      } catch (const InfeasibleInstance&) {
      }
      if (options.record_time) {
        row.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
    }
  };
  const int threads = std::clamp(options.threads, 1, std::max(1, total));
  std::vector<std::jthread> pool;
  for (int n = 1; n < threads; ++n) pool.emplace_back(worker);
  worker();
  pool.clear();

  for (auto& r : results) aggregate(r, options.log_base);
  return results;
}

std::string results_csv(const std::vector<TrialResult>& results) {
  std::string out = "trial,instance,rep,seed,fitness,makespan,lbd,time_s\n";
  for (const auto& r : results) {
    for (const auto& row : r.rows) {
      out += std::to_string(row.trial) + "," + row.instance + "," + std::to_string(row.rep) +
             "," + std::to_string(row.seed) + ",";
      out += row.fitness ? format_number(*row.fitness) : "";
      out += ",";
      out += row.makespan ? std::to_string(*row.makespan) : "";
      out += ",";
      out += row.lbd ? format_number(*row.lbd) : "";
      out += "," + format_number(row.time_s) + "\n";
    }
  }
  return out;
}

std::string trials_csv(const std::vector<TrialResult>& results) {
  std::string out = "trial,lbd_mean,snr,avg_time_s\n";
  for (const auto& r : results) {
    out += std::to_string(r.trial) + "," + format_number(r.lbd_mean) + "," +
           format_number(r.snr) + "," + format_number(r.avg_time_s) + "\n";
  }
  return out;
}

}  // namespace beamforge
