#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beamforge/bound.hpp"
#include "beamforge/ga.hpp"

namespace beamforge {

// 1-based level indices for TP, NG, MUT, RST, AS, CRS, TER.
struct TrialLevels {
  int tp = 1;
  int ng = 1;
  int mut = 1;
  int rst = 1;
  int as = 1;
  int crs = 1;
  int ter = 1;

  bool operator==(const TrialLevels&) const = default;
};

struct TrialDesign {
  std::vector<TrialLevels> rows;

  // The fixed 9-trial D-optimal design.
  static TrialDesign d_optimal();
};

// Level values: TP {25,50}; NG {500r,1000r}; MUT {0.01,0.025,0.05};
// RST {ceil(0.1 NG), ceil(0.2 NG)}; AS {100r,500r}; CRS {1,2};
// TER {ceil(0.1 T r), ceil(0.2 T r)} clamped to TP - 1. `scale` multiplies NG
// and AS. Throws std::invalid_argument on a level index out of range.
GaParams trial_params(const TrialLevels& levels, const Instance& inst, const PatternSet& pats,
                      std::uint64_t seed, double scale = 1.0);

// (fit - lb) / lb. Throws std::domain_error when lb <= 0.
double lbd(double fit, double lb);

enum class LogBase { natural, ten };

// -10 log(mean of squares). Throws std::domain_error on an empty list or a
// zero mean square.
double snr(std::span<const double> fits, LogBase base = LogBase::natural);

// Seed of one replication, a pure function of its coordinates.
std::uint64_t replication_seed(std::uint64_t base, int trial, int instance, int rep);

struct BenchInstance {
  std::string name;
  Instance instance;
  PatternSet patterns;
  double lower_bound = 0.0;
};

// Enumerates patterns and computes the bound. Throws std::domain_error when
// the bound is not positive.
BenchInstance prepare_instance(std::string name, Instance inst);

struct ReplicationRow {
  int trial = 0;  // 1-based row of the design
  std::string instance;
  int rep = 0;  // 1-based
  std::uint64_t seed = 0;
  std::optional<double> fitness;  // empty when the run was rejected
  std::optional<int> makespan;
  std::optional<double> lbd;
  double time_s = 0.0;
};

struct TrialResult {
  int trial = 0;
  std::vector<ReplicationRow> rows;  // instance-major, then replication
  double lbd_mean = 0.0;
  double snr = 0.0;
  double avg_time_s = 0.0;
  int missing = 0;
};

struct BenchOptions {
  int replications = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  double scale = 1.0;
  bool record_time = true;  // false writes 0 for every wall time
  LogBase log_base = LogBase::natural;
  std::vector<int> trials;  // 1-based subset of the design; empty means all
};

// Runs every selected trial on every instance. Results do not depend on the
// thread count or completion order (except the wall times).
std::vector<TrialResult> run_trials(const TrialDesign& design,
                                    const std::vector<BenchInstance>& instances,
                                    const BenchOptions& options);

// Recomputes the aggregates of `result` from its rows.
void aggregate(TrialResult& result, LogBase base = LogBase::natural);

// trial,instance,rep,seed,fitness,makespan,lbd,time_s
std::string results_csv(const std::vector<TrialResult>& results);
// trial,lbd_mean,snr,avg_time_s
std::string trials_csv(const std::vector<TrialResult>& results);

}  // namespace beamforge
