#include "beamforge/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace beamforge {

bool Chromosome::contains(PatternId id) const {
  return std::any_of(genes.begin(), genes.end(),
                     [id](const Gene& g) { return g.pattern == id; });
}

std::int64_t Chromosome::frequency(PatternId id) const {
  for (const auto& g : genes) {
    if (g.pattern == id) return g.frequency;
  }
  return 0;
}

void Chromosome::drop_zero_genes() {
  std::erase_if(genes, [](const Gene& g) { return g.frequency <= 0; });
}

std::vector<Gene> Chromosome::canonical() const {
  std::vector<Gene> out = genes;
  std::sort(out.begin(), out.end());
  return out;
}

double weighted_objective(const ObjectiveTerms& t, const std::array<double, 4>& w) {
  return w[0] * static_cast<double>(t.makespan) + w[1] * t.new_bar_waste.meters() +
         w[2] * t.new_bar_leftover_waste.meters() + w[3] * t.leftover_waste.meters();
}

std::string InfeasibilityReport::describe() const {
  if (feasible()) return "feasible";
  std::ostringstream os;
  const char* sep = "";
  if (beam_demand) {
    os << sep << "beam demand (" << unmet_demands << " unmet)";
    sep = ", ";
  }
  if (bar_stock) {
    os << sep << "bar stock (" << exceeded_stocks << " exceeded)";
    sep = ", ";
  }
  if (bar_balance) {
    os << sep << "bar balance (" << unbalanced_classes << " classes)";
    sep = ", ";
  }
  if (horizon) os << sep << "horizon (" << overloaded_molds << " molds)";
  return os.str();
}

HorizonError::HorizonError(int mold, int load, int horizon)
    : std::runtime_error("mold " + std::to_string(mold + 1) + " is loaded for " +
                         std::to_string(load) + " periods, horizon is " +
                         std::to_string(horizon)),
      mold_(mold),
      load_(load) {}

InfeasibleChromosome::InfeasibleChromosome(InfeasibilityReport report)
    : std::runtime_error("infeasible chromosome: " + report.describe()),
      report_(report) {}

Evaluator::Evaluator(const Instance& inst, const PatternSet& pats) : inst_(inst), pats_(pats) {
  for (const auto& bt : inst.beam_types) {
    offsets_.push_back(static_cast<int>(demand_.size()));
    demand_.insert(demand_.end(), bt.demands.begin(), bt.demands.end());
  }
  for (int g = 0; g < inst.num_mold_classes(); ++g) {
    class_molds_.push_back(inst.molds_in_class(g));
  }
}

void Evaluator::check_ids(const Chromosome& ch) const {
  for (const auto& g : ch.genes) {
    if (!pats_.valid(g.pattern)) {
      throw std::out_of_range("unknown pattern id " + std::to_string(g.pattern));
    }
  }
}

std::vector<std::int64_t> Evaluator::produced_beams(const Chromosome& ch) const {
  std::vector<std::int64_t> out(demand_.size(), 0);
  for (const auto& g : ch.genes) {
    if (pats_.kind(g.pattern) != PatternKind::packing) continue;
    const auto& p = pats_.packing_pattern(g.pattern);
    for (std::size_t k = 0; k < p.counts.size(); ++k) {
      out[offsets_[p.beam_type] + k] += p.counts[k] * g.frequency;
    }
  }
  return out;
}

bool Evaluator::demand_met(const std::vector<std::int64_t>& produced) const {
  for (std::size_t i = 0; i < demand_.size(); ++i) {
    if (produced[i] < demand_[i]) return false;
  }
  return true;
}

std::vector<std::int64_t> Evaluator::bars_used(const Chromosome& ch) const {
  std::vector<std::int64_t> out(inst_.num_bars(), 0);
  for (const auto& g : ch.genes) {
    switch (pats_.kind(g.pattern)) {
      case PatternKind::packing:
        break;
      case PatternKind::cutting:
        out[pats_.cutting_pattern(g.pattern).source_bar] += g.frequency;
        break;
      case PatternKind::overlapping: {
        const auto& o = pats_.overlapping_pattern(g.pattern);
        for (std::size_t v = 0; v < o.leftover_counts.size(); ++v) {
          out[inst_.num_bar_kinds + v] += o.leftover_counts[v] * g.frequency;
        }
        break;
      }
    }
  }
  return out;
}

std::vector<std::int64_t> Evaluator::bars_produced(const Chromosome& ch) const {
  std::vector<std::int64_t> out(inst_.num_mold_classes(), 0);
  for (const auto& g : ch.genes) {
    switch (pats_.kind(g.pattern)) {
      case PatternKind::packing:
        break;
      case PatternKind::cutting: {
        const auto& c = pats_.cutting_pattern(g.pattern);
        for (std::size_t k = 0; k < c.item_counts.size(); ++k) {
          out[k] += c.item_counts[k] * g.frequency;
        }
        break;
      }
      case PatternKind::overlapping:
        out[pats_.overlapping_pattern(g.pattern).produced_class] += g.frequency;
        break;
    }
  }
  return out;
}

std::vector<std::int64_t> Evaluator::bars_required(const Chromosome& ch) const {
  std::vector<std::int64_t> out(inst_.num_mold_classes(), 0);
  for (const auto& g : ch.genes) {
    if (pats_.kind(g.pattern) != PatternKind::packing) continue;
    const auto& p = pats_.packing_pattern(g.pattern);
    out[p.mold_class] += inst_.beam_types[p.beam_type].bars_per_beam * g.frequency;
  }
  return out;
}

// Each use goes to the least-loaded mold of the pattern's class, lowest
// index first on ties.
std::vector<int> Evaluator::mold_loads(const Chromosome& ch,
                                       std::vector<std::vector<ScheduledCast>>* casts) const {
  std::vector<int> loads(inst_.num_molds(), 0);
  for (const auto& g : ch.genes) {
    if (pats_.kind(g.pattern) != PatternKind::packing) continue;
    const auto& p = pats_.packing_pattern(g.pattern);
    const auto& molds = class_molds_[p.mold_class];
    for (std::int64_t use = 0; use < g.frequency; ++use) {
      int best = molds.front();
      for (int m : molds) {
        if (loads[m] < loads[best]) best = m;
      }
      if (casts) (*casts)[best].push_back({p.id, loads[best] + 1, p.duration});
      loads[best] += p.duration;
    }
  }
  return loads;
}

Schedule Evaluator::decode(const Chromosome& ch) const {
  check_ids(ch);
  Schedule s;
  s.molds.resize(inst_.num_molds());
  const auto loads = mold_loads(ch, &s.molds);
  for (int m = 0; m < inst_.num_molds(); ++m) {
    if (loads[m] > inst_.horizon) throw HorizonError(m, loads[m], inst_.horizon);
  }
  s.makespan = loads.empty() ? 0 : *std::max_element(loads.begin(), loads.end());
  s.used_periods.assign(inst_.horizon, false);
  for (int t = 0; t < s.makespan; ++t) s.used_periods[t] = true;
  s.bar_requirements = bars_required(ch);
  s.objective = waste_terms(ch);
  s.objective.makespan = s.makespan;
  return s;
}

std::optional<int> Evaluator::makespan(const Chromosome& ch) const {
  const auto loads = mold_loads(ch, nullptr);
  const int worst = loads.empty() ? 0 : *std::max_element(loads.begin(), loads.end());
  if (worst > inst_.horizon) return std::nullopt;
  return worst;
}

ObjectiveTerms Evaluator::waste_terms(const Chromosome& ch) const {
  ObjectiveTerms t;
  for (const auto& g : ch.genes) {
    switch (pats_.kind(g.pattern)) {
      case PatternKind::packing:
        break;
      case PatternKind::cutting: {
        const auto& c = pats_.cutting_pattern(g.pattern);
        const Length w = c.waste * g.frequency;
        if (inst_.is_leftover(c.source_bar)) {
          t.leftover_waste += w;
        } else if (c.leftover_kind()) {
          t.new_bar_leftover_waste += w;
        } else {
          t.new_bar_waste += w;
        }
        break;
      }
      case PatternKind::overlapping:
        t.leftover_waste += pats_.overlapping_pattern(g.pattern).waste * g.frequency;
        break;
    }
  }
  return t;
}

InfeasibilityReport Evaluator::classify(const Chromosome& ch) const {
  check_ids(ch);
  InfeasibilityReport r;
  const auto produced = produced_beams(ch);
  for (std::size_t i = 0; i < demand_.size(); ++i) {
    if (produced[i] < demand_[i]) ++r.unmet_demands;
  }
  const auto used = bars_used(ch);
  for (int w = 0; w < inst_.num_bars(); ++w) {
    if (used[w] > inst_.stock[w]) ++r.exceeded_stocks;
  }
  const auto made = bars_produced(ch);
  const auto needed = bars_required(ch);
  for (int g = 0; g < inst_.num_mold_classes(); ++g) {
    if (made[g] != needed[g]) ++r.unbalanced_classes;
  }
  const auto loads = mold_loads(ch, nullptr);
  for (int load : loads) {
    if (load > inst_.horizon) ++r.overloaded_molds;
  }
  r.beam_demand = r.unmet_demands > 0;
  r.bar_stock = r.exceeded_stocks > 0;
  r.bar_balance = r.unbalanced_classes > 0;
  r.horizon = r.overloaded_molds > 0;
  return r;
}

std::optional<Evaluation> Evaluator::evaluate(const Chromosome& ch) const {
  if (!classify(ch).feasible()) return std::nullopt;
  Evaluation e;
  e.terms = waste_terms(ch);
  e.terms.makespan = *makespan(ch);
  e.fitness = weighted_objective(e.terms, inst_.weights);
  return e;
}

double Evaluator::fitness(const Chromosome& ch) const {
  const auto report = classify(ch);
  if (!report.feasible()) throw InfeasibleChromosome(report);
  return evaluate(ch)->fitness;
}

Schedule decode_schedule(const Chromosome& ch, const Instance& inst, const PatternSet& pats) {
  return Evaluator(inst, pats).decode(ch);
}

double fitness(const Chromosome& ch, const Instance& inst, const PatternSet& pats) {
  return Evaluator(inst, pats).fitness(ch);
}

InfeasibilityReport classify_infeasibility(const Chromosome& ch, const Instance& inst,
                                           const PatternSet& pats) {
  return Evaluator(inst, pats).classify(ch);
}

std::string render_gantt(const Schedule& schedule, const Instance& inst) {
  static constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string out;
  for (int m = 0; m < static_cast<int>(schedule.molds.size()); ++m) {
    std::string row(static_cast<std::size_t>(inst.horizon), '.');
    for (const auto& cast : schedule.molds[m]) {
      for (int t = cast.start; t < cast.start + cast.duration; ++t) {
        if (t >= 1 && t <= inst.horizon) row[t - 1] = kDigits[cast.pattern % 36];
      }
    }
    char head[32];
    std::snprintf(head, sizeof head, "%3d %6s |", m + 1,
                  inst.mold_lengths[m].to_string().c_str());
    out += head + row + "|\n";
  }
  return out;
}

}  // namespace beamforge
