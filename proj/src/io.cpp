#include "beamforge/io.hpp"

#include <charconv>
#include <cmath>

#include "json.hpp"

namespace beamforge {

using nlohmann::ordered_json;

namespace {

// Keeps format_number's text when the document is dumped.
ordered_json number(double x) { return ordered_json::parse(format_number(x)); }

ordered_json meters(Length l) { return number(l.meters()); }

}  // namespace

std::string format_number(double x) {
  double r = std::round(x * 1e9) / 1e9;
  if (r == 0.0) r = 0.0;  // drops the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, r);
  return std::string(buf, res.ptr);
}

std::string patterns_json(const PatternSet& pats) {
  ordered_json doc;
  ordered_json packing = ordered_json::array();
  for (const auto& p : pats.packing()) {
    ordered_json j;
    j["id"] = p.id;
    j["beam_type"] = p.beam_type + 1;
    j["counts"] = p.counts;
    j["mold_class"] = p.mold_class + 1;
    j["used_capacity"] = meters(p.used_capacity);
    j["duration"] = p.duration;
    packing.push_back(std::move(j));
  }
  ordered_json cutting = ordered_json::array();
  for (const auto& c : pats.cutting()) {
    ordered_json j;
    j["id"] = c.id;
    j["source_bar"] = c.source_bar + 1;
    j["item_counts"] = c.item_counts;
    j["leftover_counts"] = c.leftover_counts;
    j["waste"] = meters(c.waste);
    cutting.push_back(std::move(j));
  }
  ordered_json overlapping = ordered_json::array();
  for (const auto& o : pats.overlapping()) {
    ordered_json j;
    j["id"] = o.id;
    j["produced_class"] = o.produced_class + 1;
    j["leftover_counts"] = o.leftover_counts;
    j["waste"] = meters(o.waste);
    overlapping.push_back(std::move(j));
  }
  doc["packing"] = std::move(packing);
  doc["cutting"] = std::move(cutting);
  doc["overlapping"] = std::move(overlapping);
  return doc.dump(2) + "\n";
}

std::string bound_json(const BoundBreakdown& bound) {
  ordered_json doc;
  doc["makespan_lb"] = bound.makespan_lb;
  doc["waste_lb"] = number(bound.waste_lb);
  doc["total"] = number(bound.total);
  return doc.dump() + "\n";
}

std::string solution_json(const Chromosome& ch, const Instance& inst, const PatternSet& pats) {
  const Evaluator eval(inst, pats);
  const double objective = eval.fitness(ch);
  const Schedule schedule = eval.decode(ch);
  ordered_json doc;
  ordered_json genes = ordered_json::array();
  for (const auto& g : ch.genes) genes.push_back({g.pattern, g.frequency});
  doc["genes"] = std::move(genes);
  doc["makespan"] = schedule.makespan;
  doc["objective"] = number(objective);
  const ObjectiveTerms& t = schedule.objective;
  doc["breakdown"] = {{"makespan", t.makespan},
                      {"new_bar_waste", meters(t.new_bar_waste)},
                      {"new_bar_leftover_waste", meters(t.new_bar_leftover_waste)},
                      {"leftover_waste", meters(t.leftover_waste)}};
  ordered_json gantt = ordered_json::array();
  for (const auto& mold : schedule.molds) {
    ordered_json casts = ordered_json::array();
    for (const auto& c : mold) {
      casts.push_back({{"pattern", c.pattern}, {"start", c.start}, {"duration", c.duration}});
    }
    gantt.push_back(std::move(casts));
  }
  doc["gantt"] = std::move(gantt);
  return doc.dump(2) + "\n";
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::string out = "generation,best_fitness,mean_fitness\n";
  for (const auto& p : trace) {
    out += std::to_string(p.generation) + "," + format_number(p.best_fitness) + "," +
           format_number(p.mean_fitness) + "\n";
  }
  return out;
}

}  // namespace beamforge
