#include "beamforge/bound.hpp"

#include <algorithm>
#include <optional>

namespace beamforge {

std::vector<WasteRatio> candidate_ratios(const Instance& /*inst*/, const PatternSet& pats,
                                         int gamma) {
  std::vector<WasteRatio> out;
  for (const auto& cut : pats.cutting()) {
    const int items = cut.item_counts[gamma];
    if (items > 0) out.push_back({cut.waste.cm(), items});
  }
  for (const auto& ov : pats.overlapping()) {
    if (ov.produced_class == gamma) out.push_back({ov.waste.cm(), 1});
  }
  if (out.empty()) throw EmptyRatioSet(gamma);
  std::stable_sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BoundBreakdown lower_bound(const Instance& inst, const PatternSet& pats) {
  BoundBreakdown b;

  std::int64_t cured_cm = 0;
  std::int64_t bar_cm = 0;
  for (const auto& bt : inst.beam_types) {
    const std::int64_t len = bt.demanded_length().cm();
    cured_cm += bt.curing_time * len;
    bar_cm += bt.bars_per_beam * len;
  }
  b.makespan_lb = ceil_div(cured_cm, inst.total_mold_capacity().cm());

  // Track the minimizing class as an exact fraction (count * waste_cm / bars).
  std::optional<WasteRatio> best;
  for (int g = 0; g < inst.num_mold_classes(); ++g) {
    std::vector<WasteRatio> ratios;
    try {
      ratios = candidate_ratios(inst, pats, g);
    } catch (const EmptyRatioSet&) {
      continue;
    }
    ClassBound cb;
    cb.mold_class = g;
    cb.bar_count_lb = ceil_div(bar_cm, inst.distinct_mold_lengths[g].cm());
    cb.min_ratio = ratios.front();
    const WasteRatio term{cb.bar_count_lb * cb.min_ratio.waste_cm, cb.min_ratio.bars};
    if (!best || term < *best) best = term;
    b.per_class.push_back(cb);
  }

  if (bar_cm > 0) {
    if (!best) throw EmptyRatioSet(0);
    b.waste_lb = best->meters();
  }
  const double waste_weight =
      std::min({inst.weights[1], inst.weights[2], inst.weights[3]});
  b.total = inst.weights[0] * static_cast<double>(b.makespan_lb) + waste_weight * b.waste_lb;
  return b;
}

}  // namespace beamforge
