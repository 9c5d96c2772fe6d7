#include "beamforge/patterns.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace beamforge {

std::optional<int> CuttingPattern::leftover_kind() const {
  for (int v = 0; v < static_cast<int>(leftover_counts.size()); ++v) {
    if (leftover_counts[v] > 0) return v;
  }
  return std::nullopt;
}

int CuttingPattern::total_items() const {
  return std::accumulate(item_counts.begin(), item_counts.end(), 0);
}

PatternSet::PatternSet(std::vector<PackingPattern> packing,
                       std::vector<CuttingPattern> cutting,
                       std::vector<OverlappingPattern> overlapping)
    : packing_(std::move(packing)),
      cutting_(std::move(cutting)),
      overlapping_(std::move(overlapping)) {
  PatternId next = 1;
  for (auto& p : packing_) p.id = next++;
  for (auto& p : cutting_) p.id = next++;
  for (auto& p : overlapping_) p.id = next++;
}

PatternKind PatternSet::kind(PatternId id) const {
  if (!valid(id)) throw std::out_of_range("unknown pattern id " + std::to_string(id));
  if (id <= num_packing()) return PatternKind::packing;
  if (id <= num_packing() + num_cutting()) return PatternKind::cutting;
  return PatternKind::overlapping;
}

const PackingPattern& PatternSet::packing_pattern(PatternId id) const {
  if (kind(id) != PatternKind::packing) {
    throw std::out_of_range("pattern " + std::to_string(id) + " is not a packing pattern");
  }
  return packing_[id - 1];
}

const CuttingPattern& PatternSet::cutting_pattern(PatternId id) const {
  if (kind(id) != PatternKind::cutting) {
    throw std::out_of_range("pattern " + std::to_string(id) + " is not a cutting pattern");
  }
  return cutting_[id - 1 - num_packing()];
}

const OverlappingPattern& PatternSet::overlapping_pattern(PatternId id) const {
  if (kind(id) != PatternKind::overlapping) {
    throw std::out_of_range("pattern " + std::to_string(id) +
                            " is not an overlapping pattern");
  }
  return overlapping_[id - 1 - num_packing() - num_cutting()];
}

namespace {

// Visits every count vector with sum(sizes[k] * counts[k]) <= capacity, in
// lexicographically descending order of counts.
void for_each_fill(const std::vector<Length>& sizes, Length capacity,
                   const std::function<void(const std::vector<int>&, Length)>& visit) {
  std::vector<int> counts(sizes.size(), 0);
  std::function<void(std::size_t, Length)> rec = [&](std::size_t k, Length used) {
    if (k == sizes.size()) {
      visit(counts, used);
      return;
    }
    const auto most = static_cast<int>((capacity - used).cm() / sizes[k].cm());
    for (int n = most; n >= 0; --n) {
      counts[k] = n;
      rec(k + 1, used + sizes[k] * n);
    }
    counts[k] = 0;
  };
  rec(0, Length{});
}

bool any_positive(const std::vector<int>& v) {
  return std::any_of(v.begin(), v.end(), [](int x) { return x > 0; });
}

}  // namespace

std::vector<PackingPattern> enumerate_packing_patterns(const Instance& inst,
                                                       PackingOptions options) {
  std::vector<PackingPattern> out;
  for (int c = 0; c < inst.num_beam_types(); ++c) {
    const BeamType& bt = inst.beam_types[c];
    const Length shortest = bt.shortest();
    for (int g = 0; g < inst.num_mold_classes(); ++g) {
      const Length cap = inst.distinct_mold_lengths[g];
      for_each_fill(bt.lengths, cap, [&](const std::vector<int>& counts, Length used) {
        if (!any_positive(counts)) return;
        if (options.maximal_only && !(cap - shortest < used)) return;
        out.push_back(PackingPattern{0, c, counts, g, used, bt.curing_time});
      });
    }
  }
  return out;
}

std::vector<CuttingPattern> enumerate_cutting_patterns(const Instance& inst) {
  std::vector<CuttingPattern> out;
  const int kinds = inst.num_leftover_kinds;
  for (int w = 0; w < inst.num_bars(); ++w) {
    const Length bar = inst.bar_lengths[w];
    // (leftover kind, leftover count); kind -1 means no leftover.
    std::vector<std::pair<int, int>> options{{-1, 0}};
    if (!inst.is_leftover(w)) {
      for (int v = 0; v < kinds; ++v) {
        const auto most = static_cast<int>(bar.cm() / inst.leftover_length(v).cm());
        for (int n = 1; n <= most; ++n) options.emplace_back(v, n);
      }
    }
    for (auto [v, n] : options) {
      const Length reserved = v < 0 ? Length{} : inst.leftover_length(v) * n;
      for_each_fill(inst.distinct_mold_lengths, bar - reserved,
                    [&](const std::vector<int>& items, Length used) {
                      if (!any_positive(items)) return;
                      CuttingPattern p;
                      p.source_bar = w;
                      p.item_counts = items;
                      p.leftover_counts.assign(kinds, 0);
                      if (v >= 0) p.leftover_counts[v] = n;
                      p.waste = bar - reserved - used;
                      out.push_back(std::move(p));
                    });
    }
  }
  return out;
}

std::vector<OverlappingPattern> enumerate_overlapping_patterns(const Instance& inst) {
  std::vector<OverlappingPattern> out;
  const int kinds = inst.num_leftover_kinds;
  for (int g = 0; g < inst.num_mold_classes(); ++g) {
    const Length target = inst.distinct_mold_lengths[g];
    // Ascending lexicographic order over vectors with two units spread on
    // `kinds` slots: (..,0,2) < (..,1,1) < ... < (2,0,..).
    std::vector<std::vector<int>> pairs;
    for (int a = 0; a < kinds; ++a) {
      for (int b = a; b < kinds; ++b) {
        std::vector<int> counts(kinds, 0);
        ++counts[a];
        ++counts[b];
        pairs.push_back(std::move(counts));
      }
    }
    std::sort(pairs.begin(), pairs.end());
    for (auto& counts : pairs) {
      Length total;
      for (int v = 0; v < kinds; ++v) total += inst.leftover_length(v) * counts[v];
      if (total < target + inst.overlap_loss) continue;
      out.push_back(OverlappingPattern{0, g, std::move(counts), total - target});
    }
  }
  return out;
}

PatternSet enumerate_patterns(const Instance& inst, PackingOptions options) {
  return PatternSet(enumerate_packing_patterns(inst, options),
                    enumerate_cutting_patterns(inst),
                    enumerate_overlapping_patterns(inst));
}

bool contains(const PackingPattern& p, const PackingPattern& q) {
  if (p.beam_type != q.beam_type || p.counts.size() != q.counts.size()) return false;
  for (std::size_t k = 0; k < p.counts.size(); ++k) {
    if (p.counts[k] < q.counts[k]) return false;
  }
  return true;
}

}  // namespace beamforge
