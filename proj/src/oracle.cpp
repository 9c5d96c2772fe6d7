#include "beamforge/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <utility>

namespace beamforge {

namespace {

constexpr double kTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// A cutting or overlapping pattern seen as a bar producer.
struct Producer {
  PatternId id = 0;
  std::vector<std::int64_t> yields;                 // per mold class
  std::vector<std::pair<int, std::int64_t>> draws;  // (bar kind, bars consumed)
  double cost = 0.0;                                // weighted waste per use
  double ratio = 0.0;                               // cost per produced bar
};

struct CutResult {
  double cost = kInf;
  std::vector<Gene> genes;
};

// A block of identical-duration uses; the decoder's loads only depend on the
// sequence of blocks, not on pattern ids.
using Block = std::pair<int, std::int64_t>;  // (duration, uses)

int simulate(const std::vector<Block>& blocks, int molds) {
  std::vector<int> loads(molds, 0);
  for (auto [duration, uses] : blocks) {
    for (std::int64_t u = 0; u < uses; ++u) {
      auto it = std::min_element(loads.begin(), loads.end());
      *it += duration;
    }
  }
  return *std::max_element(loads.begin(), loads.end());
}

class Search {
 public:
  Search(const Instance& inst, const PatternSet& pats, const OracleCaps& caps)
      : inst_(inst), pats_(pats), caps_(caps), eval_(inst, pats) {
    const int classes = inst.num_mold_classes();
    for (int g = 0; g < classes; ++g) class_size_.push_back(inst.molds_in_class(g).size());

    // Largest production still reachable from packing patterns idx.. onward.
    const int entries = eval_.demand_entries();
    const int r = pats.num_packing();
    reach_.assign(r + 1, std::vector<std::int64_t>(entries, 0));
    for (int i = r - 1; i >= 0; --i) {
      reach_[i] = reach_[i + 1];
      const auto& p = pats.packing()[i];
      for (std::size_t k = 0; k < p.counts.size(); ++k) {
        reach_[i][eval_.demand_index(p.beam_type, static_cast<int>(k))] +=
            static_cast<std::int64_t>(p.counts[k]) * caps.max_frequency;
      }
    }

    const auto& w = inst.weights;
    for (const auto& c : pats.cutting()) {
      Producer p;
      p.id = c.id;
      p.yields.assign(c.item_counts.begin(), c.item_counts.end());
      p.draws.emplace_back(c.source_bar, 1);
      const double lambda = inst.is_leftover(c.source_bar) ? w[3]
                            : c.leftover_kind()            ? w[2]
                                                           : w[1];
      p.cost = lambda * c.waste.meters();
      p.ratio = p.cost / c.total_items();
      producers_.push_back(std::move(p));
    }
    for (const auto& o : pats.overlapping()) {
      Producer p;
      p.id = o.id;
      p.yields.assign(classes, 0);
      p.yields[o.produced_class] = 1;
      for (int v = 0; v < inst.num_leftover_kinds; ++v) {
        if (o.leftover_counts[v] > 0) {
          p.draws.emplace_back(inst.num_bar_kinds + v, o.leftover_counts[v]);
        }
      }
      p.cost = w[3] * o.waste.meters();
      p.ratio = p.cost;
      producers_.push_back(std::move(p));
    }
    std::stable_sort(producers_.begin(), producers_.end(),
                     [](const Producer& a, const Producer& b) { return a.ratio < b.ratio; });

    const int n = static_cast<int>(producers_.size());
    cheapest_.assign(n + 1, std::vector<double>(classes, kInf));
    for (int i = n - 1; i >= 0; --i) {
      cheapest_[i] = cheapest_[i + 1];
      for (int g = 0; g < classes; ++g) {
        if (producers_[i].yields[g] > 0) {
          cheapest_[i][g] = std::min(cheapest_[i][g], producers_[i].ratio);
        }
      }
    }
  }

  OracleResult run() {
    freq_.assign(pats_.num_packing(), 0);
    produced_.assign(eval_.demand_entries(), 0);
    load_.assign(inst_.num_mold_classes(), 0);
    bars_.assign(inst_.num_mold_classes(), 0);
    pack(0, 0);
    OracleResult out;
    out.nodes = nodes_;
    if (best_) {
      out.value = eval_.fitness(*best_);
      out.best = std::move(best_);
    }
    return out;
  }

 private:
  void tick() {
    if (++nodes_ > caps_.node_budget) throw BudgetExceeded(caps_.node_budget);
  }

  bool beaten(double lb) const { return best_ && lb >= best_value_ - kTol; }

  // Makespan implied by the class loads plus the cheapest conceivable waste
  // for the bars already required; both only grow deeper in the tree.
  double partial_lb() const {
    int worst = 0;
    double waste = 0.0;
    for (std::size_t g = 0; g < load_.size(); ++g) {
      worst = std::max(worst, static_cast<int>(ceil_div(load_[g], class_size_[g])));
      if (bars_[g] > 0) waste += bars_[g] * cheapest_[0][g];
    }
    return inst_.weights[0] * worst + waste;
  }

  void pack(int idx, int genes) {
    tick();
    const double lb = partial_lb();
    if (lb == kInf || beaten(lb)) return;
    for (std::size_t e = 0; e < produced_.size(); ++e) {
      if (produced_[e] + reach_[idx][e] < eval_.demand()[e]) return;
    }
    if (idx == pats_.num_packing()) {
      leaf(genes);
      return;
    }
    const auto& p = pats_.packing()[idx];
    const std::int64_t room =
        static_cast<std::int64_t>(class_size_[p.mold_class]) * inst_.horizon -
        load_[p.mold_class];
    std::int64_t most = genes < caps_.max_genes ? std::min<std::int64_t>(caps_.max_frequency,
                                                                         room / p.duration)
                                                : 0;
    for (std::int64_t f = most; f >= 0; --f) {
      freq_[idx] = f;
      apply(p, f);
      pack(idx + 1, genes + (f > 0 ? 1 : 0));
      apply(p, -f);
    }
    freq_[idx] = 0;
  }

  void apply(const PackingPattern& p, std::int64_t f) {
    load_[p.mold_class] += p.duration * f;
    bars_[p.mold_class] += inst_.beam_types[p.beam_type].bars_per_beam * f;
    for (std::size_t k = 0; k < p.counts.size(); ++k) {
      produced_[eval_.demand_index(p.beam_type, static_cast<int>(k))] += p.counts[k] * f;
    }
  }

  void leaf(int genes) {
    const int classes = inst_.num_mold_classes();
    std::vector<std::int64_t> need(classes, 0);
    std::vector<std::vector<Gene>> by_class(classes);
    for (int i = 0; i < pats_.num_packing(); ++i) {
      if (freq_[i] == 0) continue;
      const auto& p = pats_.packing()[i];
      need[p.mold_class] += inst_.beam_types[p.beam_type].bars_per_beam * freq_[i];
      by_class[p.mold_class].push_back({p.id, freq_[i]});
    }

    int makespan = 0;
    std::vector<Gene> order;
    for (int g = 0; g < classes; ++g) {
      if (by_class[g].empty()) continue;
      auto [span, genes_in_order] = class_order(g, by_class[g]);
      makespan = std::max(makespan, span);
      order.insert(order.end(), genes_in_order.begin(), genes_in_order.end());
    }
    const double base = inst_.weights[0] * makespan;
    if (beaten(base)) return;

    const CutResult& cut = cheapest_cuts(need, caps_.max_genes - genes);
    if (cut.cost == kInf || beaten(base + cut.cost)) return;
    best_value_ = base + cut.cost;
    Chromosome ch;
    ch.genes = std::move(order);
    ch.genes.insert(ch.genes.end(), cut.genes.begin(), cut.genes.end());
    best_ = std::move(ch);
  }

  // Minimum makespan of one class over all orders of its genes, with the
  // genes arranged in a minimizing order.
  std::pair<int, std::vector<Gene>> class_order(int g, const std::vector<Gene>& genes) {
    std::vector<Block> key;
    for (const auto& gene : genes) {
      key.emplace_back(pats_.packing_pattern(gene.pattern).duration, gene.frequency);
    }
    std::sort(key.begin(), key.end());
    auto it = order_cache_.find({g, key});
    if (it == order_cache_.end()) {
      std::vector<Block> perm = key;
      std::vector<Block> best_perm = key;
      int best = std::numeric_limits<int>::max();
      do {
        tick();
        const int span = simulate(perm, static_cast<int>(class_size_[g]));
        if (span < best) {
          best = span;
          best_perm = perm;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      it = order_cache_.emplace(std::make_pair(g, key), std::make_pair(best, best_perm)).first;
    }
    const auto& [span, blocks] = it->second;
    std::vector<Gene> pool = genes;
    std::vector<Gene> ordered;
    for (const auto& block : blocks) {
      auto match = std::find_if(pool.begin(), pool.end(), [&](const Gene& gene) {
        return gene.frequency == block.second &&
               pats_.packing_pattern(gene.pattern).duration == block.first;
      });
      ordered.push_back(*match);
      pool.erase(match);
    }
    return {span, ordered};
  }

  // Cheapest weighted waste of producing exactly `need` bars per class.
  const CutResult& cheapest_cuts(const std::vector<std::int64_t>& need, int budget) {
    auto key = std::make_pair(need, budget);
    auto it = cut_cache_.find(key);
    if (it != cut_cache_.end()) return it->second;
    cut_best_ = CutResult{};
    cut_freq_.assign(producers_.size(), 0);
    stock_left_ = inst_.stock;
    cut_need_ = need;
    cut(0, budget, 0.0);
    return cut_cache_.emplace(std::move(key), std::move(cut_best_)).first->second;
  }

  void cut(std::size_t idx, int budget, double cost) {
    tick();
    bool done = true;
    double lb = cost;
    for (std::size_t g = 0; g < cut_need_.size(); ++g) {
      if (cut_need_[g] == 0) continue;
      done = false;
      if (cheapest_[idx][g] == kInf) return;
      lb += cut_need_[g] * cheapest_[idx][g];
    }
    if (done) {
      if (cost < cut_best_.cost - kTol) {
        cut_best_.cost = cost;
        cut_best_.genes.clear();
        for (std::size_t i = 0; i < producers_.size(); ++i) {
          if (cut_freq_[i] > 0) cut_best_.genes.push_back({producers_[i].id, cut_freq_[i]});
        }
        std::sort(cut_best_.genes.begin(), cut_best_.genes.end());
      }
      return;
    }
    if (idx == producers_.size() || budget == 0 || lb >= cut_best_.cost - kTol) return;

    const Producer& p = producers_[idx];
    std::int64_t most = caps_.max_frequency;
    bool useful = false;
    for (std::size_t g = 0; g < p.yields.size(); ++g) {
      if (p.yields[g] == 0) continue;
      useful = true;
      most = std::min(most, cut_need_[g] / p.yields[g]);
    }
    for (auto [bar, count] : p.draws) most = std::min(most, stock_left_[bar] / count);
    if (!useful) most = 0;

    for (std::int64_t f = most; f >= 1; --f) {
      shift(p, f);
      cut_freq_[idx] = f;
      cut(idx + 1, budget - 1, cost + p.cost * f);
      shift(p, -f);
    }
    cut_freq_[idx] = 0;
    cut(idx + 1, budget, cost);
  }

  void shift(const Producer& p, std::int64_t f) {
    for (std::size_t g = 0; g < p.yields.size(); ++g) cut_need_[g] -= p.yields[g] * f;
    for (auto [bar, count] : p.draws) stock_left_[bar] -= count * f;
  }

  const Instance& inst_;
  const PatternSet& pats_;
  const OracleCaps& caps_;
  Evaluator eval_;
  std::vector<std::size_t> class_size_;
  std::vector<std::vector<std::int64_t>> reach_;
  std::vector<Producer> producers_;
  std::vector<std::vector<double>> cheapest_;
  std::int64_t nodes_ = 0;

  std::vector<std::int64_t> freq_;
  std::vector<std::int64_t> produced_;
  std::vector<std::int64_t> load_;
  std::vector<std::int64_t> bars_;
  std::optional<Chromosome> best_;
  double best_value_ = kInf;

  std::map<std::pair<int, std::vector<Block>>, std::pair<int, std::vector<Block>>> order_cache_;
  std::map<std::pair<std::vector<std::int64_t>, int>, CutResult> cut_cache_;
  CutResult cut_best_;
  std::vector<std::int64_t> cut_freq_;
  std::vector<std::int64_t> stock_left_;
  std::vector<std::int64_t> cut_need_;
};

}  // namespace

OracleResult exhaustive_optimum(const Instance& inst, const PatternSet& pats,
                                const OracleCaps& caps) {
  return Search(inst, pats, caps).run();
}

}  // namespace beamforge
