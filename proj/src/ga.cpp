#include "beamforge/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace beamforge {

GaParams resolve_params(const RelativeParams& rel, const PatternSet& pats, std::uint64_t seed) {
  const double r = std::max(1, pats.num_packing());
  auto up = [](double x) {
    return static_cast<std::int64_t>(std::ceil(x - 1e-9));
  };
  GaParams p;
  p.population_size = rel.population_size;
  p.generations = up(rel.ng_mult * r);
  p.mutation_rate = rel.mutation_rate;
  p.restart_patience = up(rel.rst_fraction * static_cast<double>(p.generations));
  p.construction_pool = static_cast<int>(up(rel.as_mult * r));
  p.crossover_kind = rel.crossover_kind;
  p.restart_elites = rel.restart_elites;
  p.seed = seed;
  return p;
}

GaParams default_params(const PatternSet& pats, std::uint64_t seed) {
  return resolve_params({}, pats, seed);
}

void validate_params(const GaParams& p) {
  if (p.population_size < 2) throw std::invalid_argument("population_size must be >= 2");
  if (p.generations < 0) throw std::invalid_argument("generations must be >= 0");
  if (!(p.mutation_rate >= 0.0 && p.mutation_rate <= 1.0)) {
    throw std::invalid_argument("mutation_rate must lie in [0, 1]");
  }
  if (p.restart_patience < 1) throw std::invalid_argument("restart_patience must be >= 1");
  if (p.construction_pool < 1) throw std::invalid_argument("construction_pool must be >= 1");
  if (p.crossover_kind != 1 && p.crossover_kind != 2) {
    throw std::invalid_argument("crossover_kind must be 1 or 2");
  }
  if (p.restart_elites < 1 || p.restart_elites >= p.population_size) {
    throw std::invalid_argument("restart_elites must lie in [1, population_size)");
  }
}

GaContext::GaContext(const Instance& inst, const PatternSet& pats) : eval_(inst, pats) {
  const int classes = inst.num_mold_classes();
  cutters_.resize(classes);
  overlappers_.resize(classes);
  for (const auto& c : pats.cutting()) {
    for (int g = 0; g < classes; ++g) {
      if (c.item_counts[g] > 0) cutters_[g].push_back(c.id);
    }
  }
  for (const auto& o : pats.overlapping()) overlappers_[o.produced_class].push_back(o.id);
}

bool GaContext::cuts_only(PatternId cut, int g) const {
  const auto& items = patterns().cutting_pattern(cut).item_counts;
  for (int k = 0; k < static_cast<int>(items.size()); ++k) {
    if ((k == g) != (items[k] > 0)) return false;
  }
  return true;
}

double Population::mean_fitness() const {
  if (members_.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& m : members_) sum += m.fitness;
  return sum / static_cast<double>(members_.size());
}

bool Population::contains(const Chromosome& ch) const { return keys_.count(ch.canonical()) > 0; }

bool Population::offer(Member m) {
  auto key = m.chromosome.canonical();
  if (keys_.count(key)) return false;
  if (members_.size() >= capacity_) {
    if (capacity_ == 0 || !(m.fitness < members_.back().fitness)) return false;
    keys_.erase(members_.back().chromosome.canonical());
    members_.pop_back();
  }
  auto pos = std::upper_bound(members_.begin(), members_.end(), m.fitness,
                              [](double f, const Member& x) { return f < x.fitness; });
  members_.insert(pos, std::move(m));
  keys_.insert(std::move(key));
  return true;
}

Population select_best_distinct(std::vector<Member> candidates, std::size_t capacity) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Member& a, const Member& b) { return a.fitness < b.fitness; });
  Population pop(capacity);
  for (auto& m : candidates) {
    if (pop.size() == capacity) break;
    pop.offer(std::move(m));
  }
  return pop;
}

namespace {

void add_uses(const PackingPattern& p, std::int64_t times, const Evaluator& eval,
              std::vector<std::int64_t>& produced) {
  for (std::size_t k = 0; k < p.counts.size(); ++k) {
    produced[eval.demand_index(p.beam_type, static_cast<int>(k))] += p.counts[k] * times;
  }
}

std::vector<PatternId> shuffled(std::vector<PatternId> ids, Rng& rng) {
  std::shuffle(ids.begin(), ids.end(), rng);
  return ids;
}

}  // namespace

std::optional<Chromosome> random_solution(const GaContext& ctx, Rng& rng) {
  const Instance& inst = ctx.instance();
  const PatternSet& pats = ctx.patterns();
  const Evaluator& eval = ctx.evaluator();
  std::vector<std::int64_t> freq(pats.size() + 1, 0);

  // Random packing patterns, each raised until its own beams are covered or
  // its mold class has no period left within the horizon.
  std::vector<std::int64_t> room(inst.num_mold_classes());
  for (int g = 0; g < inst.num_mold_classes(); ++g) {
    room[g] = static_cast<std::int64_t>(inst.molds_in_class(g).size()) * inst.horizon;
  }
  std::vector<PatternId> packing(pats.num_packing());
  std::iota(packing.begin(), packing.end(), 1);
  packing = shuffled(std::move(packing), rng);
  std::vector<std::int64_t> produced(eval.demand_entries(), 0);
  const auto& demand = eval.demand();
  std::size_t next = 0;
  while (!eval.demand_met(produced)) {
    if (next == packing.size()) return std::nullopt;
    const auto& p = pats.packing_pattern(packing[next++]);
    std::int64_t times = 0;
    for (std::size_t k = 0; k < p.counts.size(); ++k) {
      const int e = eval.demand_index(p.beam_type, static_cast<int>(k));
      if (p.counts[k] > 0 && produced[e] < demand[e]) {
        times = std::max(times, ceil_div(demand[e] - produced[e], std::int64_t{p.counts[k]}));
      }
    }
    times = std::min(times, room[p.mold_class] / p.duration);
    if (times == 0) continue;
    freq[p.id] += times;
    room[p.mold_class] -= times * p.duration;
    add_uses(p, times, eval, produced);
  }

  const int classes = inst.num_mold_classes();
  std::vector<std::int64_t> needed(classes, 0);
  for (PatternId id = 1; id <= pats.num_packing(); ++id) {
    const auto& p = pats.packing_pattern(id);
    needed[p.mold_class] += inst.beam_types[p.beam_type].bars_per_beam * freq[id];
  }

  // Per class: random cutting patterns, then random overlaps, never beyond
  // the stock or the bars still needed by any class.
  std::vector<std::int64_t> made(classes, 0);
  std::vector<std::int64_t> left = inst.stock;
  for (int g = 0; g < classes; ++g) {
    for (PatternId id : shuffled(ctx.cutters(g), rng)) {
      if (made[g] >= needed[g]) break;
      const auto& c = pats.cutting_pattern(id);
      std::int64_t times = left[c.source_bar];
      for (int k = 0; k < classes; ++k) {
        if (c.item_counts[k] > 0) times = std::min(times, (needed[k] - made[k]) / c.item_counts[k]);
      }
      if (times <= 0) continue;
      freq[id] += times;
      left[c.source_bar] -= times;
      for (int k = 0; k < classes; ++k) made[k] += c.item_counts[k] * times;
    }
    for (PatternId id : shuffled(ctx.overlappers(g), rng)) {
      if (made[g] >= needed[g]) break;
      const auto& o = pats.overlapping_pattern(id);
      std::int64_t times = needed[g] - made[g];
      for (int v = 0; v < inst.num_leftover_kinds; ++v) {
        if (o.leftover_counts[v] > 0) {
          times = std::min(times, left[inst.num_bar_kinds + v] / o.leftover_counts[v]);
        }
      }
      if (times <= 0) continue;
      freq[id] += times;
      for (int v = 0; v < inst.num_leftover_kinds; ++v) {
        left[inst.num_bar_kinds + v] -= o.leftover_counts[v] * times;
      }
      made[g] += times;
    }
  }

  Chromosome ch;
  for (PatternId id = 1; id <= pats.size(); ++id) {
    if (freq[id] > 0) ch.genes.push_back({id, freq[id]});
  }
  if (!eval.classify(ch).feasible()) return std::nullopt;
  return ch;
}

Population init_population(const GaParams& params, const GaContext& ctx, Rng& rng) {
  std::vector<Member> candidates;
  for (int n = 0; n < params.construction_pool; ++n) {
    if (auto ch = random_solution(ctx, rng)) {
      const double f = ctx.evaluator().fitness(*ch);
      candidates.push_back({std::move(*ch), f});
    }
  }
  if (candidates.empty()) {
    throw InfeasibleInstance("no feasible solution among " +
                             std::to_string(params.construction_pool) + " constructions");
  }
  return select_best_distinct(std::move(candidates), params.population_size);
}

void remove_surplus_packing(const GaContext& ctx, Chromosome& ch) {
  const PatternSet& pats = ctx.patterns();
  const Evaluator& eval = ctx.evaluator();
  std::vector<std::int64_t> produced(eval.demand_entries(), 0);
  bool fulfilled = eval.demand_met(produced);
  for (auto& gene : ch.genes) {
    if (pats.kind(gene.pattern) != PatternKind::packing) continue;
    if (fulfilled) {
      gene.frequency = 0;
      continue;
    }
    const auto& p = pats.packing_pattern(gene.pattern);
    for (std::int64_t cont = 1; cont <= gene.frequency; ++cont) {
      add_uses(p, 1, eval, produced);
      if (eval.demand_met(produced)) {
        fulfilled = true;
        gene.frequency = cont;
        break;
      }
    }
  }
}

bool fix_beam_demand(const GaContext& ctx, Chromosome& ch) {
  const Instance& inst = ctx.instance();
  const PatternSet& pats = ctx.patterns();
  const Evaluator& eval = ctx.evaluator();
  const auto& demand = eval.demand();
  auto produced = eval.produced_beams(ch);
  // Every pass covers each length some gene can produce, so a pass without
  // progress means the remaining lengths appear in no gene.
  while (!eval.demand_met(produced)) {
    bool progress = false;
    for (int c = 0; c < inst.num_beam_types(); ++c) {
      for (int k = 0; k < inst.beam_types[c].num_lengths(); ++k) {
        const int e = eval.demand_index(c, k);
        if (produced[e] >= demand[e]) continue;
        for (auto& gene : ch.genes) {
          if (pats.kind(gene.pattern) != PatternKind::packing) continue;
          const auto& p = pats.packing_pattern(gene.pattern);
          if (p.beam_type != c || p.counts[k] == 0) continue;
          const std::int64_t times =
              ceil_div(demand[e] - produced[e], std::int64_t{p.counts[k]});
          gene.frequency += times;
          add_uses(p, times, eval, produced);
          progress = true;
          break;
        }
      }
    }
    if (!progress) return false;
  }
  return true;
}

void fix_bar_stock(const GaContext& ctx, Chromosome& ch) {
  const Instance& inst = ctx.instance();
  const PatternSet& pats = ctx.patterns();
  auto used = ctx.evaluator().bars_used(ch);
  for (int w = 0; w < inst.num_bars(); ++w) {
    if (used[w] <= inst.stock[w]) continue;
    for (auto& gene : ch.genes) {
      if (pats.kind(gene.pattern) != PatternKind::cutting) continue;
      if (pats.cutting_pattern(gene.pattern).source_bar != w) continue;
      const std::int64_t cut = std::min(gene.frequency, used[w] - inst.stock[w]);
      gene.frequency -= cut;
      used[w] -= cut;
      if (used[w] <= inst.stock[w]) break;
    }
    if (!inst.is_leftover(w) || used[w] <= inst.stock[w]) continue;
    const int v = w - inst.num_bar_kinds;
    for (auto& gene : ch.genes) {
      if (pats.kind(gene.pattern) != PatternKind::overlapping) continue;
      const auto& o = pats.overlapping_pattern(gene.pattern);
      if (o.leftover_counts[v] == 0) continue;
      const std::int64_t rt = (used[w] - inst.stock[w]) / o.leftover_counts[v];
      const std::int64_t cut = std::min(gene.frequency, rt);
      gene.frequency -= cut;
      for (int u = 0; u < inst.num_leftover_kinds; ++u) {
        used[inst.num_bar_kinds + u] -= o.leftover_counts[u] * cut;
      }
      if (used[w] <= inst.stock[w]) break;
    }
  }
}

void fix_bar_balance(const GaContext& ctx, Chromosome& ch) {
  const Instance& inst = ctx.instance();
  const PatternSet& pats = ctx.patterns();
  const Evaluator& eval = ctx.evaluator();
  const auto need = eval.bars_required(ch);
  auto made = eval.bars_produced(ch);
  auto used = eval.bars_used(ch);
  const int W = inst.num_bar_kinds;
  const int V = inst.num_leftover_kinds;

  auto is_cut_of = [&](const Gene& gene, int g) {
    return pats.kind(gene.pattern) == PatternKind::cutting && ctx.cuts_only(gene.pattern, g);
  };
  auto is_overlap_of = [&](const Gene& gene, int g) {
    return pats.kind(gene.pattern) == PatternKind::overlapping &&
           pats.overlapping_pattern(gene.pattern).produced_class == g;
  };
  auto draw = [&](const OverlappingPattern& o, std::int64_t times) {
    for (int v = 0; v < V; ++v) used[W + v] += o.leftover_counts[v] * times;
  };

  for (int g = 0; g < inst.num_mold_classes(); ++g) {
    if (made[g] > need[g]) {
      for (auto& gene : ch.genes) {
        if (made[g] <= need[g]) break;
        if (!is_cut_of(gene, g)) continue;
        const auto& c = pats.cutting_pattern(gene.pattern);
        const std::int64_t items = c.item_counts[g];
        const std::int64_t cut = std::min(gene.frequency, ceil_div(made[g] - need[g], items));
        gene.frequency -= cut;
        made[g] -= cut * items;
        used[c.source_bar] -= cut;
      }
    }
    if (made[g] > need[g]) {
      for (auto& gene : ch.genes) {
        if (made[g] <= need[g]) break;
        if (!is_overlap_of(gene, g)) continue;
        const std::int64_t cut = std::min(gene.frequency, made[g] - need[g]);
        gene.frequency -= cut;
        made[g] -= cut;
        draw(pats.overlapping_pattern(gene.pattern), -cut);
      }
    }
    if (made[g] < need[g]) {
      for (auto& gene : ch.genes) {
        if (made[g] >= need[g]) break;
        if (!is_cut_of(gene, g)) continue;
        const auto& c = pats.cutting_pattern(gene.pattern);
        const std::int64_t items = c.item_counts[g];
        const std::int64_t remaining = std::max<std::int64_t>(0, inst.stock[c.source_bar] - used[c.source_bar]);
        const std::int64_t add = std::min((need[g] - made[g]) / items, remaining);
        gene.frequency += add;
        made[g] += add * items;
        used[c.source_bar] += add;
      }
    }
    if (made[g] < need[g]) {
      for (auto& gene : ch.genes) {
        if (made[g] >= need[g]) break;
        if (!is_overlap_of(gene, g)) continue;
        const auto& o = pats.overlapping_pattern(gene.pattern);
        auto fits = [&] {
          for (int v = 0; v < V; ++v) {
            if (used[W + v] + o.leftover_counts[v] > inst.stock[W + v]) return false;
          }
          return true;
        };
        while (made[g] < need[g] && fits()) {
          ++gene.frequency;
          ++made[g];
          draw(o, 1);
        }
      }
    }
  }
}

std::optional<Chromosome> repair(const GaContext& ctx, Chromosome ch) {
  const Evaluator& eval = ctx.evaluator();
  if (eval.classify(ch).beam_demand) {
    if (!fix_beam_demand(ctx, ch)) return std::nullopt;
  }
  // Also run after the demand fix so a repaired chromosome is a fixed point.
  remove_surplus_packing(ctx, ch);
  if (eval.classify(ch).bar_stock) fix_bar_stock(ctx, ch);
  if (eval.classify(ch).bar_balance) fix_bar_balance(ctx, ch);
  ch.drop_zero_genes();
  if (!eval.classify(ch).feasible()) return std::nullopt;
  return ch;
}

namespace {

// Gene order of an offspring: a's genes, then b's genes missing from a.
std::vector<PatternId> union_order(const Chromosome& a, const Chromosome& b) {
  std::vector<PatternId> ids;
  for (const auto& g : a.genes) ids.push_back(g.pattern);
  for (const auto& g : b.genes) {
    if (!a.contains(g.pattern)) ids.push_back(g.pattern);
  }
  return ids;
}

std::int64_t ceil_mean(std::int64_t x, std::int64_t y) { return ceil_div(x + y, std::int64_t{2}); }

std::optional<Chromosome> finish(const GaContext& ctx, Chromosome ch) {
  ch.drop_zero_genes();
  if (ctx.evaluator().classify(ch).feasible()) return ch;
  return repair(ctx, std::move(ch));
}

}  // namespace

Chromosome blend1(const Chromosome& a, const Chromosome& b, double mutation_rate, Rng& rng) {
  std::bernoulli_distribution zero(mutation_rate);
  Chromosome child;
  for (PatternId id : union_order(a, b)) {
    std::int64_t f = ceil_mean(a.frequency(id), b.frequency(id));
    if (zero(rng)) f = 0;
    child.genes.push_back({id, f});
  }
  child.drop_zero_genes();
  return child;
}

Chromosome blend2(const Chromosome& a, const Chromosome& b, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  Chromosome child;
  for (PatternId id : union_order(a, b)) {
    const std::int64_t fa = a.frequency(id);
    const std::int64_t fb = b.frequency(id);
    std::int64_t f = 0;
    if (a.contains(id) && b.contains(id)) {
      f = ceil_mean(fa, fb);
    } else if (coin(rng)) {
      f = fa + fb;
    }
    child.genes.push_back({id, f});
  }
  child.drop_zero_genes();
  return child;
}

std::optional<Chromosome> crossover1(const GaContext& ctx, const Chromosome& a,
                                     const Chromosome& b, double mutation_rate, Rng& rng) {
  return finish(ctx, blend1(a, b, mutation_rate, rng));
}

std::optional<Chromosome> crossover2(const GaContext& ctx, const Chromosome& a,
                                     const Chromosome& b, Rng& rng) {
  return finish(ctx, blend2(a, b, rng));
}

Chromosome swap_pattern(const Chromosome& ch, PatternId p1, PatternId p2) {
  Chromosome out = ch;
  for (auto& g : out.genes) {
    if (g.pattern == p1) g.pattern = p2;
  }
  return out;
}

Chromosome swap_random_pattern(const Chromosome& ch, const PatternSet& pats, Rng& rng) {
  std::vector<PatternId> outside;
  for (PatternId id = 1; id <= pats.size(); ++id) {
    if (!ch.contains(id)) outside.push_back(id);
  }
  if (ch.empty() || outside.empty()) {
    throw std::invalid_argument("mutation needs a gene and a pattern outside the chromosome");
  }
  std::uniform_int_distribution<std::size_t> pick_in(0, ch.genes.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_out(0, outside.size() - 1);
  const PatternId p1 = ch.genes[pick_in(rng)].pattern;
  const PatternId p2 = outside[pick_out(rng)];
  return swap_pattern(ch, p1, p2);
}

std::optional<Chromosome> mutate(const GaContext& ctx, const Chromosome& ch, Rng& rng) {
  return finish(ctx, swap_random_pattern(ch, ctx.patterns(), rng));
}

Chromosome insert_move(const Chromosome& ch, int i, int k) {
  Chromosome out = ch;
  std::rotate(out.genes.begin() + i, out.genes.begin() + i + 1, out.genes.begin() + k + 1);
  return out;
}

Chromosome local_search_insert(const GaContext& ctx, const Chromosome& ch) {
  const Evaluator& eval = ctx.evaluator();
  const PatternSet& pats = ctx.patterns();
  const auto start = eval.makespan(ch);
  if (!start) return ch;
  Chromosome best = ch;
  int best_span = *start;
  const int n = ch.size();
  std::vector<bool> packing(n);
  for (int i = 0; i < n; ++i) packing[i] = pats.kind(ch.genes[i].pattern) == PatternKind::packing;
  for (int i = 0; i + 1 < n; ++i) {
    bool passes_packing = false;
    for (int k = i + 1; k < n; ++k) {
      passes_packing = passes_packing || packing[k];
      // The timetable only changes when a packing gene moves past another.
      if (!packing[i] || !passes_packing) continue;
      const Chromosome neighbor = insert_move(ch, i, k);
      const auto span = eval.makespan(neighbor);
      if (span && *span < best_span) {
        best = neighbor;
        best_span = *span;
      }
    }
  }
  return best;
}

GaResult run_ga(const Instance& inst, const PatternSet& pats, const GaParams& params) {
  validate_params(params);
  GaContext ctx(inst, pats);
  const Evaluator& eval = ctx.evaluator();
  Rng rng(params.seed);
  GaResult result;

  Population pop = init_population(params, ctx, rng);
  result.trace.push_back({0, pop.best().fitness, pop.mean_fitness()});
  double best = pop.best().fitness;
  std::int64_t stagnant = 0;
  std::bernoulli_distribution mutation(params.mutation_rate);

  for (std::int64_t gen = 1; gen <= params.generations; ++gen) {
    // Crossover and mutation act on the raw offspring; repair runs once.
    Chromosome raw;
    if (pop.size() >= 2) {
      std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
      std::uniform_int_distribution<std::size_t> pick_other(0, pop.size() - 2);
      const std::size_t i = pick(rng);
      std::size_t j = pick_other(rng);
      if (j >= i) ++j;
      const auto& a = pop.members()[i].chromosome;
      const auto& b = pop.members()[j].chromosome;
      raw = params.crossover_kind == 1 ? blend1(a, b, params.mutation_rate, rng)
                                       : blend2(a, b, rng);
    } else {
      raw = pop.best().chromosome;
    }
    if (mutation(rng) && !raw.empty() && raw.size() < pats.size()) {
      raw = swap_random_pattern(raw, pats, rng);
    }
    std::optional<Chromosome> child = finish(ctx, std::move(raw));
    if (child) {
      const double f = eval.fitness(*child);
      pop.offer({std::move(*child), f});
    } else {
      ++result.rejections;
    }

    if (pop.best().fitness < best) {
      best = pop.best().fitness;
      stagnant = 0;
    } else if (++stagnant >= params.restart_patience) {
      std::vector<Member> pool(pop.members().begin(),
                               pop.members().begin() +
                                   std::min<std::size_t>(params.restart_elites, pop.size()));
      for (int n = 0; n < params.construction_pool; ++n) {
        if (auto ch = random_solution(ctx, rng)) {
          const double f = eval.fitness(*ch);
          pool.push_back({std::move(*ch), f});
        }
      }
      if (!pool.empty()) pop = select_best_distinct(std::move(pool), params.population_size);
      ++result.restarts;
      stagnant = 0;
    }
    result.trace.push_back({gen, pop.best().fitness, pop.mean_fitness()});
  }

  std::vector<Member> finals;
  for (const auto& m : pop.members()) {
    Chromosome improved = local_search_insert(ctx, m.chromosome);
    const double f = eval.fitness(improved);
    finals.push_back({std::move(improved), f});
  }
  pop = select_best_distinct(std::move(finals), params.population_size);
  result.best = pop.best().chromosome;
  result.fitness = pop.best().fitness;
  return result;
}

}  // namespace beamforge
