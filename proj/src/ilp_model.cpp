#include "beamforge/ilp_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace beamforge {

namespace {

std::string join_name(std::string_view prefix, std::initializer_list<int> parts) {
  std::string out(prefix);
  for (int p : parts) {
    out += '_';
    out += std::to_string(p);
  }
  return out;
}

}  // namespace

int IlpModel::count(VarKind kind) const {
  return static_cast<int>(
      std::count_if(vars.begin(), vars.end(), [kind](const Variable& v) { return v.kind == kind; }));
}

double IlpModel::coefficient(const ObjectiveTerm& term) const {
  const double amount = static_cast<double>(term.amount);
  return term.lambda == 0 ? weights[0] * amount : weights[term.lambda] * amount / 100.0;
}

std::optional<int> IlpModel::x_var(PatternId pattern, int mold, int period) const {
  if (mold < 1 || mold > num_molds || period < 1 || period > horizon) return std::nullopt;
  const auto& q = admissible[mold - 1];
  auto it = std::find(q.begin(), q.end(), pattern);
  if (it == q.end()) return std::nullopt;
  return x_first[mold - 1] + static_cast<int>(it - q.begin()) * horizon + period - 1;
}

std::optional<int> IlpModel::cut_var(PatternId pattern) const {
  const int k = pattern - first_cut_id;
  if (k < 0 || k >= static_cast<int>(cut_vars.size())) return std::nullopt;
  return cut_vars[k];
}

std::optional<int> IlpModel::overlap_var(PatternId pattern) const {
  const int k = pattern - first_overlap_id;
  if (k < 0 || k >= static_cast<int>(overlap_vars.size())) return std::nullopt;
  return overlap_vars[k];
}

IlpModel build_model(const Instance& inst, const PatternSet& pats) {
  IlpModel model;
  const int T = inst.horizon;
  const int M = inst.num_molds();
  model.horizon = T;
  model.num_molds = M;
  model.weights = inst.weights;

  // Q*(m) holds the packing patterns cast in the mold's own class.
  model.admissible.resize(M);
  for (int m = 0; m < M; ++m) {
    model.admissible[m].push_back(0);
    for (const auto& p : pats.packing()) {
      if (p.mold_class == inst.mold_class(m)) model.admissible[m].push_back(p.id);
    }
  }
  auto duration = [&](PatternId i) { return i == 0 ? 1 : pats.packing_pattern(i).duration; };

  for (int m = 0; m < M; ++m) {
    model.x_first.push_back(static_cast<int>(model.vars.size()));
    for (PatternId i : model.admissible[m]) {
      for (int t = 1; t <= T; ++t) {
        Variable v;
        v.kind = VarKind::x;
        v.name = join_name("x", {i, m + 1, t});
        v.pattern = i;
        v.mold = m + 1;
        v.period = t;
        v.binary = true;
        v.fixed_zero = i != 0 && t > T - duration(i) + 1;
        model.vars.push_back(std::move(v));
      }
    }
  }
  model.z_first = static_cast<int>(model.vars.size());
  for (int t = 1; t <= T; ++t) {
    Variable v;
    v.kind = VarKind::z;
    v.name = join_name("z", {t});
    v.period = t;
    v.binary = true;
    model.objective.push_back({static_cast<int>(model.vars.size()), 0, 1});
    model.vars.push_back(std::move(v));
  }
  model.first_cut_id = pats.num_packing() + 1;
  for (const auto& c : pats.cutting()) {
    Variable v;
    v.pattern = c.id;
    v.bar = c.source_bar + 1;
    int lambda = inst.is_leftover(c.source_bar) ? 3 : 1;
    if (auto left = c.leftover_kind()) {
      v.kind = VarKind::yl;
      v.leftover = *left + 1;
      v.name = join_name("yl", {c.id, v.bar, v.leftover});
      lambda = 2;
    } else {
      v.kind = VarKind::y;
      v.name = join_name("y", {c.id, v.bar});
    }
    model.cut_vars.push_back(static_cast<int>(model.vars.size()));
    model.objective.push_back({static_cast<int>(model.vars.size()), lambda, c.waste.cm()});
    model.vars.push_back(std::move(v));
  }
  model.first_overlap_id = pats.num_packing() + pats.num_cutting() + 1;
  for (const auto& o : pats.overlapping()) {
    Variable v;
    v.kind = VarKind::o;
    v.pattern = o.id;
    v.name = join_name("o", {o.id});
    model.overlap_vars.push_back(static_cast<int>(model.vars.size()));
    model.objective.push_back({static_cast<int>(model.vars.size()), 3, o.waste.cm()});
    model.vars.push_back(std::move(v));
  }

  auto x = [&](PatternId i, int m, int t) { return *model.x_var(i, m + 1, t); };
  auto add_row = [&](std::string group, std::string name, std::vector<Term> terms, Sense sense,
                     std::int64_t rhs) {
    model.rows.push_back({std::move(group), std::move(name), std::move(terms), sense, rhs});
  };

  // (2) at most one pattern per mold and period.
  for (int m = 0; m < M; ++m) {
    for (int t = 1; t <= T; ++t) {
      std::vector<Term> terms;
      for (PatternId i : model.admissible[m]) terms.push_back({x(i, m, t), 1});
      add_row("2", join_name("c2", {m + 1, t}), std::move(terms), Sense::le, 1);
    }
  }
  // (3) beam demand.
  for (int c = 0; c < inst.num_beam_types(); ++c) {
    const auto& bt = inst.beam_types[c];
    for (int k = 0; k < bt.num_lengths(); ++k) {
      std::vector<Term> terms;
      for (int m = 0; m < M; ++m) {
        for (PatternId i : model.admissible[m]) {
          if (i == 0) continue;
          const auto& p = pats.packing_pattern(i);
          if (p.beam_type != c || p.counts[k] == 0) continue;
          for (int t = 1; t <= T - p.duration + 1; ++t) terms.push_back({x(i, m, t), p.counts[k]});
        }
      }
      add_row("3", join_name("c3", {c + 1, k + 1}), std::move(terms), Sense::ge, bt.demands[k]);
    }
  }
  // (4) a pattern started at t is followed by E - 1 continuation periods.
  // Rows are vacuous for single-period patterns and are not emitted.
  for (int m = 0; m < M; ++m) {
    for (PatternId i : model.admissible[m]) {
      if (i == 0) continue;
      const int E = duration(i);
      if (E <= 1) continue;
      for (int t = 1; t <= T - E + 1; ++t) {
        std::vector<Term> terms{{x(i, m, t), E - 1}};
        for (int a = 1; a <= E - 1; ++a) terms.push_back({x(0, m, t + a), -1});
        add_row("4", join_name("c4", {i, m + 1, t}), std::move(terms), Sense::le, 0);
      }
    }
  }
  // (5) no continuation in the first period.
  for (int m = 0; m < M; ++m) {
    add_row("5", join_name("c5", {m + 1}), {{x(0, m, 1), 1}}, Sense::eq, 0);
  }
  // (6) continuation only after a pattern still curing.
  const int R = inst.max_curing_time();
  for (int m = 0; m < M; ++m) {
    for (int t = 2; t <= T; ++t) {
      std::vector<Term> terms{{x(0, m, t), 1}};
      for (int g = 2; g <= R; ++g) {
        if (t - g + 1 < 1) break;
        for (PatternId i : model.admissible[m]) {
          if (i != 0 && duration(i) >= g) terms.push_back({x(i, m, t - g + 1), -1});
        }
      }
      add_row("6", join_name("c6", {m + 1, t}), std::move(terms), Sense::le, 0);
    }
  }
  // (7) z_t marks periods in use.
  for (int t = 1; t <= T; ++t) {
    std::vector<Term> terms{{model.z_var(t), M}};
    for (int m = 0; m < M; ++m) {
      for (PatternId i : model.admissible[m]) terms.push_back({x(i, m, t), -1});
    }
    add_row("7", join_name("c7", {t}), std::move(terms), Sense::ge, 0);
  }
  // (8) no idle period between uses of a mold.
  for (int m = 0; m < M; ++m) {
    for (int t = 1; t < T; ++t) {
      std::vector<Term> terms;
      for (PatternId i : model.admissible[m]) terms.push_back({x(i, m, t), 1});
      for (PatternId i : model.admissible[m]) terms.push_back({x(i, m, t + 1), -1});
      add_row("8", join_name("c8", {m + 1, t}), std::move(terms), Sense::ge, 0);
    }
  }
  // (9a) leftover stock.
  for (int v = 0; v < inst.num_leftover_kinds; ++v) {
    const int w = inst.num_bar_kinds + v;
    std::vector<Term> terms;
    for (const auto& c : pats.cutting()) {
      if (c.source_bar == w) terms.push_back({*model.cut_var(c.id), 1});
    }
    for (const auto& o : pats.overlapping()) {
      if (o.leftover_counts[v] > 0) terms.push_back({*model.overlap_var(o.id), o.leftover_counts[v]});
    }
    add_row("9a", join_name("c9a", {w + 1}), std::move(terms), Sense::le, inst.stock[w]);
  }
  // (9b) new bar stock.
  for (int w = 0; w < inst.num_bar_kinds; ++w) {
    std::vector<Term> terms;
    for (const auto& c : pats.cutting()) {
      if (c.source_bar == w) terms.push_back({*model.cut_var(c.id), 1});
    }
    add_row("9b", join_name("c9b", {w + 1}), std::move(terms), Sense::le, inst.stock[w]);
  }
  // (10) bars produced match bars consumed by the molds of each class.
  for (int g = 0; g < inst.num_mold_classes(); ++g) {
    std::vector<Term> terms;
    for (const auto& c : pats.cutting()) {
      if (c.item_counts[g] > 0) terms.push_back({*model.cut_var(c.id), c.item_counts[g]});
    }
    for (const auto& o : pats.overlapping()) {
      if (o.produced_class == g) terms.push_back({*model.overlap_var(o.id), 1});
    }
    for (int m : inst.molds_in_class(g)) {
      for (int t = 1; t <= T; ++t) {
        for (PatternId i : model.admissible[m]) {
          if (i == 0) continue;
          const int D = inst.beam_types[pats.packing_pattern(i).beam_type].bars_per_beam;
          if (D > 0) terms.push_back({x(i, m, t), -D});
        }
      }
    }
    add_row("10", join_name("c10", {g + 1}), std::move(terms), Sense::eq, 0);
  }
  return model;
}

std::vector<Violation> check_assignment(const IlpModel& model, const Assignment& a) {
  if (a.size() != model.vars.size()) {
    throw std::invalid_argument("assignment has " + std::to_string(a.size()) +
                                " values, model has " + std::to_string(model.vars.size()) +
                                " variables");
  }
  std::vector<Violation> out;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const auto& v = model.vars[j];
    const bool bad = a[j] < 0 || (v.binary && a[j] > 1) || (v.fixed_zero && a[j] != 0);
    if (bad) out.push_back({"domain", v.name, a[j], v.fixed_zero ? 0 : (v.binary ? 1 : 0)});
  }
  for (const auto& row : model.rows) {
    std::int64_t lhs = 0;
    for (const auto& term : row.terms) lhs += term.coef * a[term.var];
    const bool ok = row.sense == Sense::le   ? lhs <= row.rhs
                    : row.sense == Sense::ge ? lhs >= row.rhs
                                             : lhs == row.rhs;
    if (!ok) out.push_back({row.group, row.name, lhs, row.rhs});
  }
  return out;
}

ObjectiveTerms objective_terms(const IlpModel& model, const Assignment& a) {
  ObjectiveTerms t;
  for (const auto& term : model.objective) {
    const std::int64_t amount = term.amount * a.at(term.var);
    switch (term.lambda) {
      case 0:
        t.makespan += amount;
        break;
      case 1:
        t.new_bar_waste += Length::from_cm(amount);
        break;
      case 2:
        t.new_bar_leftover_waste += Length::from_cm(amount);
        break;
      default:
        t.leftover_waste += Length::from_cm(amount);
        break;
    }
  }
  return t;
}

double objective_value(const IlpModel& model, const Assignment& a) {
  return weighted_objective(objective_terms(model, a), model.weights);
}

Assignment induce_assignment(const IlpModel& model, const Chromosome& ch, const Instance& inst,
                             const PatternSet& pats) {
  const Schedule s = decode_schedule(ch, inst, pats);
  Assignment a(model.vars.size(), 0);
  for (int m = 0; m < static_cast<int>(s.molds.size()); ++m) {
    for (const auto& cast : s.molds[m]) {
      const auto var = model.x_var(cast.pattern, m + 1, cast.start);
      if (!var) throw std::invalid_argument("pattern not admissible for mold");
      a[*var] = 1;
      for (int t = cast.start + 1; t < cast.start + cast.duration; ++t) {
        a[*model.x_var(0, m + 1, t)] = 1;
      }
    }
  }
  for (int t = 1; t <= s.makespan; ++t) a[model.z_var(t)] = 1;
  for (const auto& g : ch.genes) {
    if (auto var = model.cut_var(g.pattern)) a[*var] += g.frequency;
    if (auto var = model.overlap_var(g.pattern)) a[*var] += g.frequency;
  }
  return a;
}

LpProblem to_lp_problem(const IlpModel& model) {
  LpProblem lp;
  for (const auto& term : model.objective) {
    lp.objective.push_back({model.coefficient(term), model.vars[term.var].name});
  }
  for (const auto& row : model.rows) {
    LpRow r{row.name, {}, row.sense, static_cast<double>(row.rhs)};
    for (const auto& term : row.terms) {
      r.terms.push_back({static_cast<double>(term.coef), model.vars[term.var].name});
    }
    // The format needs at least one variable on the left.
    if (r.terms.empty()) r.terms.push_back({0.0, model.vars[model.z_var(1)].name});
    lp.rows.push_back(std::move(r));
  }
  for (const auto& v : model.vars) {
    if (v.fixed_zero) lp.fixed_zero.push_back(v.name);
    (v.binary ? lp.binaries : lp.generals).push_back(v.name);
  }
  return lp;
}

namespace {

std::string number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_terms(std::ostringstream& os, const std::vector<LpTerm>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    const bool negative = std::signbit(t.coef);
    if (first) {
      if (negative) os << "- ";
    } else {
      os << (negative ? " - " : " + ");
    }
    os << number(negative ? -t.coef : t.coef) << ' ' << t.var;
    first = false;
  }
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::le:
      return "<=";
    case Sense::ge:
      return ">=";
    case Sense::eq:
      return "=";
  }
  return "=";
}

}  // namespace

std::string emit_lp(const IlpModel& model) {
  const LpProblem lp = to_lp_problem(model);
  std::ostringstream os;
  os << "Minimize\n obj: ";
  write_terms(os, lp.objective);
  os << "\nSubject To\n";
  for (const auto& row : lp.rows) {
    os << ' ' << row.name << ": ";
    write_terms(os, row.terms);
    os << ' ' << sense_text(row.sense) << ' ' << number(row.rhs) << '\n';
  }
  os << "Bounds\n";
  for (const auto& name : lp.fixed_zero) os << ' ' << name << " = 0\n";
  os << "Generals\n";
  for (const auto& name : lp.generals) os << ' ' << name << '\n';
  os << "Binaries\n";
  for (const auto& name : lp.binaries) os << ' ' << name << '\n';
  os << "End\n";
  return os.str();
}

namespace {

enum class Section { none, objective, constraints, bounds, generals, binaries, end };

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

double parse_number(const std::string& tok, std::size_t offset) {
  double value = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    throw ParseError("expected a number, got '" + tok + "'", offset);
  }
  return value;
}

// "[-] c v (+|- c v)*" starting at tokens[from]; stops at a sense token.
std::size_t parse_terms(const std::vector<std::string>& toks, std::size_t from,
                        std::vector<LpTerm>& out, std::size_t offset) {
  std::size_t i = from;
  bool first = true;
  while (i < toks.size()) {
    const auto& tok = toks[i];
    if (tok == "<=" || tok == ">=" || tok == "=") break;
    double sign = 1.0;
    if (tok == "+" || tok == "-") {
      sign = tok == "-" ? -1.0 : 1.0;
      ++i;
    } else if (!first) {
      throw ParseError("expected '+' or '-' before '" + tok + "'", offset);
    }
    if (i + 1 >= toks.size()) throw ParseError("truncated term", offset);
    out.push_back({sign * parse_number(toks[i], offset), toks[i + 1]});
    i += 2;
    first = false;
  }
  return i;
}

}  // namespace

LpProblem parse_lp(std::string_view text) {
  LpProblem lp;
  Section section = Section::none;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(offset, end - offset);
    const std::size_t here = offset;
    offset = end + 1;

    const auto toks = split_ws(line);
    if (toks.empty() || toks[0].starts_with("\\")) continue;
    std::string head;
    for (const auto& t : toks) head += (head.empty() ? "" : " ") + t;
    std::transform(head.begin(), head.end(), head.begin(), ::tolower);
    if (head == "minimize") {
      section = Section::objective;
      continue;
    }
    if (head == "subject to") {
      section = Section::constraints;
      continue;
    }
    if (head == "bounds") {
      section = Section::bounds;
      continue;
    }
    if (head == "generals") {
      section = Section::generals;
      continue;
    }
    if (head == "binaries") {
      section = Section::binaries;
      continue;
    }
    if (head == "end") {
      section = Section::end;
      continue;
    }

    switch (section) {
      case Section::objective: {
        if (toks[0] != "obj:") throw ParseError("objective must be named 'obj'", here);
        parse_terms(toks, 1, lp.objective, here);
        break;
      }
      case Section::constraints: {
        if (!toks[0].ends_with(':')) throw ParseError("constraint without a name", here);
        LpRow row;
        row.name = toks[0].substr(0, toks[0].size() - 1);
        const std::size_t i = parse_terms(toks, 1, row.terms, here);
        if (i + 2 != toks.size()) throw ParseError("malformed constraint", here);
        row.sense = toks[i] == "<=" ? Sense::le : toks[i] == ">=" ? Sense::ge : Sense::eq;
        row.rhs = parse_number(toks[i + 1], here);
        lp.rows.push_back(std::move(row));
        break;
      }
      case Section::bounds:
        if (toks.size() != 3 || toks[1] != "=" || parse_number(toks[2], here) != 0.0) {
          throw ParseError("only 'var = 0' bounds are supported", here);
        }
        lp.fixed_zero.push_back(toks[0]);
        break;
      case Section::generals:
        lp.generals.insert(lp.generals.end(), toks.begin(), toks.end());
        break;
      case Section::binaries:
        lp.binaries.insert(lp.binaries.end(), toks.begin(), toks.end());
        break;
      case Section::none:
      case Section::end:
        throw ParseError("text outside of a section", here);
    }
  }
  if (section != Section::end) throw ParseError("missing End", text.size());
  return lp;
}

}  // namespace beamforge
