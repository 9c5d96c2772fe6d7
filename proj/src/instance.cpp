#include "beamforge/instance.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "json.hpp"

namespace beamforge {

using nlohmann::json;
using nlohmann::ordered_json;

Length BeamType::shortest() const {
  return *std::min_element(lengths.begin(), lengths.end());
}

Length BeamType::demanded_length() const {
  Length total;
  for (std::size_t k = 0; k < lengths.size() && k < demands.size(); ++k) {
    total += lengths[k] * demands[k];
  }
  return total;
}

int Instance::max_curing_time() const {
  int r = 0;
  for (const auto& bt : beam_types) r = std::max(r, bt.curing_time);
  return r;
}

Length Instance::total_mold_capacity() const {
  Length total;
  for (Length l : mold_lengths) total += l;
  return total;
}

int Instance::mold_class(int m) const {
  auto it = std::lower_bound(distinct_mold_lengths.begin(),
                             distinct_mold_lengths.end(), mold_lengths[m]);
  return static_cast<int>(it - distinct_mold_lengths.begin());
}

std::vector<int> Instance::molds_in_class(int gamma) const {
  std::vector<int> out;
  for (int m = 0; m < num_molds(); ++m) {
    if (mold_lengths[m] == distinct_mold_lengths[gamma]) out.push_back(m);
  }
  return out;
}

int Instance::total_demand_entries() const {
  int n = 0;
  for (const auto& bt : beam_types) n += bt.num_lengths();
  return n;
}

void Instance::refresh_mold_classes() {
  distinct_mold_lengths = mold_lengths;
  std::sort(distinct_mold_lengths.begin(), distinct_mold_lengths.end());
  distinct_mold_lengths.erase(
      std::unique(distinct_mold_lengths.begin(), distinct_mold_lengths.end()),
      distinct_mold_lengths.end());
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error("invalid instance: " + join(violations)),
      violations_(std::move(violations)) {}

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> v;
  if (inst.horizon < 1) v.push_back("horizon must be >= 1");
  if (inst.beam_types.empty()) v.push_back("at least one beam type is required");
  if (inst.mold_lengths.empty()) v.push_back("at least one mold is required");
  if (inst.num_bar_kinds < 1) v.push_back("at least one new bar kind is required");
  if (inst.num_leftover_kinds < 0) v.push_back("leftover kind count must be >= 0");

  for (int c = 0; c < inst.num_beam_types(); ++c) {
    const BeamType& bt = inst.beam_types[c];
    const std::string tag = " (beam type " + std::to_string(c + 1) + ")";
    if (bt.lengths.empty()) v.push_back("a beam type needs at least one length" + tag);
    if (bt.lengths.size() != bt.demands.size()) {
      v.push_back("lengths and demands must have equal size" + tag);
    }
    if (std::any_of(bt.lengths.begin(), bt.lengths.end(),
                    [](Length l) { return l.cm() <= 0; })) {
      v.push_back("beam lengths must be positive" + tag);
    }
    std::set<Length> seen(bt.lengths.begin(), bt.lengths.end());
    if (seen.size() != bt.lengths.size()) {
      v.push_back("beam lengths must be distinct within a type" + tag);
    }
    if (std::any_of(bt.demands.begin(), bt.demands.end(),
                    [](std::int64_t d) { return d < 0; })) {
      v.push_back("demands must be nonnegative" + tag);
    }
    if (bt.curing_time < 1) v.push_back("curing_time must be >= 1" + tag);
    if (bt.bars_per_beam < 0) v.push_back("bars_per_beam must be >= 0" + tag);
  }

  if (std::any_of(inst.mold_lengths.begin(), inst.mold_lengths.end(),
                  [](Length l) { return l.cm() <= 0; })) {
    v.push_back("mold lengths must be positive");
  }
  {
    Instance copy = inst;
    copy.refresh_mold_classes();
    if (copy.distinct_mold_lengths != inst.distinct_mold_lengths) {
      v.push_back("distinct mold lengths must be the sorted de-duplicated mold lengths");
    }
  }

  const auto bars = static_cast<std::size_t>(
      std::max(0, inst.num_bar_kinds + inst.num_leftover_kinds));
  if (inst.bar_lengths.size() != bars) {
    v.push_back("bars must list W + V lengths");
  }
  if (std::any_of(inst.bar_lengths.begin(), inst.bar_lengths.end(),
                  [](Length l) { return l.cm() <= 0; })) {
    v.push_back("bar lengths must be positive");
  }
  if (inst.stock.size() != bars) v.push_back("stock must list W + V counts");
  if (std::any_of(inst.stock.begin(), inst.stock.end(),
                  [](std::int64_t e) { return e < 0; })) {
    v.push_back("stock must be nonnegative");
  }
  if (inst.overlap_loss.cm() <= 0) v.push_back("epsilon must be positive");
  if (std::any_of(inst.weights.begin(), inst.weights.end(),
                  [](double w) { return !(w >= 0.0); })) {
    v.push_back("lambda weights must be nonnegative");
  }
  return v;
}

namespace {

const json& require(const json& doc, const char* key,
                    std::vector<std::string>& problems) {
  static const json null_value;
  auto it = doc.find(key);
  if (it == doc.end()) {
    problems.push_back(std::string("missing key '") + key + "'");
    return null_value;
  }
  return *it;
}

std::int64_t as_count(const json& j, const std::string& what,
                      std::vector<std::string>& problems) {
  if (!j.is_number_integer()) {
    problems.push_back(what + " must be an integer");
    return 0;
  }
  return j.get<std::int64_t>();
}

Length as_length(const json& j, const std::string& what,
                 std::vector<std::string>& problems) {
  if (!j.is_number()) {
    problems.push_back(what + " must be a number of meters");
    return {};
  }
  try {
    return Length::from_meters(j.get<double>());
  } catch (const std::invalid_argument& e) {
    problems.push_back(what + ": " + e.what());
    return {};
  }
}

std::vector<Length> as_lengths(const json& j, const std::string& what,
                               std::vector<std::string>& problems) {
  std::vector<Length> out;
  if (!j.is_array()) {
    problems.push_back(what + " must be an array");
    return out;
  }
  for (const auto& e : j) out.push_back(as_length(e, what, problems));
  return out;
}

std::vector<std::int64_t> as_counts(const json& j, const std::string& what,
                                    std::vector<std::string>& problems) {
  std::vector<std::int64_t> out;
  if (!j.is_array()) {
    problems.push_back(what + " must be an array");
    return out;
  }
  for (const auto& e : j) out.push_back(as_count(e, what, problems));
  return out;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  if (!doc.is_object()) throw ParseError("instance document must be a JSON object", 0);

  std::vector<std::string> problems;
  Instance inst;
  const auto c = as_count(require(doc, "C", problems), "C", problems);
  const auto m = as_count(require(doc, "M", problems), "M", problems);
  inst.horizon = static_cast<int>(as_count(require(doc, "T", problems), "T", problems));
  inst.num_bar_kinds = static_cast<int>(as_count(require(doc, "W", problems), "W", problems));
  inst.num_leftover_kinds =
      static_cast<int>(as_count(require(doc, "V", problems), "V", problems));
  inst.mold_lengths = as_lengths(require(doc, "molds", problems), "molds", problems);
  inst.bar_lengths = as_lengths(require(doc, "bars", problems), "bars", problems);
  inst.stock = as_counts(require(doc, "stock", problems), "stock", problems);
  inst.overlap_loss = as_length(require(doc, "epsilon", problems), "epsilon", problems);

  if (auto it = doc.find("lambda"); it != doc.end()) {
    if (!it->is_array() || it->size() != 4) {
      problems.push_back("lambda must be an array of 4 numbers");
    } else {
      for (std::size_t i = 0; i < 4; ++i) {
        if (!(*it)[i].is_number()) {
          problems.push_back("lambda must be an array of 4 numbers");
          break;
        }
        inst.weights[i] = (*it)[i].get<double>();
      }
    }
  }

  const json& types = require(doc, "beam_types", problems);
  if (types.is_array()) {
    for (std::size_t i = 0; i < types.size(); ++i) {
      const std::string tag = "beam_types[" + std::to_string(i) + "]";
      const json& t = types[i];
      if (!t.is_object()) {
        problems.push_back(tag + " must be an object");
        continue;
      }
      BeamType bt;
      bt.lengths = as_lengths(require(t, "lengths", problems), tag + ".lengths", problems);
      bt.demands = as_counts(require(t, "demands", problems), tag + ".demands", problems);
      bt.curing_time = static_cast<int>(
          as_count(require(t, "curing", problems), tag + ".curing", problems));
      bt.bars_per_beam = static_cast<int>(as_count(
          require(t, "bars_per_beam", problems), tag + ".bars_per_beam", problems));
      inst.beam_types.push_back(std::move(bt));
    }
  } else if (!types.is_null()) {
    problems.push_back("beam_types must be an array");
  }

  if (problems.empty()) {
    if (c != inst.num_beam_types()) problems.push_back("C does not match beam_types");
    if (m != inst.num_molds()) problems.push_back("M does not match molds");
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));

  inst.refresh_mold_classes();
  auto violations = validate_instance(inst);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  auto meters = [](const std::vector<Length>& ls) {
    ordered_json arr = ordered_json::array();
    for (Length l : ls) arr.push_back(l.meters());
    return arr;
  };
  ordered_json doc;
  doc["C"] = inst.num_beam_types();
  doc["M"] = inst.num_molds();
  doc["T"] = inst.horizon;
  doc["W"] = inst.num_bar_kinds;
  doc["V"] = inst.num_leftover_kinds;
  doc["molds"] = meters(inst.mold_lengths);
  ordered_json types = ordered_json::array();
  for (const auto& bt : inst.beam_types) {
    ordered_json t;
    t["lengths"] = meters(bt.lengths);
    t["demands"] = bt.demands;
    t["curing"] = bt.curing_time;
    t["bars_per_beam"] = bt.bars_per_beam;
    types.push_back(std::move(t));
  }
  doc["beam_types"] = std::move(types);
  doc["bars"] = meters(inst.bar_lengths);
  doc["stock"] = inst.stock;
  doc["epsilon"] = inst.overlap_loss.meters();
  doc["lambda"] = inst.weights;
  return doc.dump(2) + "\n";
}

Instance generate_instance(std::uint64_t seed, int num_beam_types, int num_molds) {
  static constexpr std::array<std::int64_t, 7> kBeamPoolCm{112, 145, 235, 250,
                                                           265, 295, 330};
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };

  Instance inst;
  std::bernoulli_distribution short_mold(0.8);
  for (int m = 0; m < num_molds; ++m) {
    inst.mold_lengths.push_back(Length::from_cm(short_mold(rng) ? 595 : 1195));
  }
  inst.refresh_mold_classes();

  for (int c = 0; c < num_beam_types; ++c) {
    BeamType bt;
    const auto q = uniform(2, static_cast<std::int64_t>(kBeamPoolCm.size()));
    std::vector<std::int64_t> pool(kBeamPoolCm.begin(), kBeamPoolCm.end());
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(static_cast<std::size_t>(q));
    std::sort(pool.begin(), pool.end());
    for (auto cm : pool) {
      bt.lengths.push_back(Length::from_cm(cm));
      bt.demands.push_back(uniform(17, 50));
    }
    bt.curing_time = num_beam_types <= 3 ? c + 1 : static_cast<int>(uniform(1, 3));
    bt.bars_per_beam = static_cast<int>(uniform(1, 3));
    inst.beam_types.push_back(std::move(bt));
  }

  // T = ceil(1.5 * sum_c t_c * len_c / sum_m L_m), evaluated exactly in cm.
  std::int64_t weighted = 0;
  for (const auto& bt : inst.beam_types) {
    weighted += bt.curing_time * bt.demanded_length().cm();
  }
  const std::int64_t capacity = inst.total_mold_capacity().cm();
  inst.horizon = static_cast<int>(std::max<std::int64_t>(1, ceil_div(3 * weighted, 2 * capacity)));

  inst.num_bar_kinds = 1;
  inst.num_leftover_kinds = 4;
  for (std::int64_t cm : {1200, 200, 500, 600, 800}) {
    inst.bar_lengths.push_back(Length::from_cm(cm));
  }
  int max_bars = 0;
  for (const auto& bt : inst.beam_types) max_bars = std::max(max_bars, bt.bars_per_beam);
  const std::int64_t ub = 2LL * inst.horizon * num_molds * max_bars;
  inst.stock.push_back(ub);
  for (int v = 0; v < inst.num_leftover_kinds; ++v) {
    inst.stock.push_back(uniform(ceil_div(ub, 5), ub));
  }
  inst.overlap_loss = Length::from_cm(30);
  return inst;
}

Instance cwp000() {
  Instance inst;
  inst.horizon = 3;
  BeamType bt;
  bt.lengths = {Length::from_cm(112), Length::from_cm(330)};
  bt.demands = {5, 10};
  bt.curing_time = 1;
  bt.bars_per_beam = 1;
  inst.beam_types.push_back(bt);
  for (int m = 0; m < 4; ++m) inst.mold_lengths.push_back(Length::from_cm(595));
  inst.mold_lengths.push_back(Length::from_cm(1195));
  inst.refresh_mold_classes();
  inst.num_bar_kinds = 1;
  inst.num_leftover_kinds = 4;
  for (std::int64_t cm : {1200, 200, 500, 600, 800}) {
    inst.bar_lengths.push_back(Length::from_cm(cm));
  }
  inst.stock = {30, 16, 28, 25, 29};
  inst.overlap_loss = Length::from_cm(30);
  return inst;
}

}  // namespace beamforge
