#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "beamforge/length.hpp"

namespace beamforge {

// A class of beams sharing curing time and bar usage, offered in several
// lengths. Indices into `lengths` and `demands` are aligned.
struct BeamType {
  std::vector<Length> lengths;
  std::vector<std::int64_t> demands;
  int curing_time = 1;    // periods a casting occupies its mold
  int bars_per_beam = 0;  // bars one packing pattern of this type consumes

  int num_lengths() const { return static_cast<int>(lengths.size()); }
  Length shortest() const;
  // Sum over k of lengths[k] * demands[k].
  Length demanded_length() const;

  bool operator==(const BeamType&) const = default;
};

// Full problem data. Beam types, molds, bar kinds and mold classes are indexed
// from 0 internally; files and reports use 1-based numbering.
struct Instance {
  int horizon = 1;
  std::vector<BeamType> beam_types;
  std::vector<Length> mold_lengths;
  // De-duplicated ascending mold lengths; kept in sync by refresh_mold_classes().
  std::vector<Length> distinct_mold_lengths;
  int num_bar_kinds = 1;       // W: new bars come first in bar_lengths
  int num_leftover_kinds = 0;  // V: leftover kinds follow the new bars
  std::vector<Length> bar_lengths;
  std::vector<std::int64_t> stock;
  Length overlap_loss;
  std::array<double, 4> weights{1.0, 1.0, 1.0, 1.0};

  int num_beam_types() const { return static_cast<int>(beam_types.size()); }
  int num_molds() const { return static_cast<int>(mold_lengths.size()); }
  int num_mold_classes() const {
    return static_cast<int>(distinct_mold_lengths.size());
  }
  int num_bars() const { return num_bar_kinds + num_leftover_kinds; }
  bool is_leftover(int bar) const { return bar >= num_bar_kinds; }
  Length leftover_length(int v) const { return bar_lengths[num_bar_kinds + v]; }
  std::int64_t leftover_stock(int v) const { return stock[num_bar_kinds + v]; }

  int max_curing_time() const;  // R
  Length total_mold_capacity() const;
  // Index into distinct_mold_lengths of mold `m`.
  int mold_class(int m) const;
  // G(L_gamma): ascending mold indices whose length is distinct_mold_lengths[gamma].
  std::vector<int> molds_in_class(int gamma) const;
  int total_demand_entries() const;

  void refresh_mold_classes();

  bool operator==(const Instance&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Empty iff every data-model invariant holds.
std::vector<std::string> validate_instance(const Instance& inst);

// Reads the JSON instance document. Throws ParseError on malformed JSON and
// ValidationError on missing keys or violated invariants.
Instance parse_instance(std::string_view text);
std::string serialize_instance(const Instance& inst);

// Random benchmark instance; a pure function of its arguments.
Instance generate_instance(std::uint64_t seed, int num_beam_types, int num_molds);

// The worked example instance used throughout the tests and docs.
Instance cwp000();

}  // namespace beamforge
