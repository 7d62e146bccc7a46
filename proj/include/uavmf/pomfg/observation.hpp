#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "uavmf/env/physics.hpp"
#include "uavmf/env/spaces.hpp"

namespace uavmf::pomfg {

// Observation symbols. Stored beliefs use the other convention (1 = active),
// see CompressedHistory.
enum class Symbol : std::uint8_t { kActive = 0, kIdle = 1, kUnobserved = 2 };

struct Observation {
  std::vector<Symbol> symbols;  // per GU
  int prev_hover = 0;
  int battery_level = 0;

  bool operator==(const Observation&) const = default;
};

// Number of GUs revealed at a given coverage fraction: ceil(coverage * U).
int observed_count(double coverage, int gus);

// GUs ordered by distance from the hover point, ties to the lower index.
std::vector<int> nearest_gus(int hover, const env::Geometry& geometry);

// Reveals the demand of the nearest ceil(coverage * U) GUs to `hover`.
Observation observe(const env::AgentState& truth, int hover, double coverage,
                    const env::Geometry& geometry);

inline constexpr int kDefaultStalenessCap = 16;

// Last-seen demand bit (1 = active) and slots since each GU was last seen.
struct CompressedHistory {
  std::vector<std::uint8_t> belief;
  std::vector<int> staleness;
  int prev_hover = 0;
  int battery_level = 0;
  int cap = kDefaultStalenessCap;

  static CompressedHistory initial(int gus, int cap = kDefaultStalenessCap);
  int active_beliefs() const;
  int max_staleness() const;
  bool operator==(const CompressedHistory&) const = default;
};

CompressedHistory update_history(const CompressedHistory& h, const Observation& o);

// Belief bits, staleness / cap, prev hover and battery level: 2U + 2 values.
int history_feature_width(int gus);
void append_history_features(const CompressedHistory& h, int energy_levels,
                             std::vector<double>& out);

// One row per slot: slot,prev_hover,battery_level,symbols (digits per GU).
void write_trace(const std::vector<Observation>& trace, std::ostream& out);
std::vector<Observation> read_trace(std::istream& in);

}  // namespace uavmf::pomfg
