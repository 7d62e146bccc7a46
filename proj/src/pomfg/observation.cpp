#include "uavmf/pomfg/observation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace uavmf::pomfg {

int observed_count(double coverage, int gus) {
  if (!(coverage >= 0.0 && coverage <= 1.0))
    throw std::invalid_argument("coverage must lie in [0, 1]");
  return std::min(gus, static_cast<int>(std::ceil(coverage * gus - 1e-9)));
}

std::vector<int> nearest_gus(int hover, const env::Geometry& geometry) {
  const int gus = geometry.gus_per_cell();
  std::vector<int> order(gus);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return geometry.hover_distance(hover, a) < geometry.hover_distance(hover, b);
  });
  return order;
}

Observation observe(const env::AgentState& truth, int hover, double coverage,
                    const env::Geometry& geometry) {
  const int gus = geometry.gus_per_cell();
  Observation o;
  o.symbols.assign(gus, Symbol::kUnobserved);
  o.prev_hover = hover;
  o.battery_level = truth.battery_level;
  const std::vector<int> order = nearest_gus(hover, geometry);
  const int n = observed_count(coverage, gus);
  for (int i = 0; i < n; ++i) {
    const int u = order[i];
    o.symbols[u] = truth.active(u) ? Symbol::kActive : Symbol::kIdle;
  }
  return o;
}

CompressedHistory CompressedHistory::initial(int gus, int cap) {
  CompressedHistory h;
  h.belief.assign(gus, 0);
  h.staleness.assign(gus, 0);
  h.cap = cap;
  return h;
}

int CompressedHistory::active_beliefs() const {
  return static_cast<int>(std::count(belief.begin(), belief.end(), std::uint8_t{1}));
}

int CompressedHistory::max_staleness() const {
  return staleness.empty() ? 0 : *std::max_element(staleness.begin(), staleness.end());
}

CompressedHistory update_history(const CompressedHistory& h, const Observation& o) {
  if (o.symbols.size() != h.belief.size())
    throw std::invalid_argument("observation and history disagree on the GU count");
  CompressedHistory next = h;
  for (std::size_t u = 0; u < o.symbols.size(); ++u) {
    if (o.symbols[u] == Symbol::kUnobserved) {
      next.staleness[u] = std::min(h.staleness[u] + 1, h.cap);
    } else {
      next.belief[u] = o.symbols[u] == Symbol::kActive ? 1 : 0;
      next.staleness[u] = 0;
    }
  }
  next.prev_hover = o.prev_hover;
  next.battery_level = o.battery_level;
  return next;
}

int history_feature_width(int gus) { return 2 * gus + 2; }

void append_history_features(const CompressedHistory& h, int energy_levels,
                             std::vector<double>& out) {
  const int gus = static_cast<int>(h.belief.size());
  for (int u = 0; u < gus; ++u) out.push_back(h.belief[u]);
  for (int u = 0; u < gus; ++u) out.push_back(static_cast<double>(h.staleness[u]) / h.cap);
  out.push_back(gus > 1 ? static_cast<double>(h.prev_hover) / (gus - 1) : 0.0);
  out.push_back((h.battery_level + 0.5) / energy_levels);
}

void write_trace(const std::vector<Observation>& trace, std::ostream& out) {
  out << "slot,prev_hover,battery_level,symbols\n";
  for (std::size_t t = 0; t < trace.size(); ++t) {
    out << t << ',' << trace[t].prev_hover << ',' << trace[t].battery_level << ',';
    for (Symbol s : trace[t].symbols) out << static_cast<int>(s);
    out << '\n';
  }
}

std::vector<Observation> read_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "slot,prev_hover,battery_level,symbols")
    throw std::runtime_error("observation trace: bad header");
  std::vector<Observation> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string slot, hover, level, symbols;
    if (!std::getline(row, slot, ',') || !std::getline(row, hover, ',') ||
        !std::getline(row, level, ',') || !std::getline(row, symbols))
      throw std::runtime_error("observation trace: malformed row");
    Observation o;
    o.prev_hover = std::stoi(hover);
    o.battery_level = std::stoi(level);
    for (char c : symbols) {
      if (c < '0' || c > '2') throw std::runtime_error("observation trace: bad symbol");
      o.symbols.push_back(static_cast<Symbol>(c - '0'));
    }
    trace.push_back(std::move(o));
  }
  return trace;
}

}  // namespace uavmf::pomfg
