#include "uavmf/harness/plotdata.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace uavmf::harness {

namespace {

struct KindInfo {
  PlotKind kind;
  const char* name;
};

constexpr KindInfo kKinds[] = {
    {PlotKind::kFig4, "fig4"},   {PlotKind::kFig5, "fig5"},   {PlotKind::kFig6, "fig6"},
    {PlotKind::kFig7, "fig7"},   {PlotKind::kFig8, "fig8"},   {PlotKind::kFig9, "fig9"},
    {PlotKind::kFig10, "fig10"}, {PlotKind::kFig11, "fig11"}, {PlotKind::kFig12, "fig12"},
};

enum Axis { kAlgorithm, kQ, kSigma, kEta, kCoverage, kNumAxes };

std::string axis_value(const RunData& r, int axis) {
  switch (axis) {
    case kAlgorithm: return baselines::to_string(r.config.algorithm);
    case kQ: return format_number(r.config.physics.demand.q);
    case kSigma: return format_number(r.config.physics.reward.sigma);
    case kEta: return format_number(r.config.eta_db);
    case kCoverage: return format_number(r.coverage());
  }
  return "";
}

const char* axis_name(int axis) {
  static const char* names[] = {"algorithm", "q", "sigma", "eta_db", "coverage"};
  return names[axis];
}

// Everything except seeds and the figure axes must agree.
void check_compatible(const std::vector<RunData>& runs, const std::vector<int>& axes) {
  for (int axis = 0; axis < kNumAxes; ++axis) {
    if (std::find(axes.begin(), axes.end(), axis) != axes.end()) continue;
    const std::string first = axis_value(runs.front(), axis);
    for (const RunData& r : runs) {
      if (axis_value(r, axis) != first)
        throw PlotDataError("mismatched sweep axes: '" + std::string(axis_name(axis)) +
                            "' differs between " + runs.front().dir.string() + " and " +
                            r.dir.string());
    }
  }
}

double summary_value(const RunData& r, const std::string& key) {
  auto it = r.summary.find(key);
  if (it == r.summary.end())
    throw PlotDataError("missing '" + key + "' in " + (r.dir / "eval_summary.csv").string());
  return it->second;
}

using Key = std::vector<double>;

// Mean of `values(run)` per key; keys sort numerically.
CsvTable point_table(const std::vector<RunData>& runs, const std::vector<int>& axes,
                     const std::vector<std::string>& value_names,
                     const std::function<std::vector<double>(const RunData&)>& values) {
  std::map<Key, std::pair<std::vector<double>, int>> acc;
  for (const RunData& r : runs) {
    Key key;
    for (int axis : axes) key.push_back(std::stod(axis_value(r, axis)));
    auto& [sum, n] = acc[key];
    const std::vector<double> v = values(r);
    if (sum.empty()) sum.assign(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) sum[i] += v[i];
    ++n;
  }
  CsvTable t;
  for (int axis : axes) t.header.push_back(axis_name(axis));
  t.header.insert(t.header.end(), value_names.begin(), value_names.end());
  for (const auto& [key, entry] : acc) {
    std::vector<std::string> row;
    for (double k : key) row.push_back(format_number(k));
    for (double s : entry.first) row.push_back(format_number(s / entry.second));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Per-episode curves averaged over runs sharing a group label.
CsvTable curve_table(const std::vector<RunData>& runs, const std::string& group_name,
                     const std::function<std::string(const RunData&)>& group,
                     const std::vector<std::string>& group_order,
                     const std::function<const CsvTable&(const RunData&)>& table,
                     const std::string& value_column, const std::string& out_column,
                     const std::vector<std::string>& extra_columns = {}) {
  struct Curve {
    std::vector<std::vector<double>> sums;
    int runs = 0;
  };
  std::map<std::string, Curve> curves;
  std::map<std::string, std::size_t> lengths;
  for (const RunData& r : runs) {
    const CsvTable& t = table(r);
    const std::string g = group(r);
    Curve& c = curves[g];
    if (c.runs == 0) {
      c.sums.assign(t.rows.size(), std::vector<double>(extra_columns.size() + 2, 0.0));
    } else if (c.sums.size() != t.rows.size()) {
      throw PlotDataError("mismatched sweep axes: episode counts differ within '" + g + "' at " +
                          r.dir.string());
    }
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      c.sums[i][0] += t.number(i, "episode");
      for (std::size_t j = 0; j < extra_columns.size(); ++j)
        c.sums[i][j + 1] += t.number(i, extra_columns[j]);
      c.sums[i].back() += t.number(i, value_column);
    }
    ++c.runs;
  }
  for (const auto& [g, c] : curves) lengths[g] = c.sums.size();

  std::vector<std::string> order;
  for (const std::string& g : group_order)
    if (curves.count(g)) order.push_back(g);
  for (const auto& [g, c] : curves)
    if (std::find(order.begin(), order.end(), g) == order.end()) order.push_back(g);

  CsvTable out;
  out.header = {group_name, "episode"};
  out.header.insert(out.header.end(), extra_columns.begin(), extra_columns.end());
  out.header.push_back(out_column);
  for (const std::string& g : order) {
    const Curve& c = curves[g];
    for (const auto& s : c.sums) {
      std::vector<std::string> row{g};
      for (double v : s) row.push_back(format_number(v / c.runs));
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

std::map<std::string, double> read_summary(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  std::map<std::string, double> out;
  const int k = t.column("metric");
  for (std::size_t i = 0; i < t.rows.size(); ++i) out[t.rows[i][k]] = t.number(i, "value");
  return out;
}

}  // namespace

std::string to_string(PlotKind kind) {
  for (const KindInfo& k : kKinds)
    if (k.kind == kind) return k.name;
  return "unknown";
}

PlotKind parse_plot_kind(const std::string& s) {
  for (const KindInfo& k : kKinds)
    if (s == k.name) return k.kind;
  throw PlotDataError("unknown figure kind '" + s + "' (expected fig4 .. fig12)");
}

const std::vector<PlotKind>& all_plot_kinds() {
  static const std::vector<PlotKind> kinds = [] {
    std::vector<PlotKind> v;
    for (const KindInfo& k : kKinds) v.push_back(k.kind);
    return v;
  }();
  return kinds;
}

double RunData::coverage() const { return config.partially_observable ? config.coverage : 1.0; }

RunData load_run(const std::filesystem::path& dir) {
  RunData r;
  r.dir = dir;
  const std::filesystem::path manifest = dir / "manifest.txt";
  if (!std::filesystem::exists(manifest))
    throw PlotDataError("not a run directory (no manifest.txt): " + dir.string());
  r.config = load_config(manifest);
  r.metrics = read_csv(dir / "metrics.csv");
  if (std::filesystem::exists(dir / "eval_summary.csv"))
    r.summary = read_summary(dir / "eval_summary.csv");
  if (std::filesystem::exists(dir / "robustness.csv"))
    r.robustness = read_csv(dir / "robustness.csv");
  return r;
}

CsvTable plot_table(const std::vector<RunData>& runs, PlotKind kind) {
  if (runs.empty()) throw PlotDataError("empty run list");
  const auto fly_power = [](const RunData& r) {
    return std::vector<double>{summary_value(r, "flying_probability"),
                               summary_value(r, "mean_power_mw")};
  };
  const auto ee = [](const RunData& r) { return std::vector<double>{summary_value(r, "mean_ee")}; };
  const std::vector<std::string> fly_power_names{"flying_probability", "mean_power_mW"};

  switch (kind) {
    case PlotKind::kFig4: {
      check_compatible(runs, {kAlgorithm});
      std::vector<std::string> legend;
      for (auto a : baselines::all_algorithms()) legend.push_back(baselines::to_string(a));
      return curve_table(
          runs, "algorithm", [](const RunData& r) { return axis_value(r, kAlgorithm); }, legend,
          [](const RunData& r) -> const CsvTable& { return r.metrics; }, "mean_reward",
          "mean_reward");
    }
    case PlotKind::kFig5: {
      check_compatible(runs, {});
      for (const RunData& r : runs)
        if (!r.robustness)
          throw PlotDataError("no robustness.csv in " + r.dir.string());
      return curve_table(
          runs, "algorithm", [](const RunData& r) { return axis_value(r, kAlgorithm); }, {},
          [](const RunData& r) -> const CsvTable& { return *r.robustness; }, "mean_reward",
          "mean_reward", {"active_uavs"});
    }
    case PlotKind::kFig6:
      check_compatible(runs, {kQ});
      return point_table(runs, {kQ}, fly_power_names, fly_power);
    case PlotKind::kFig7:
      check_compatible(runs, {kQ, kEta});
      return point_table(runs, {kQ, kEta}, {"ee"}, ee);
    case PlotKind::kFig8:
      check_compatible(runs, {kSigma});
      return point_table(runs, {kSigma}, fly_power_names, fly_power);
    case PlotKind::kFig9:
      check_compatible(runs, {kSigma, kEta});
      return point_table(runs, {kSigma, kEta}, {"ee"}, ee);
    case PlotKind::kFig10: {
      check_compatible(runs, {kCoverage});
      return curve_table(
          runs, "coverage", [](const RunData& r) { return axis_value(r, kCoverage); }, {},
          [](const RunData& r) -> const CsvTable& { return r.metrics; }, "mean_reward",
          "mean_reward");
    }
    case PlotKind::kFig11:
      check_compatible(runs, {kCoverage, kQ});
      return point_table(runs, {kCoverage, kQ}, fly_power_names, fly_power);
    case PlotKind::kFig12:
      check_compatible(runs, {kCoverage, kQ});
      return point_table(runs, {kCoverage, kQ}, {"ee"}, ee);
  }
  throw PlotDataError("unknown figure kind");
}

void emit_plot_data(const std::vector<std::filesystem::path>& dirs, PlotKind kind,
                    const std::filesystem::path& out) {
  if (dirs.empty()) throw PlotDataError("empty run list");
  std::vector<RunData> runs;
  for (const auto& d : dirs) runs.push_back(load_run(d));
  const CsvTable t = plot_table(runs, kind);
  std::ostringstream text;
  {
    CsvWriter w(text, t.header);
    for (const auto& row : t.rows) {
      for (const std::string& cell : row) w << cell;
      w.end_row();
    }
  }
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  std::ofstream f(out, std::ios::binary);
  if (!f) throw PlotDataError("cannot write " + out.string());
  f << text.str();
}

}  // namespace uavmf::harness
