#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavmf/harness/config.hpp"
#include "uavmf/harness/csv.hpp"

namespace uavmf::harness {

struct PlotDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
  const char* name() const { return "PlotDataError"; }
};

enum class PlotKind { kFig4, kFig5, kFig6, kFig7, kFig8, kFig9, kFig10, kFig11, kFig12 };

std::string to_string(PlotKind kind);
PlotKind parse_plot_kind(const std::string& s);  // "fig4" .. "fig12"
const std::vector<PlotKind>& all_plot_kinds();

// A finished run directory read back from disk.
struct RunData {
  std::filesystem::path dir;
  ExperimentConfig config;
  CsvTable metrics;
  std::map<std::string, double> summary;  // eval_summary.csv
  std::optional<CsvTable> robustness;

  // Coverage of the run; fully observable runs count as 1.
  double coverage() const;
};

RunData load_run(const std::filesystem::path& dir);

// Tidy table for one figure kind, averaged over seeds. Throws PlotDataError
// for an empty run list or runs that differ in a parameter that is not an
// axis of the figure.
CsvTable plot_table(const std::vector<RunData>& runs, PlotKind kind);

// Loads the runs and writes the table to `out`; nothing is written on error.
void emit_plot_data(const std::vector<std::filesystem::path>& runs, PlotKind kind,
                    const std::filesystem::path& out);

}  // namespace uavmf::harness
