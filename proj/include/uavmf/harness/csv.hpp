#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace uavmf::harness {

// Shortest round-tripping decimal text with '.' as the separator.
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(int v);
  CsvWriter& operator<<(long long v);
  CsvWriter& operator<<(const std::string& v);
  void end_row();

 private:
  void sep();
  std::ostream& out_;
  std::size_t columns_;
  std::size_t col_ = 0;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // throws when absent
  double number(std::size_t row, const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace uavmf::harness
