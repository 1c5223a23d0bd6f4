#ifndef LPSUR_CSV_HPP
#define LPSUR_CSV_HPP

#include <string>
#include <vector>

namespace lpsur {

// Shortest round-trip decimal form, up to 17 significant digits.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

double parse_double(const std::string& field);

}  // namespace lpsur

#endif  // LPSUR_CSV_HPP
