#pragma once

#include <string>
#include <vector>

namespace berrylab {

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

/// Flat CSV table. The first line of the rendered text is "# config_hash=<hash>".
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string render(const std::string& hash) const;
};

/// Two-column plot series (x, y).
CsvTable series(const std::string& x_name, const std::string& y_name, const std::vector<double>& xs,
                const std::vector<double>& ys);

std::string read_text_file(const std::string& path);
/// Writes through a temporary file then renames; throws IoError.
void write_text_file(const std::string& path, const std::string& content);
void ensure_directory(const std::string& path);

}  // namespace berrylab
