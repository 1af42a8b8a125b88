#include "berrylab/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "berrylab/errors.hpp"

namespace berrylab {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header.size()) throw PreconditionError("CSV row width does not match the header");
  rows.push_back(std::move(row));
}

std::string CsvTable::render(const std::string& hash) const {
  std::ostringstream os;
  os << "# config_hash=" << hash << "\n";
  auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

CsvTable series(const std::string& x_name, const std::string& y_name, const std::vector<double>& xs,
                const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw PreconditionError("series columns differ in length");
  CsvTable t;
  t.header = {x_name, y_name};
  for (std::size_t i = 0; i < xs.size(); ++i) t.add({format_number(xs[i]), format_number(ys[i])});
  return t;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp + " to " + path + ": " + ec.message());
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec || !std::filesystem::is_directory(path)) throw IoError("cannot create output directory " + path);
}

}  // namespace berrylab
