#include "torusdyn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace torusdyn {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << '\n';
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      table.header = split(line, ',');
      first = false;
    } else {
      table.rows.push_back(split(line, ','));
    }
  }
  return table;
}

CsvTable to_csv(const SweepTable& table) {
  CsvTable out;
  out.header = {"a", "chi_c", "n_iter", "seed"};
  for (const auto& rec : table.records)
    out.rows.push_back({format_double(rec.a), format_double(rec.chi_c),
                        std::to_string(rec.n_iter), std::to_string(rec.seed)});
  return out;
}

SweepTable sweep_from_csv(const CsvTable& csv) {
  SweepTable table;
  for (const auto& row : csv.rows) {
    if (row.size() != 4)
      throw std::runtime_error("sweep_from_csv: malformed row");
    SweepRecord rec;
    rec.a = std::stod(row[0]);
    rec.chi_c = std::stod(row[1]);
    rec.n_iter = std::stol(row[2]);
    rec.seed = std::stoull(row[3]);
    table.records.push_back(rec);
  }
  return table;
}

void write_pgm(const DensityRaster& raster, const std::string& path,
               double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("write_pgm: gamma > 0");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
  out << "P5\n" << raster.nx << " " << raster.ny << "\n255\n";
  std::int64_t max_count = 0;
  for (auto c : raster.counts) max_count = std::max(max_count, c);
  std::string bytes;
  bytes.reserve(raster.counts.size());
  for (int row = 0; row < raster.ny; ++row) {
    int iy = raster.ny - 1 - row;  // row 0 is y near 1
    for (int ix = 0; ix < raster.nx; ++ix) {
      double v = max_count == 0
                     ? 0.0
                     : std::pow(static_cast<double>(raster.at(ix, iy)) /
                                    static_cast<double>(max_count),
                                gamma);
      bytes += static_cast<char>(std::lround(255.0 * v));
    }
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write_pgm: write failed for " + path);
}

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": empty key");
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  return parse_config(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace torusdyn
