#pragma once

#include <map>
#include <string>
#include <vector>

#include "torusdyn/bifurcation.hpp"
#include "torusdyn/dynamics.hpp"

namespace torusdyn {

// 17 significant digits, locale-free.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Header line then records, LF endings.
void write_csv(const CsvTable& table, const std::string& path);
CsvTable read_csv(const std::string& path);

CsvTable to_csv(const SweepTable& table);
SweepTable sweep_from_csv(const CsvTable& table);

// Binary PGM (P5, maxval 255); pixel = 255*(count/max)^gamma, row 0 at the
// top of the torus (y near 1).
void write_pgm(const DensityRaster& raster, const std::string& path,
               double gamma = 0.5);

// Config file grammar: UTF-8 "key = value" lines, '#' comments,
// dot-namespaced keys.  Unknown keys are rejected by the caller.
std::map<std::string, std::string> parse_config(const std::string& text);
std::map<std::string, std::string> parse_config_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace torusdyn
