#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace toalab {

/// Columnar figure data plus the metadata needed to re-run the experiment
/// bit-identically.
struct FigureBundle {
  std::string figure_id;
  std::vector<std::string> columns; // header names with unit annotations
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> metadata;

  bool operator==(const FigureBundle &) const = default;
};

inline std::string to_csv(const FigureBundle &b) {
  std::ostringstream os;
  os.precision(17);
  os << "# figure: " << b.figure_id << "\n";
  for (const auto &[k, v] : b.metadata) os << "# " << k << ": " << v << "\n";
  for (std::size_t c = 0; c < b.columns.size(); ++c)
    os << (c ? "," : "") << b.columns[c];
  os << "\n";
  for (const auto &row : b.rows) {
    if (row.size() != b.columns.size())
      throw std::invalid_argument("to_csv: ragged row");
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << "\n";
  }
  return os.str();
}

inline FigureBundle from_csv(const std::string &text) {
  FigureBundle b;
  std::istringstream is(text);
  std::string line;
  bool header_done = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("from_csv: malformed comment line");
      std::string key = line.substr(1, colon - 1);
      std::string val = line.substr(colon + 1);
      auto trim = [](std::string &s) {
        s.erase(0, s.find_first_not_of(' '));
        s.erase(s.find_last_not_of(' ') + 1);
      };
      trim(key);
      trim(val);
      if (key == "figure")
        b.figure_id = val;
      else
        b.metadata[key] = val;
      continue;
    }
    std::istringstream ls(line);
    std::string cell;
    if (!header_done) {
      while (std::getline(ls, cell, ',')) b.columns.push_back(cell);
      header_done = true;
    } else {
      std::vector<double> row;
      while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
      if (row.size() != b.columns.size())
        throw std::invalid_argument("from_csv: ragged row");
      b.rows.push_back(std::move(row));
    }
  }
  return b;
}

inline nlohmann::json to_json(const FigureBundle &b) {
  return nlohmann::json{{"figure", b.figure_id},
                        {"columns", b.columns},
                        {"rows", b.rows},
                        {"metadata", b.metadata}};
}

inline FigureBundle from_json(const nlohmann::json &j) {
  FigureBundle b;
  b.figure_id = j.at("figure").get<std::string>();
  b.columns = j.at("columns").get<std::vector<std::string>>();
  b.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  b.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
  return b;
}

inline void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

} // namespace toalab
