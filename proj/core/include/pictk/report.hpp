#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace pictk {

struct Region {
  std::string name;
  double min_margin = 0.0;
};

// Result of one verification check.
struct Report {
  std::string check;
  nlohmann::json params = nlohmann::json::object();
  std::vector<Region> regions;
  bool pass = false;
  double tolerance = 0.0;
  nlohmann::json details = nlohmann::json::object();

  void add_region(const std::string& name, double min_margin);
  // Lowest margin over all regions, +inf when there are none.
  double min_margin() const;
};

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

// JSON numbers cannot hold inf/nan; these map them to strings.
nlohmann::json number(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const CsvTable& t);
void write_text(const std::string& path, const std::string& text);

}  // namespace pictk
