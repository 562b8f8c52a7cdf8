#include "pictk/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pictk/error.hpp"

namespace pictk {

void Report::add_region(const std::string& name, double min_margin) {
  regions.push_back({name, min_margin == 0.0 ? 0.0 : min_margin});
}

double Report::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : regions) m = std::min(m, r.min_margin);
  return m;
}

nlohmann::json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json regions = nlohmann::json::array();
  for (const auto& g : r.regions) {
    regions.push_back({{"name", g.name}, {"min_margin", number(g.min_margin)}});
  }
  return {{"check", r.check},     {"params", r.params},
          {"regions", regions},   {"pass", r.pass},
          {"tolerance", r.tolerance}, {"details", r.details}};
}

Report report_from_json(const nlohmann::json& j) {
  Report r;
  r.check = j.at("check").get<std::string>();
  r.params = j.value("params", nlohmann::json::object());
  r.pass = j.at("pass").get<bool>();
  r.tolerance = j.value("tolerance", 0.0);
  r.details = j.value("details", nlohmann::json::object());
  for (const auto& g : j.value("regions", nlohmann::json::array())) {
    const auto& m = g.at("min_margin");
    double v = 0.0;
    if (m.is_string()) {
      const std::string s = m.get<std::string>();
      v = s == "nan" ? std::numeric_limits<double>::quiet_NaN()
                     : (s == "-inf" ? -1.0 : 1.0) *
                           std::numeric_limits<double>::infinity();
    } else {
      v = m.get<double>();
    }
    r.regions.push_back({g.at("name").get<std::string>(), v});
  }
  return r;
}

std::string to_csv(const CsvTable& t) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    os << (i ? "," : "") << t.header[i];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

}  // namespace pictk
