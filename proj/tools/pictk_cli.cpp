#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <string>

#include "pictk/error.hpp"
#include "pictk/report.hpp"
#include "pictk/suites.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Flag {
  const char* name;
  const char* key;
  const char* help;
  enum Kind { Int, Real, Path } kind;
  std::vector<std::string> suites;
};

const std::vector<Flag>& flags() {
  static const std::vector<Flag> f = {
      {"--tensor", "tensor", "Curvature tensor JSON file", Flag::Path, {"curvature", "weitzenboeck"}},
      {"--sigma", "sigma", "Isotropic curvature lower bound sigma", Flag::Real,
       {"curvature", "weitzenboeck", "bandwidth", "focal", "band", "counterexample"}},
      {"--samples", "samples", "Number of random samples", Flag::Int,
       {"curvature", "weitzenboeck", "band"}},
      {"--random", "random", "Random-vector instances per dimension", Flag::Int, {"clifford"}},
      {"--restarts", "restarts", "Frame-search restarts", Flag::Int,
       {"curvature", "weitzenboeck", "band", "counterexample"}},
      {"--draws", "draws", "Random parameter draws", Flag::Int, {"comparison", "bandwidth", "focal"}},
      {"--pointwise-draws", "pointwise_draws", "Draws for the pointwise form bounds", Flag::Int,
       {"focal"}},
      {"--points", "points", "Grid points for margin sweeps", Flag::Int, {"focal"}},
      {"--lambda", "lambda", "Boundary mean-convexity parameter lambda", Flag::Real, {"focal"}},
      {"--lambda-bar", "lambda_bar", "Boundary normal-derivative parameter", Flag::Real, {"focal"}},
      {"--rf", "rf", "Focal radius", Flag::Real, {"comparison", "bandwidth", "focal"}},
      {"--K", "K", "Curvature scale K", Flag::Real, {"comparison"}},
      {"--Lambda", "Lambda", "Boundary bound Lambda", Flag::Real, {"comparison", "bandwidth"}},
      {"--rho", "rho", "Largest distance rho on the barrier curve", Flag::Real, {"comparison"}},
      {"--delta", "delta", "Convexity defect delta", Flag::Real, {"bandwidth"}},
      {"--L", "L", "Width L", Flag::Real, {"bandwidth", "counterexample"}},
      {"--k", "k", "Betti degree k", Flag::Int, {"counterexample"}},
      {"--plateau-end", "plateau_end", "Cutoff plateau start", Flag::Real, {"bandwidth"}},
      {"--band", "band", "Warped band JSON file", Flag::Path, {"band"}},
      {"--grid", "config", "Grid config JSON file", Flag::Path, {"identities"}},
      {"--levels", "levels", "Grid refinement levels", Flag::Int, {"identities"}},
      {"--complex", "complex", "Single simplicial complex JSON file", Flag::Path, {"hodge"}},
      {"--data", "data_dir", "Directory of complex JSON files", Flag::Path, {"hodge"}},
      {"--twists", "twists", "Random vertex functions per complex", Flag::Int, {"hodge"}},
  };
  return f;
}

struct Options {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string out;
  std::string n;
  std::string config;
  std::map<std::string, std::string> raw;  // param key -> text
};

void add_common(CLI::App* cmd, Options& o, const std::string& suite) {
  cmd->add_option("--seed", o.seed, "Random seed (PIC_TOOLKIT_SEED overrides)");
  cmd->add_option("--tol", o.tol, "Tolerance override")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "Output directory for JSON/CSV reports");
  cmd->add_option("--config", o.config, "Suite config JSON (flags take precedence)")
      ->check(CLI::ExistingFile);
  if (suite == "clifford" || suite == "curvature" || suite == "focal" ||
      suite == "bandwidth" || suite == "comparison" || suite == "counterexample") {
    cmd->add_option("--n", o.n, "Dimension, or a range lo..hi");
  }
  for (const auto& f : flags()) {
    if (std::find(f.suites.begin(), f.suites.end(), suite) == f.suites.end()) continue;
    auto* opt = cmd->add_option(f.name, o.raw[f.key], f.help);
    if (f.kind == Flag::Int) opt->check(CLI::Number);
    if (f.kind == Flag::Real) opt->check(CLI::Number);
    if (f.kind == Flag::Path) opt->check(CLI::ExistingPath);
  }
}

pictk::SuiteConfig build_config(const std::string& suite, const Options& o) {
  pictk::SuiteConfig cfg;
  cfg.suite = suite;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw pictk::InputError(std::string("malformed config: ") + e.what());
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("params")) cfg.params = j.at("params");
    if (j.contains("tol")) cfg.params["tol"] = j.at("tol");
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.tol) cfg.params["tol"] = *o.tol;
  if (!o.out.empty()) cfg.out = o.out;
  if (!o.n.empty()) {
    static const std::regex range(R"(^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$)");
    std::smatch m;
    if (!std::regex_match(o.n, m, range)) throw pictk::InputError("--n expects N or LO..HI");
    const int lo = std::stoi(m[1]);
    const int hi = m[2].matched ? std::stoi(m[2]) : lo;
    cfg.params["n_min"] = lo;
    cfg.params["n_max"] = hi;
    cfg.params["n"] = lo;
  }
  for (const auto& f : flags()) {
    const auto it = o.raw.find(f.key);
    if (it == o.raw.end() || it->second.empty()) continue;
    if (f.kind == Flag::Int) cfg.params[f.key] = std::stoll(it->second);
    else if (f.kind == Flag::Real) cfg.params[f.key] = std::stod(it->second);
    else cfg.params[f.key] = it->second;
  }
  if (suite == "hodge" && !cfg.params.contains("data_dir") && !cfg.params.contains("complex")) {
    cfg.params["data_dir"] = PICTK_DEFAULT_COMPLEX_DIR;
  }
  return cfg;
}

void print_summary(const pictk::SuiteResult& r) {
  for (const auto& rep : r.reports) {
    std::cout << (rep.pass ? "PASS " : "FAIL ") << rep.check;
    if (!rep.regions.empty()) std::cout << "  min_margin=" << rep.min_margin();
    std::cout << "\n";
  }
  std::cout << (r.pass() ? "PASS" : "FAIL") << " suite " << r.suite << " (seed " << r.seed
            << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification toolkit for isotropic-curvature estimates"};
  app.require_subcommand(1);
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->require_subcommand(1);
  auto* emit = app.add_subcommand("emit", "Run a suite and emit its JSON or CSV output");
  emit->require_subcommand(1);
  auto* emit_json = emit->add_subcommand("json", "Print the suite report as JSON");
  auto* emit_csv = emit->add_subcommand("csv", "Print or write the suite CSV tables");
  emit_json->require_subcommand(1);
  emit_csv->require_subcommand(1);

  std::map<std::string, Options> opts;
  std::string chosen;
  int mode = 0;  // 0 verify, 1 emit json, 2 emit csv
  for (const auto& name : pictk::suite_names()) {
    for (int m = 0; m < 3; ++m) {
      CLI::App* parent = m == 0 ? verify : m == 1 ? emit_json : emit_csv;
      auto* cmd = parent->add_subcommand(name, "Suite " + name);
      Options& o = opts[std::to_string(m) + name];
      add_common(cmd, o, name);
      cmd->callback([&chosen, &mode, name, m] {
        chosen = name;
        mode = m;
      });
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : kExitUsage;
  }

  try {
    const pictk::SuiteConfig cfg = build_config(chosen, opts[std::to_string(mode) + chosen]);
    const pictk::SuiteResult result = pictk::run_suite(cfg);
    if (mode == 0) {
      print_summary(result);
      for (const auto& p : pictk::write_suite_outputs(cfg, result)) {
        std::cout << "wrote " << p << "\n";
      }
    } else if (mode == 1) {
      if (cfg.out.empty()) {
        std::cout << pictk::suite_json(cfg, result).dump(2) << "\n";
      } else {
        for (const auto& p : pictk::write_suite_outputs(cfg, result)) std::cout << "wrote " << p << "\n";
      }
    } else {
      if (cfg.out.empty()) {
        for (const auto& [stem, table] : result.tables) {
          std::cout << "# " << stem << "\n" << pictk::to_csv(table);
        }
      } else {
        for (const auto& p : pictk::write_suite_outputs(cfg, result)) std::cout << "wrote " << p << "\n";
      }
    }
    return result.pass() ? kExitPass : kExitFail;
  } catch (const pictk::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
