#include "metallic/catalog.hpp"
#include "metallic/errors.hpp"
#include "metallic/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_unknown_entry = 2;
constexpr int exit_bad_params = 3;
constexpr int exit_io = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

metallic::ParamMap parse_assignments(const std::vector<std::string>& items) {
  metallic::ParamMap out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw metallic::DomainError("expected key=value, got '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << text;
  if (!file.flush()) throw IoError("failed writing '" + path + "'");
}

struct Options {
  std::string entry;
  std::vector<std::string> assignments;
  int samples = 20;
  std::uint64_t seed = 0;
  std::string mode = "analytic";
  std::string suite = "all";
  std::string out;
  std::optional<double> tol_structure, tol_angle, tol_connection, tol_inheritance, tol_oracle;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("entry", o.entry, "catalog entry name")->required();
  cmd->add_option("params", o.assignments, "entry parameters as key=value");
  cmd->add_option("--samples", o.samples, "number of sample points")->capture_default_str();
  cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
  cmd->add_option("--mode", o.mode, "derivative mode: analytic or fd")->capture_default_str();
  cmd->add_option("--out", o.out, "write the JSON report to this file");
  cmd->add_option("--tol-structure", o.tol_structure, "tolerance of the algebraic identities");
  cmd->add_option("--tol-angle", o.tol_angle, "slant angle tolerance (rad)");
  cmd->add_option("--tol-connection", o.tol_connection, "tolerance of the differential identities");
  cmd->add_option("--tol-inheritance", o.tol_inheritance, "tolerance of the chain comparison");
  cmd->add_option("--tol-oracle", o.tol_oracle, "tolerance of the closed-form comparison");
}

metallic::RunConfig make_config(const Options& o) {
  metallic::RunConfig c;
  c.entry = o.entry;
  c.params = parse_assignments(o.assignments);
  c.samples = o.samples;
  c.seed = o.seed;
  if (o.mode == "analytic") {
    c.mode = metallic::DerivativeMode::analytic;
  } else if (o.mode == "fd") {
    c.mode = metallic::DerivativeMode::central_difference;
  } else {
    throw metallic::DomainError("mode must be analytic or fd");
  }
  c.suites = metallic::parse_suites(o.suite);
  c.tol_structure = o.tol_structure;
  c.tol_angle = o.tol_angle;
  c.tol_connection = o.tol_connection;
  c.tol_inheritance = o.tol_inheritance;
  c.tol_oracle = o.tol_oracle;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Induced structures on submanifolds of metallic Riemannian manifolds"};
  app.require_subcommand(1);
  auto* list = app.add_subcommand("catalog", "list catalog entries");
  Options analyze_opts;
  auto* analyze = app.add_subcommand("analyze", "induced structure and slant summary");
  add_common(analyze, analyze_opts);
  Options verify_opts;
  auto* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify, verify_opts);
  verify->add_option("--suite", verify_opts.suite, "structure, slant, connection, inheritance or all")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_bad_params;
  }

  try {
    if (list->parsed()) {
      std::cout << metallic::catalog_list();
      return exit_ok;
    }
    if (analyze->parsed()) {
      emit(metallic::to_json_text(metallic::analyze(make_config(analyze_opts))), analyze_opts.out);
      return exit_ok;
    }
    const metallic::RunResult result = metallic::run(make_config(verify_opts));
    const std::string text = metallic::to_json_text(result.report);
    if (verify_opts.out.empty()) {
      std::cout << text;
    } else {
      emit(text, verify_opts.out);
      std::cout << metallic::summary_text(result);
    }
    return result.passed ? exit_ok : exit_check_failed;
  } catch (const metallic::UnknownEntryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_unknown_entry;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const metallic::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_bad_params;
  } catch (const metallic::StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_bad_params;
  } catch (const metallic::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_bad_params;
  } catch (const metallic::DegeneratePointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_bad_params;
  } catch (const metallic::FrameError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_bad_params;
  }
}
