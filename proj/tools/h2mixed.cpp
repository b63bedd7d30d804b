// Command-line driver: convergence studies and multigrid benchmarks.
//
//   h2mixed converge <config> --out results.csv [--dump-matrix K.txt]
//   h2mixed mg-bench <config> --out results.csv [--dump-matrix K.txt]
//
// Exit codes: 0 success, 1 usage or I/O error, 2 inadmissible configuration,
// 3 a solve did not converge.

#include "h2mixed/exceptions.hpp"
#include "h2mixed/study.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitInadmissible = 2;
constexpr int kExitNonconvergence = 3;

std::function<void(const h2mixed::BlockSystem&)> matrix_dumper(const std::string& path) {
  if (path.empty()) return {};
  return [path](const h2mixed::BlockSystem& sys) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write matrix dump '" + path + "'");
    h2mixed::write_coordinate(os, sys.K);
  };
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  return os;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed finite elements and multigrid for fourth-order problems"};
  app.require_subcommand(1);

  std::string config, out, dump;
  auto* converge = app.add_subcommand("converge", "error and rate table over a list of mesh sizes");
  auto* bench = app.add_subcommand("mg-bench", "solver iteration counts and timings");
  for (auto* sc : {converge, bench}) {
    sc->add_option("config", config, "key=value configuration file")->required()->check(CLI::ExistingFile);
    sc->add_option("--out", out, "CSV output path")->required();
    sc->add_option("--dump-matrix", dump, "write the first assembled matrix in coordinate format");
  }
  CLI11_PARSE(app, argc, argv);

  try {
    const h2mixed::StudyConfig cfg = h2mixed::parse_config_file(config);
    bool converged = true;
    if (converge->parsed()) {
      const auto rows = h2mixed::convergence_study(cfg, matrix_dumper(dump));
      auto os = open_out(out);
      h2mixed::write_convergence_csv(os, rows);
      for (const auto& r : rows) converged &= r.run.report.converged;
    } else {
      const auto rows = h2mixed::mg_benchmark(cfg, matrix_dumper(dump));
      auto os = open_out(out);
      h2mixed::write_bench_csv(os, rows);
      for (const auto& r : rows) converged &= r.report.converged;
    }
    if (!converged) {
      std::cerr << "warning: at least one solve did not converge\n";
      return kExitNonconvergence;
    }
    return 0;
  } catch (const h2mixed::InadmissibleProblem& e) {
    std::cerr << "inadmissible configuration: " << e.what() << "\n";
    return kExitInadmissible;
  } catch (const h2mixed::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitNonconvergence;
  } catch (const h2mixed::Error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitInadmissible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
