#pragma once

#include "h2mixed/errors.hpp"
#include "h2mixed/krylov.hpp"
#include "h2mixed/multigrid.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace h2mixed {

enum class SolverKind { Direct, Multigrid };

/// Weight on the auxiliary (1,1) block.
struct AuxWeight {
  enum class Kind {
    Fixed,     ///< `value` on every level
    InvH,      ///< 1/h of the finest mesh, held on every level
    InvHLevel  ///< each level's own 1/h
  };
  Kind kind = Kind::Fixed;
  double value = 1.0;

  /// Accepts a number, "1/h" (also "h", "inv_h") or "1/h_level".
  static AuxWeight parse(const std::string& s);
  std::string label() const;
};

/// Contents of a flat key=value configuration file.
struct StudyConfig {
  Domain domain = Domain::UnitSquare;
  GammaPartition gamma;
  double c0 = 0.0, c1 = 0.0;
  std::vector<int> k_list{0};
  std::vector<int> n_list; ///< values of 1/h
  std::string case_name = "u1ex";
  std::optional<double> lambda;
  SolverKind solver = SolverKind::Multigrid;
  /// Auxiliary (1,1) weights for mg-bench.
  std::vector<AuxWeight> weight_list;
  FGMRESOptions fgmres;
  ExecPolicy policy = ExecPolicy::OpenMP;

  ProblemSpec problem(int k) const;
};

/// Throws Error on unknown keys or malformed values.
StudyConfig parse_config(std::istream& in);
StudyConfig parse_config_file(const std::string& path);

struct RunResult {
  int k = 0, n = 0, N = 0;
  std::string solver;
  ErrorReport errors;
  SolveReport report; ///< iterations = 0 for the direct solver
};

/// Assembles and solves one configuration. With the multigrid solver the
/// mesh comes from refining the coarsest hierarchy mesh, and problems with
/// c1 = 0 are preconditioned through the auxiliary operator with weight 1/h.
/// `on_system`, when set, sees the assembled system before the solve.
RunResult run_case(const ProblemSpec& spec, int n, SolverKind solver, const FGMRESOptions& opt = {},
                   ExecPolicy policy = ExecPolicy::OpenMP,
                   const std::function<void(const BlockSystem&)>& on_system = {});

struct ConvergenceRow {
  RunResult run;
  std::optional<double> rate_uv, rate_alpha;
};

std::vector<ConvergenceRow> convergence_study(const StudyConfig& cfg,
                                              const std::function<void(const BlockSystem&)>& on_system = {});

struct BenchRow {
  int k = 0, n = 0, N = 0;
  std::string solver;
  std::string weight; ///< AuxWeight::label(), empty for the true operator
  SolveReport report;
};

/// Iteration counts and solve times. With a weight list, the clamped problem
/// is preconditioned by multigrid on the auxiliary operator for each weight.
std::vector<BenchRow> mg_benchmark(const StudyConfig& cfg,
                                   const std::function<void(const BlockSystem&)>& on_system = {});

constexpr const char* kCsvVersion = "# h2mixed csv v1";
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);
void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

} // namespace h2mixed
