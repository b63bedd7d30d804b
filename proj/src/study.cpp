#include "h2mixed/study.hpp"

#include "h2mixed/exceptions.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace h2mixed {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size()) throw Error("key '" + key + "': '" + v + "' is not a number");
  return d;
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw Error("key '" + key + "': '" + v + "' is not an integer");
  return int(d);
}

// Accepts 64, 1/64 or 0.015625.
int to_inv_h(const std::string& v) {
  if (v.rfind("1/", 0) == 0) return to_int("h_list", v.substr(2));
  const double d = to_double("h_list", v);
  if (d >= 1.0) return to_int("h_list", v);
  if (d <= 0.0) throw Error("h_list: mesh sizes must be positive");
  return int(std::lround(1.0 / d));
}

} // namespace

AuxWeight AuxWeight::parse(const std::string& s) {
  if (s == "h" || s == "1/h" || s == "inv_h") return {Kind::InvH, 0.0};
  if (s == "1/h_level") return {Kind::InvHLevel, 0.0};
  const double v = to_double("weight_list", s);
  if (!(v > 0.0)) throw Error("weight_list: weights must be positive, got '" + s + "'");
  return {Kind::Fixed, v};
}

std::string AuxWeight::label() const {
  switch (kind) {
  case Kind::InvH:
    return "1/h";
  case Kind::InvHLevel:
    return "1/h_level";
  default: {
    std::ostringstream os;
    os << std::setprecision(10) << value;
    return os.str();
  }
  }
}

ProblemSpec StudyConfig::problem(int k) const {
  ProblemSpec s;
  s.domain = domain;
  s.gamma = gamma;
  s.c0 = c0;
  s.c1 = c1;
  s.k = k;
  s.lambda = lambda;
  s.exact = make_case(case_name, c0, c1);
  return s;
}

StudyConfig parse_config(std::istream& in) {
  StudyConfig c;
  std::map<std::string, std::string> bc;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key == "domain") {
      if (val == "square")
        c.domain = Domain::UnitSquare;
      else if (val == "lshape")
        c.domain = Domain::LShape;
      else
        throw Error("domain must be square or lshape, got '" + val + "'");
    } else if (key.rfind("bc.", 0) == 0) {
      bc[key.substr(3)] = val;
    } else if (key == "c0") {
      c.c0 = to_double(key, val);
    } else if (key == "c1") {
      c.c1 = to_double(key, val);
    } else if (key == "k") {
      c.k_list.clear();
      for (const auto& s : split_list(val)) c.k_list.push_back(to_int(key, s));
    } else if (key == "h_list") {
      c.n_list.clear();
      for (const auto& s : split_list(val)) c.n_list.push_back(to_inv_h(s));
    } else if (key == "case") {
      c.case_name = val;
    } else if (key == "lambda") {
      c.lambda = to_double(key, val);
    } else if (key == "solver") {
      if (val == "mg")
        c.solver = SolverKind::Multigrid;
      else if (val == "direct")
        c.solver = SolverKind::Direct;
      else
        throw Error("solver must be mg or direct, got '" + val + "'");
    } else if (key == "weight_list") {
      c.weight_list.clear();
      for (const auto& s : split_list(val)) c.weight_list.push_back(AuxWeight::parse(s));
    } else if (key == "tol") {
      c.fgmres.tol_abs = c.fgmres.tol_rel = to_double(key, val);
    } else if (key == "tol_abs") {
      c.fgmres.tol_abs = to_double(key, val);
    } else if (key == "tol_rel") {
      c.fgmres.tol_rel = to_double(key, val);
    } else if (key == "maxit") {
      c.fgmres.maxit = to_int(key, val);
    } else if (key == "threads") {
      c.policy = to_int(key, val) == 1 ? ExecPolicy::Serial : ExecPolicy::OpenMP;
    } else {
      throw Error("unknown configuration key '" + key + "'");
    }
  }
  const auto& names = segment_names(c.domain);
  if (auto it = bc.find("all"); it != bc.end()) {
    for (const auto& n : names) c.gamma.segments[n] = parse_gamma(it->second);
    bc.erase(it);
  }
  for (const auto& [seg, g] : bc) c.gamma.segments[seg] = parse_gamma(g);
  for (const auto& [seg, g] : c.gamma.segments) {
    (void)g;
    if (std::find(names.begin(), names.end(), seg) == names.end())
      throw Error("boundary segment '" + seg + "' does not exist on the " + to_string(c.domain) + " domain");
  }
  for (const auto& n : names)
    if (!c.gamma.segments.count(n)) throw Error("boundary segment '" + n + "' has no boundary class");
  for (int n : c.n_list)
    if (n < 1) throw Error("h_list entries must be positive");
  return c;
}

StudyConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open configuration file '" + path + "'");
  return parse_config(in);
}

RunResult run_case(const ProblemSpec& spec, int n, SolverKind solver, const FGMRESOptions& opt, ExecPolicy policy,
                   const std::function<void(const BlockSystem&)>& on_system) {
  check_admissible(spec);
  if (!spec.exact) throw Error("run_case needs a manufactured solution");
  RunResult r;
  r.k = spec.k;
  r.n = n;
  if (solver == SolverKind::Direct) {
    r.solver = "direct";
    AssemblyOptions ao;
    ao.policy = policy;
    const BlockSystem sys = assemble_system(spec, coarse_mesh(spec.domain, n, spec.gamma), ao);
    if (on_system) on_system(sys);
    r.N = sys.size();
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::VectorXd x = direct_solve(sys.K, sys.rhs);
    r.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.report.converged = true;
    r.report.reason = StopReason::Absolute;
    r.report.residual_history = {(sys.rhs - sys.K * x).norm()};
    r.errors = compute_errors(sys, x, *spec.exact);
    return r;
  }
  r.solver = "mg";
  MGOptions mo;
  mo.policy = policy;
  // With c1 = 0 the (1,1) block vanishes and interior star patches are
  // singular, so the hierarchy is built on the auxiliary operator instead.
  if (spec.c1 == 0.0) mo.aux_weight = double(n);
  const MGHierarchy mg = MGHierarchy::build(spec, n, mo);
  std::optional<BlockSystem> own;
  if (mo.aux_weight) {
    AssemblyOptions ao;
    ao.policy = policy;
    own = assemble_system(spec, mg.finest().mesh, ao);
  }
  const BlockSystem& sys = own ? *own : mg.finest().sys;
  if (on_system) on_system(sys);
  r.N = sys.size();
  MGSolveResult res = solve_mg(sys, mg, opt);
  r.report = std::move(res.report);
  r.errors = compute_errors(sys, res.x, *spec.exact);
  return r;
}

std::vector<ConvergenceRow> convergence_study(const StudyConfig& cfg,
                                              const std::function<void(const BlockSystem&)>& on_system) {
  std::vector<ConvergenceRow> rows;
  for (int k : cfg.k_list) check_admissible(cfg.problem(k));
  for (int k : cfg.k_list) {
    const ProblemSpec spec = cfg.problem(k);
    const ConvergenceRow* prev = nullptr;
    for (int n : cfg.n_list) {
      ConvergenceRow row;
      row.run = run_case(spec, n, cfg.solver, cfg.fgmres, cfg.policy, rows.empty() ? on_system : nullptr);
      if (prev && n == 2 * prev->run.n) {
        row.rate_uv = observed_rate(prev->run.errors.R_uv(), row.run.errors.R_uv());
        row.rate_alpha = observed_rate(prev->run.errors.R_alpha(), row.run.errors.R_alpha());
      }
      std::clog << "k=" << k << " 1/h=" << n << " N=" << row.run.N << " R_uv=" << row.run.errors.R_uv()
                << " R_alpha=" << row.run.errors.R_alpha() << " iterations=" << row.run.report.iterations << "\n";
      rows.push_back(std::move(row));
      prev = &rows.back();
    }
  }
  return rows;
}

std::vector<BenchRow> mg_benchmark(const StudyConfig& cfg, const std::function<void(const BlockSystem&)>& on_system) {
  std::vector<BenchRow> rows;
  for (int k : cfg.k_list) check_admissible(cfg.problem(k));
  bool dumped = false;
  auto dump = [&](const BlockSystem& s) {
    if (on_system && !dumped) on_system(s);
    dumped = true;
  };
  for (int k : cfg.k_list) {
    const ProblemSpec spec = cfg.problem(k);
    for (int n : cfg.n_list) {
      if (cfg.weight_list.empty() || cfg.solver == SolverKind::Direct) {
        const RunResult r = run_case(spec, n, cfg.solver, cfg.fgmres, cfg.policy, dump);
        BenchRow b;
        b.k = k;
        b.n = n;
        b.N = r.N;
        b.solver = r.solver;
        b.report = r.report;
        rows.push_back(std::move(b));
        std::clog << "k=" << k << " 1/h=" << n << " " << rows.back().solver
                  << " iterations=" << rows.back().report.iterations << "\n";
        continue;
      }
      for (const auto& w : cfg.weight_list) {
        MGOptions mo;
        mo.policy = cfg.policy;
        if (w.kind == AuxWeight::Kind::InvHLevel)
          mo.aux_weight_inv_h = true;
        else
          mo.aux_weight = w.kind == AuxWeight::Kind::InvH ? double(n) : w.value;
        const MGHierarchy mg = MGHierarchy::build(spec, n, mo);
        AssemblyOptions ao;
        ao.policy = cfg.policy;
        const BlockSystem sys = assemble_system(spec, mg.finest().mesh, ao);
        dump(sys);
        BenchRow b;
        b.k = k;
        b.n = n;
        b.N = sys.size();
        b.solver = "mg-aux";
        b.weight = w.label();
        b.report = solve_mg(sys, mg, cfg.fgmres).report;
        std::clog << "k=" << k << " 1/h=" << n << " weight=" << w.label()
                  << " iterations=" << b.report.iterations << (b.report.converged ? "" : " (not converged)") << "\n";
        rows.push_back(std::move(b));
      }
    }
  }
  return rows;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

} // namespace

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << kCsvVersion << " converge\n";
  os << "k,inv_h,N,R_uv,R_uv_plain,R_uv_strengthened,R_alpha,rate_uv,rate_alpha,iterations,solver,converged,"
        "wall_time\n";
  for (const auto& r : rows) {
    const auto& e = r.run.errors;
    os << r.run.k << "," << r.run.n << "," << r.run.N << "," << fmt(e.R_uv()) << "," << fmt(e.R_uv_plain()) << ","
       << (e.strengthened ? fmt(e.R_uv_strengthened()) : std::string()) << "," << fmt(e.R_alpha()) << ","
       << fmt_opt(r.rate_uv) << "," << fmt_opt(r.rate_alpha) << "," << r.run.report.iterations << ","
       << r.run.solver << "," << (r.run.report.converged ? 1 : 0) << "," << fmt(r.run.report.wall_time) << "\n";
  }
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << kCsvVersion << " mg-bench\n";
  os << "k,inv_h,N,solver,weight,iterations,converged,wall_time\n";
  for (const auto& r : rows) {
    os << r.k << "," << r.n << "," << r.N << "," << r.solver << "," << r.weight << "," << r.report.iterations << ","
       << (r.report.converged ? 1 : 0) << "," << fmt(r.report.wall_time) << "\n";
  }
}

} // namespace h2mixed
