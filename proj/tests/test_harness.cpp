#include "h2mixed/exceptions.hpp"
#include "h2mixed/study.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

using namespace h2mixed;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

StudyConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

// runs the CLI and returns its exit status
int run_cli(const std::string& args) {
  const std::string cmd = std::string(H2MIXED_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / ("h2mixed_harness_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

const char* kCaseA = "domain=square\nbc.E=gamma0\nbc.W=gamma0\nbc.N=gamma3\nbc.S=gamma3\nc0=0\nc1=1\ncase=u1ex\n";

} // namespace

// ------------------------------------------------------------ manufactured data

TEST(Manufactured, DerivativesMatchFiniteDifferences) {
  for (const char* name : {"u1ex", "u2ex"}) {
    const ManufacturedCase mc = make_case(name, 2.0, 4.0);
    for (Point p : {Point{0.31, 0.47}, Point{0.7, 0.2}, Point{0.55, 0.9}}) {
      const Point g = oracle::fd_grad(mc.u, p);
      EXPECT_NEAR(mc.grad_u(p).x, g.x, 1e-6 * (1 + std::abs(g.x))) << name;
      EXPECT_NEAR(mc.grad_u(p).y, g.y, 1e-6 * (1 + std::abs(g.y))) << name;
      EXPECT_NEAR(mc.lap_u(p), oracle::fd_lap(mc.u, p), 1e-4 * (1 + std::abs(mc.lap_u(p)))) << name;
      const Point gl = oracle::fd_grad(mc.lap_u, p);
      EXPECT_NEAR(mc.grad_lap_u(p).x, gl.x, 1e-5 * (1 + std::abs(gl.x))) << name;
      EXPECT_NEAR(mc.grad_lap_u(p).y, gl.y, 1e-5 * (1 + std::abs(gl.y))) << name;
      EXPECT_NEAR(mc.bilap_u(p), oracle::fd_lap(mc.lap_u, p), 1e-4 * (1 + std::abs(mc.bilap_u(p)))) << name;
      EXPECT_NEAR(mc.div_alpha(p), oracle::fd_div([&](Point x) { return mc.alpha(x); }, p),
                  1e-5 * (1 + std::abs(mc.div_alpha(p))));
      EXPECT_NEAR(mc.f(p), mc.bilap_u(p) - 2.0 * mc.lap_u(p) + 4.0 * mc.u(p), 1e-9 * (1 + std::abs(mc.f(p))));
    }
  }
}

TEST(Manufactured, ClosedFormValues) {
  const ManufacturedCase u1 = make_case("u1ex", 0.0, 0.0);
  EXPECT_NEAR(u1.u({0.25, 0.0}), 1.0, 1e-15);
  EXPECT_NEAR(u1.u({0.5, 0.3}), 0.0, 1e-15);
  EXPECT_NEAR(u1.lap_u({0.25, 0.0}), -13 * pi * pi, 1e-12);
  const ManufacturedCase u2 = make_case("u2ex", 0.0, 0.0);
  const Point p{0.3, 0.6};
  const double want = (std::sin(2 * pi * 0.3) + std::pow(0.3, 4.5)) * (std::cos(3 * pi * 0.6) + std::pow(0.6, 4.25));
  EXPECT_NEAR(u2.u(p), want, 1e-14);
  EXPECT_THROW(make_case("u3ex", 0.0, 0.0), Error);
}

TEST(Manufactured, LimitedRegularityCapsTheMultiplierRate) {
  // At k = 2 the alpha error is dominated by the DG_2 projection of div(alpha),
  // and for u2ex div(alpha) carries y^(1/4), so the projection rate falls from 3
  // towards 3/4 once h resolves the boundary layer. Checked on the projection
  // itself since the full solve at these sizes is out of unit-test reach.
  auto proj_error = [](const ManufacturedCase& mc, int n) {
    auto m = std::make_shared<const Mesh2D>(build_unit_square_right(n));
    const FESpace U = make_dg_space(m, 2);
    const ScalarFn f = [&](Point p) { return mc.div_alpha(p); };
    const Eigen::VectorXd x = interp_dg(U, f);
    double e = 0.0, nrm = 0.0;
    for (int c = 0; c < m->num_cells(); ++c) {
      const CellMap map = CellMap::of(*m, c);
      const auto& v = m->cells[c];
      const Point a = m->vertices[v[0]], b = m->vertices[v[1]], d = m->vertices[v[2]];
      e += oracle::integrate_triangle(a, b, d, 8, [&](Point p) {
        const double r = eval_dg(U, x, c, to_reference(map, p)) - f(p);
        return r * r;
      });
      nrm += oracle::integrate_triangle(a, b, d, 8, [&](Point p) { return f(p) * f(p); });
    }
    return std::sqrt(e / nrm);
  };
  const ManufacturedCase smooth = make_case("u1ex", 0.0, 1.0), rough = make_case("u2ex", 0.0, 1.0);
  EXPECT_NEAR(observed_rate(proj_error(smooth, 64), proj_error(smooth, 128)), 3.0, 0.1);
  const double r64 = proj_error(rough, 64), r128 = proj_error(rough, 128), r256 = proj_error(rough, 256);
  EXPECT_LT(observed_rate(r64, r128), 2.8);
  EXPECT_LT(observed_rate(r128, r256), 2.0);
}

TEST(Manufactured, ObservedRate) {
  EXPECT_DOUBLE_EQ(observed_rate(0.4, 0.1), 2.0);
  EXPECT_DOUBLE_EQ(observed_rate(1.0, 1.0), 0.0);
}

// ------------------------------------------------------------ errors

TEST(Errors, SolutionInTheDiscreteSpaceIsReproduced) {
  // u quadratic: v = grad u is in RT_3, alpha = -c0 grad u, so k = 2 is exact
  ManufacturedCase mc;
  mc.name = "quadratic";
  mc.c0 = 1.0;
  mc.c1 = 2.0;
  mc.u = [](Point p) { return p.x * p.x + p.x * p.y - p.y * p.y + 1.0; };
  mc.grad_u = [](Point p) { return Point{2 * p.x + p.y, p.x - 2 * p.y}; };
  mc.lap_u = [](Point) { return 0.0; };
  mc.bilap_u = [](Point) { return 0.0; };
  mc.grad_lap_u = [](Point) { return Point{0.0, 0.0}; };
  GammaPartition part;
  part.segments = {{"S", Gamma::G2}, {"E", Gamma::G0}, {"N", Gamma::G3}, {"W", Gamma::G1}};
  ProblemSpec s;
  s.gamma = part;
  s.c0 = 1.0;
  s.c1 = 2.0;
  s.k = 2;
  s.exact = mc;
  const RunResult r = run_case(s, 4, SolverKind::Direct);
  EXPECT_TRUE(r.errors.strengthened);
  EXPECT_LT(r.errors.R_uv(), 1e-9);
  EXPECT_LT(r.errors.R_alpha(), 1e-8);
}

TEST(Errors, StrengthenedNormOnlyWithClampedEdges) {
  ProblemSpec s;
  s.gamma = GammaPartition::uniform(Domain::UnitSquare, Gamma::G0);
  s.c1 = 1.0;
  s.k = 0;
  s.exact = make_case("u1ex", 0.0, 1.0);
  const RunResult plain = run_case(s, 8, SolverKind::Direct);
  EXPECT_FALSE(plain.errors.strengthened);
  EXPECT_EQ(plain.errors.R_uv(), plain.errors.R_uv_plain());
  s.gamma.segments["S"] = Gamma::G1;
  const RunResult str = run_case(s, 8, SolverKind::Direct);
  EXPECT_TRUE(str.errors.strengthened);
  EXPECT_GT(str.errors.e_gn, 0.0);
  EXPECT_GT(str.errors.R_uv_strengthened(), 0.0);
}

TEST(Errors, CaseARatesAtLowOrder) {
  StudyConfig c = parse(std::string(kCaseA) + "k=0,1\nh_list=8,16,32\nsolver=direct\n");
  const auto rows = convergence_study(c);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_FALSE(rows[0].rate_uv.has_value());
  EXPECT_NEAR(*rows[2].rate_uv, 1.0, 0.1);
  EXPECT_NEAR(*rows[5].rate_uv, 2.0, 0.1);
  EXPECT_NEAR(*rows[5].rate_alpha, 2.0, 0.15);
}

TEST(Errors, DirectAndMultigridAgreeToThreeDigits) {
  const std::vector<std::string> cases = {
      std::string(kCaseA),
      "domain=square\nbc.E=gamma0\nbc.W=gamma0\nbc.S=gamma2\nbc.N=gamma3\nc0=2\nc1=4\ncase=u1ex\n",
      "domain=lshape\nbc.all=gamma0\nc0=0\nc1=0\ncase=u1ex\n",
      "domain=square\nbc.S=gamma1\nbc.E=gamma1\nbc.N=gamma0\nbc.W=gamma3\nc0=0\nc1=0\nlambda=125\ncase=u1ex\n",
  };
  for (const auto& text : cases) {
    const StudyConfig c = parse(text + "tol=1e-10\nmaxit=100\n");
    for (int k = 0; k <= 2; ++k) {
      const RunResult d = run_case(c.problem(k), 16, SolverKind::Direct);
      const RunResult m = run_case(c.problem(k), 16, SolverKind::Multigrid, c.fgmres);
      ASSERT_TRUE(m.report.converged);
      EXPECT_NEAR(m.errors.R_uv() / d.errors.R_uv(), 1.0, 5e-4) << text << "k = " << k;
      EXPECT_EQ(m.N, d.N);
    }
  }
}

// ------------------------------------------------------------ configuration

TEST(Config, ParsesAllKeys) {
  const StudyConfig c = parse(
      "# comment\n"
      "domain = lshape\n"
      "bc.all = gamma0   # trailing comment\n"
      "bc.L3 = gamma3\n"
      "c0=2.5\nc1=0.5\nk=0, 1,2\nh_list=16,1/32,0.015625\ncase=u2ex\nlambda=125\nsolver=direct\n"
      "weight_list=1/h,1,2.5,1/h_level\ntol=1e-9\nmaxit=77\nthreads=1\n");
  EXPECT_EQ(c.domain, Domain::LShape);
  EXPECT_EQ(c.gamma.segments.at("L0"), Gamma::G0);
  EXPECT_EQ(c.gamma.segments.at("L3"), Gamma::G3);
  EXPECT_EQ(c.gamma.segments.size(), 6u);
  EXPECT_EQ(c.c0, 2.5);
  EXPECT_EQ(c.c1, 0.5);
  EXPECT_EQ(c.k_list, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(c.n_list, (std::vector<int>{16, 32, 64}));
  EXPECT_EQ(c.case_name, "u2ex");
  EXPECT_EQ(c.lambda, 125.0);
  EXPECT_EQ(c.solver, SolverKind::Direct);
  ASSERT_EQ(c.weight_list.size(), 4u);
  EXPECT_EQ(c.weight_list[0].kind, AuxWeight::Kind::InvH);
  EXPECT_EQ(c.weight_list[1].kind, AuxWeight::Kind::Fixed);
  EXPECT_EQ(c.weight_list[2].value, 2.5);
  EXPECT_EQ(c.weight_list[3].kind, AuxWeight::Kind::InvHLevel);
  EXPECT_EQ(c.fgmres.tol_abs, 1e-9);
  EXPECT_EQ(c.fgmres.tol_rel, 1e-9);
  EXPECT_EQ(c.fgmres.maxit, 77);
  EXPECT_EQ(c.policy, ExecPolicy::Serial);
  const ProblemSpec s = c.problem(1);
  EXPECT_EQ(s.k, 1);
  EXPECT_EQ(s.exact->name, "u2ex");
}

TEST(Config, Errors) {
  EXPECT_THROW(parse(std::string(kCaseA) + "colour=blue\n"), Error);
  EXPECT_THROW(parse(std::string(kCaseA) + "c0=two\n"), Error);
  EXPECT_THROW(parse(std::string(kCaseA) + "k=1.5\n"), Error);
  EXPECT_THROW(parse(std::string(kCaseA) + "solver=cg\n"), Error);
  EXPECT_THROW(parse(std::string(kCaseA) + "bc.L2=gamma0\n"), Error);
  EXPECT_THROW(parse(std::string(kCaseA) + "bc.N=gamma9\n"), Error);
  EXPECT_THROW(parse(std::string(kCaseA) + "weight_list=0\n"), Error);
  EXPECT_THROW(parse(std::string(kCaseA) + "h_list=-0.5\n"), Error);
  EXPECT_THROW(parse("domain=circle\n"), Error);
  EXPECT_THROW(parse("domain=square\nbc.N=gamma0\n"), Error);
  EXPECT_THROW(parse("just some text\n"), Error);
  EXPECT_THROW(parse_config_file("/nonexistent/config.txt"), Error);
}

TEST(Config, AuxWeightLabels) {
  EXPECT_EQ(AuxWeight::parse("1/h").label(), "1/h");
  EXPECT_EQ(AuxWeight::parse("h").kind, AuxWeight::Kind::InvH);
  EXPECT_EQ(AuxWeight::parse("inv_h").kind, AuxWeight::Kind::InvH);
  EXPECT_EQ(AuxWeight::parse("1/h_level").label(), "1/h_level");
  EXPECT_EQ(AuxWeight::parse("1").label(), "1");
  EXPECT_EQ(AuxWeight::parse("0.25").label(), "0.25");
  EXPECT_THROW(AuxWeight::parse("-1"), Error);
  EXPECT_THROW(AuxWeight::parse("heavy"), Error);
}

TEST(Csv, Headers) {
  std::ostringstream a, b;
  write_convergence_csv(a, {});
  write_bench_csv(b, {});
  const auto la = lines(a.str()), lb = lines(b.str());
  ASSERT_EQ(la.size(), 2u);
  ASSERT_EQ(lb.size(), 2u);
  EXPECT_EQ(la[0], "# h2mixed csv v1 converge");
  EXPECT_EQ(la[1], "k,inv_h,N,R_uv,R_uv_plain,R_uv_strengthened,R_alpha,rate_uv,rate_alpha,iterations,solver,"
                   "converged,wall_time");
  EXPECT_EQ(lb[0], "# h2mixed csv v1 mg-bench");
  EXPECT_EQ(lb[1], "k,inv_h,N,solver,weight,iterations,converged,wall_time");
}

// ------------------------------------------------------------ command line

TEST(Cli, ExitCodes) {
  const fs::path d = scratch_dir();
  const auto ok = write_file(d, "ok.cfg", std::string(kCaseA) + "k=0\nh_list=4,8\nsolver=direct\n");
  const auto out = d / "ok.csv";
  EXPECT_EQ(run_cli("converge " + ok.string() + " --out " + out.string()), 0);
  const auto rows = lines(read_file(out));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[2].substr(0, rows[2].find(',', 4)), "0,4," + std::to_string(oracle::system_dimension(0, 4)));

  const auto bad = write_file(d, "bad.cfg",
                              "domain=square\nbc.E=gamma0\nbc.W=gamma0\nbc.S=gamma2\nbc.N=gamma3\nc0=0\nc1=4\n"
                              "k=0\nh_list=8\n");
  EXPECT_EQ(run_cli("converge " + bad.string() + " --out " + (d / "bad.csv").string()), 2);
  EXPECT_EQ(run_cli("mg-bench " + bad.string() + " --out " + (d / "bad.csv").string()), 2);

  const auto slow = write_file(d, "slow.cfg", std::string(kCaseA) + "k=1\nh_list=16\nsolver=mg\ntol=1e-14\nmaxit=1\n");
  EXPECT_EQ(run_cli("mg-bench " + slow.string() + " --out " + (d / "slow.csv").string()), 3);
  EXPECT_EQ(run_cli("converge " + slow.string() + " --out " + (d / "slow.csv").string()), 3);

  const auto typo = write_file(d, "typo.cfg", std::string(kCaseA) + "kk=1\n");
  EXPECT_EQ(run_cli("converge " + typo.string() + " --out " + (d / "typo.csv").string()), 2);
  EXPECT_NE(run_cli("converge"), 0);
  fs::remove_all(d);
}

TEST(Cli, EmptyMeshListGivesEmptyTable) {
  const fs::path d = scratch_dir();
  const auto cfg = write_file(d, "empty.cfg", std::string(kCaseA) + "k=0\nh_list=\n");
  EXPECT_EQ(run_cli("converge " + cfg.string() + " --out " + (d / "e.csv").string()), 0);
  EXPECT_EQ(lines(read_file(d / "e.csv")).size(), 2u);
  fs::remove_all(d);
}

TEST(Cli, BenchAndMatrixDump) {
  const fs::path d = scratch_dir();
  const auto cfg = write_file(d, "b.cfg", "domain=square\nbc.all=gamma1\nc0=0\nc1=0\nk=0\nh_list=8\n"
                                          "solver=mg\nweight_list=1/h,1\n");
  EXPECT_EQ(run_cli("mg-bench " + cfg.string() + " --out " + (d / "b.csv").string() + " --dump-matrix " +
                    (d / "K.txt").string()),
            0);
  const auto rows = lines(read_file(d / "b.csv"));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NE(rows[2].find("mg-aux,1/h,"), std::string::npos);
  EXPECT_NE(rows[3].find("mg-aux,1,"), std::string::npos);
  std::istringstream K(read_file(d / "K.txt"));
  long rowsK, colsK, nnz;
  K >> rowsK >> colsK >> nnz;
  EXPECT_EQ(rowsK, oracle::system_dimension(0, 8));
  EXPECT_EQ(colsK, rowsK);
  long count = 0;
  for (long r, c; K >> r >> c;) {
    double v;
    K >> v;
    EXPECT_GE(r, 1);
    EXPECT_LE(c, colsK);
    ++count;
  }
  EXPECT_EQ(count, nnz);
  fs::remove_all(d);
}
