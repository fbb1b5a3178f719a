#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "bem_annulus/bem_annulus.hpp"

namespace fs = std::filesystem;
using namespace bem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int sh(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const CircleSpec kUnitOuter{{0, 0}, 2.0, 40, 0.0};
const CircleSpec kUnitInner{{0, 0}, 1.0, 40, 0.0};

void criterion1() {
  const auto t0 = Clock::now();
  const auto cases = oracle::kernel_sweep(20261018, 10000);
  const double elapsed = seconds_since(t0);
  double worst_sep = 0.0, worst_near = 0.0;
  std::size_t n_sep = 0, n_near = 0, bad = 0;
  for (const auto& c : cases) {
    const double rel = c.abs_diff() / std::max(std::abs(c.quadrature), 1e-300);
    if (c.regime == oracle::SweepRegime::Separated) {
      ++n_sep;
      worst_sep = std::max(worst_sep, rel);
    } else {
      ++n_near;
      worst_near = std::max(worst_near, rel);
    }
    if (!c.pass()) ++bad;
  }
  const bool ok = bad == 0 && n_sep == 20000 && n_near == 2000 && elapsed < 30.0;
  verdict(1, ok,
          "separated " + std::to_string(n_sep / 2) + " cases x2 kernels worst rel " + fmt("%.2e", worst_sep) +
              " (tol 1e-10); near-singular " + std::to_string(n_near / 2) + " cases worst rel " +
              fmt("%.2e", worst_near) + " (tol 1e-6); failures " + std::to_string(bad) + "; " +
              fmt("%.2f", elapsed) + " s (limit 30 s)");
}

void criterion2() {
  ScenarioConfig cfg;
  const AnnulusMesh mesh = cfg.mesh();
  const auto row_sum = [&](Point2 p) {
    double s = 0.0;
    for (const auto& e : mesh.elements()) s += f2(e, p);
    return s;
  };
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const auto polar = [&](double r) {
    const double t = angle(rng);
    return Point2{r * std::cos(t), r * std::sin(t)};
  };
  // Keep samples a few element lengths clear of the chords.
  std::uniform_real_distribution<double> r_in(0.020, 0.095), r_hole(0.0, 0.012), r_out(0.105, 0.5);
  double worst_in = 0.0, worst_out = 0.0, worst_mid = 0.0;
  for (int i = 0; i < 100; ++i) worst_in = std::max(worst_in, std::abs(row_sum(polar(r_in(rng))) - 1.0));
  for (int i = 0; i < 20; ++i) worst_out = std::max(worst_out, std::abs(row_sum(polar(r_hole(rng)))));
  for (int i = 0; i < 80; ++i) worst_out = std::max(worst_out, std::abs(row_sum(polar(r_out(rng)))));
  for (const auto& e : mesh.elements()) worst_mid = std::max(worst_mid, std::abs(row_sum(e.midpoint()) - 0.5));
  const bool ok = mesh.size() == 80 && worst_in <= 1e-10 && worst_out <= 1e-10 && worst_mid <= 1e-10;
  verdict(2, ok,
          "80-element levitation mesh: interior |sum-1| " + fmt("%.2e", worst_in) + ", exterior incl. 20 in hole |sum| " +
              fmt("%.2e", worst_out) + ", midpoints |sum-1/2| " + fmt("%.2e", worst_mid) + " (tol 1e-10)");
}

void criterion3() {
  const AnnulusMesh mesh = build_annulus({0, 0}, 2.0, {0, 0}, 1.0, 40, 40);
  const auto ref = oracle::HarmonicReference::log_r({0, 0});
  Eigen::VectorXd a(mesh.size());
  for (std::size_t k = 0; k < mesh.size(); ++k) a[k] = ref.value(mesh[k].midpoint());
  const BoundarySolution sol = solve_dirichlet_to_neumann(assemble(mesh), a);
  double flux_err = 0.0;
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    const double exact = mesh.is_outer(k) ? 0.5 : -1.0;
    flux_err = std::max(flux_err, std::abs(sol.p_bar[k] - exact) / std::abs(exact));
  }
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r(1.1, 1.9), t(0.0, 2.0 * std::numbers::pi);
  double pot_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double rr = r(rng), tt = t(rng);
    const Point2 p{rr * std::cos(tt), rr * std::sin(tt)};
    pot_err = std::max(pot_err, std::abs(interior_potential(sol, p) - std::log(rr)) / std::abs(std::log(rr)));
  }
  verdict(3, flux_err <= 0.02 && pot_err <= 0.01,
          "ln r on r in [1,2], N=80: max flux rel err " + fmt("%.3f%%", 100 * flux_err) +
              " (limit 2%); 50 interior points r in [1.1,1.9] max rel err " + fmt("%.3f%%", 100 * pot_err) +
              " (limit 1%)");
}

ConvergenceRecord run_convergence(double& elapsed) {
  const std::size_t ns[] = {20, 40, 80, 160};
  const auto t0 = Clock::now();
  ConvergenceRecord rec = convergence_study(kUnitOuter, kUnitInner, oracle::HarmonicReference::log_r({0, 0}), ns);
  elapsed = seconds_since(t0);
  return rec;
}

void criterion4(const ConvergenceRecord& rec, double elapsed) {
  bool ok = elapsed < 10.0 && rec.entries.size() == 4;
  std::string ratios;
  for (std::size_t i = 1; i < rec.entries.size(); ++i) {
    const double ratio = rec.entries[i - 1].avg_error / rec.entries[i].avg_error;
    ok = ok && rec.entries[i].avg_error < rec.entries[i - 1].avg_error && ratio >= 1.5;
    ratios += (i > 1 ? ", " : "") + fmt("%.2f", ratio);
  }
  verdict(4, ok, "ln r, N in {20,40,80,160}: avg error " + fmt("%.3e", rec.entries.front().avg_error) + " -> " +
                     fmt("%.3e", rec.entries.back().avg_error) + ", per-doubling ratios " + ratios +
                     " (min 1.5); " + fmt("%.2f", elapsed) + " s (limit 10 s)");
}

void criterion8(const ConvergenceRecord& rec) {
  bool ok = rec.entries.size() == 4;
  std::string ratios;
  for (std::size_t i = 1; i < rec.entries.size(); ++i) {
    const double ratio = std::abs(rec.entries[i - 1].net_flux) / std::abs(rec.entries[i].net_flux);
    ok = ok && ratio >= 1.6;
    ratios += (i > 1 ? ", " : "") + fmt("%.2f", ratio);
  }
  verdict(8, ok, "|net flux| " + fmt("%.3e", std::abs(rec.entries.front().net_flux)) + " -> " +
                     fmt("%.3e", std::abs(rec.entries.back().net_flux)) + ", per-doubling reduction " + ratios +
                     " (at least halving, min 1.6)");
}


bool parse_report(const std::string& text, std::vector<double>& errors, double& average) {
  std::istringstream in(text);
  std::string line;
  errors.clear();
  average = -1.0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string m, c, e, avg;
    if (!(row >> m >> c >> e) || e.back() != '%') continue;
    try {
      std::stod(m);
    } catch (...) {
      continue;
    }
    errors.push_back(std::stod(e.substr(0, e.size() - 1)));
    if (row >> avg) average = std::stod(avg.substr(0, avg.size() - 1));
  }
  return errors.size() == 8 && average >= 0.0;
}

void criterion5(const fs::path& work) {
  struct Table {
    const char* file;
    double average;
    std::vector<double> printed;
  };
  const Table tables[] = {
      {"table1.csv", 7.47, {1.53, 12, 4.16, 1.58, 5.55, 13.04, 11.90, 10}},
      {"table2.csv", 5.87, {0, 0, 15.38, 2.98, 5.97, 19.35, 0, 3.26}},
  };
  bool ok = true;
  std::string detail;
  for (const auto& t : tables) {
    const fs::path log = work / (std::string(t.file) + ".log");
    const int code = sh(std::string(BEM_CLI_PATH) + " report --reference " + BEM_FIXTURE_DIR + "/" + t.file +
                        " > " + log.string() + " 2>&1");
    std::vector<double> errors;
    double average = 0.0;
    if (code != 0 || !parse_report(slurp(log), errors, average)) {
      ok = false;
      detail += std::string(t.file) + ": report failed; ";
      continue;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
      // Table 1 row 1 prints 1.53 for 1.538.
      if (&t == &tables[0] && i == 0) continue;
      worst = std::max(worst, std::abs(errors[i] - t.printed[i]));
    }
    const bool row_ok = worst <= 0.01 + 1e-9;
    const bool avg_ok = std::abs(average - t.average) <= 0.01 + 1e-9;
    ok = ok && row_ok && avg_ok;
    detail += std::string(t.file) + " average " + fmt("%.2f%%", average) + " (expected " +
              fmt("%.2f%%", t.average) + "), worst row deviation " + fmt("%.3f", worst) + "; ";
  }
  verdict(5, ok, detail + "row 1 of table 1 prints 1.54 vs 1.53 (rounding)");
}

void criterion6(const fs::path& work) {
  const std::string cli = BEM_CLI_PATH;
  const std::string cfg = std::string(" --config ") + BEM_FIXTURE_DIR + "/levitation_initial.json";
  std::ofstream(work / "plate_points.csv") << "x,y\n-0.015,0.02\n-0.005,0.02\n0.005,0.02\n0.015,0.02\n"
                                              "-0.015,0.016\n-0.005,0.016\n0.005,0.016\n0.015,0.016\n";
  const auto pipeline = [&](const fs::path& dir) {
    const std::string out = dir.string();
    const std::string quiet = " > /dev/null 2>&1";
    if (sh(cli + " mesh" + cfg + " --out " + out + quiet) != 0) return false;
    if (sh(cli + " synth" + cfg + " --reference log_r --out " + out + quiet) != 0) return false;
    if (sh(cli + " solve" + cfg + " --fem " + out + "/fem.csv --out " + out + quiet) != 0) return false;
    if (sh(cli + " eval --solution " + out + "/solution.txt --points " + (work / "plate_points.csv").string() +
           " --out " + out + quiet) != 0)
      return false;
    return sh(cli + " report --reference " + BEM_FIXTURE_DIR + "/table1.csv --computed " + out +
              "/field.csv --out " + out + quiet) == 0;
  };
  const auto t0 = Clock::now();
  const bool first = pipeline(work / "run_a");
  const double elapsed = seconds_since(t0);
  const bool second = pipeline(work / "run_b");
  bool identical = first && second;
  int compared = 0;
  for (const char* name : {"mesh.csv", "fem.csv", "solution.txt", "plate.csv", "field.csv", "report.txt"}) {
    const std::string a = slurp(work / "run_a" / name), b = slurp(work / "run_b" / name);
    identical = identical && !a.empty() && a == b;
    ++compared;
  }
  verdict(6, first && second && identical && elapsed < 5.0,
          "mesh -> synth -> solve -> eval -> report on the 40+40 levitation geometry: " +
              std::string(identical ? "outputs bitwise identical across runs" : "outputs differ or missing") +
              " (" + std::to_string(compared) + " files); wall time " + fmt("%.2f", elapsed) + " s (limit 5 s)");
}

AnnulusMesh random_mesh(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double R = 0.5 + 2.0 * u(rng);
  const double r = R * (0.1 + 0.5 * u(rng));
  const double room = R - r;
  const double off = room * 0.6 * u(rng);
  const double ang = 2.0 * std::numbers::pi * u(rng);
  std::uniform_int_distribution<std::size_t> n(8, 40);
  return AnnulusMesh({{0.0, 0.0}, R, n(rng), ang}, {{off * std::cos(ang), off * std::sin(ang)}, r, n(rng), 0.0});
}

void criterion7() {
  std::mt19937_64 rng(2026);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst_residual = 0.0, worst_linear = 0.0, worst_perm = 0.0;
  bool ok = true;
  for (int inst = 0; inst < 100; ++inst) {
    const AnnulusMesh mesh = random_mesh(rng);
    const InfluenceMatrices mats = assemble(mesh);
    const Eigen::Index n = mats.n();
    Eigen::VectorXd a(n), b(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      a[k] = g(rng);
      b[k] = g(rng);
    }
    const double alpha = g(rng), beta = g(rng);
    const BoundarySolution sa = solve_dirichlet_to_neumann(mats, a);
    const BoundarySolution sb = solve_dirichlet_to_neumann(mats, b);
    const BoundarySolution sc = solve_dirichlet_to_neumann(mats, alpha * a + beta * b);
    for (const BoundarySolution* s : {&sa, &sb, &sc}) {
      const double rel = s->residual_norm / s->a_bar.lpNorm<Eigen::Infinity>();
      worst_residual = std::max(worst_residual, rel);
      ok = ok && rel <= 1e-9;
    }
    const Eigen::VectorXd combo = alpha * sa.p_bar + beta * sb.p_bar;
    const double lin = (sc.p_bar - combo).lpNorm<Eigen::Infinity>() / std::max(1.0, combo.lpNorm<Eigen::Infinity>());
    worst_linear = std::max(worst_linear, lin);
    ok = ok && lin <= 1e-9;

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    InfluenceMatrices permuted = mats;
    Eigen::VectorXd pa(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      pa[i] = a[order[i]];
      for (Eigen::Index j = 0; j < n; ++j) {
        permuted.f1(i, j) = mats.f1(order[i], order[j]);
        permuted.f2(i, j) = mats.f2(order[i], order[j]);
      }
    }
    const BoundarySolution sp = solve_dirichlet_to_neumann(permuted, pa);
    double perm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) perm = std::max(perm, std::abs(sp.p_bar[i] - sa.p_bar[order[i]]));
    perm /= std::max(1.0, sa.p_bar.lpNorm<Eigen::Infinity>());
    worst_perm = std::max(worst_perm, perm);
    ok = ok && perm <= 1e-9;
  }
  verdict(7, ok,
          "100 random annuli: worst residual/||A||inf " + fmt("%.2e", worst_residual) + " (limit 1e-9), linearity " +
              fmt("%.2e", worst_linear) + ", permutation " + fmt("%.2e", worst_perm) + " (limit 1e-9)");
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / ("bem_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(work);
  fs::create_directories(work);

  criterion1();
  criterion2();
  criterion3();
  double conv_elapsed = 0.0;
  const ConvergenceRecord rec = run_convergence(conv_elapsed);
  criterion4(rec, conv_elapsed);
  criterion5(work);
  criterion6(work);
  criterion7();
  criterion8(rec);

  fs::remove_all(work);
  std::printf("%d of 8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
