// Acceptance harness: one [PASS]/[FAIL] line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "polymer/analytics.hpp"
#include "polymer/cli/commands.hpp"
#include "polymer/estimators.hpp"
#include "polymer/rng.hpp"

namespace fs = std::filesystem;
using namespace polymer;
namespace an = polymer::analytics;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(bool ok, const std::string& name, const std::string& detail, const Timer& timer) {
  if (!ok) ++failures;
  std::printf("[%s] %s: %s (%.1f s)\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str(), timer.seconds());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const ObservableRow& row(const ExperimentResult& r, const std::string& name) {
  for (const auto& x : r.rows)
    if (x.observable == name) return x;
  throw std::runtime_error("missing row " + name);
}

void annealed_identity() {
  Timer timer;
  bool ok = true;
  std::string detail;
  for (double beta : {0.5, -1.0}) {
    ExperimentConfig cfg;
    cfg.beta = beta;
    cfg.nu = 1.0;
    cfg.t = 4.0;
    cfg.environments = 100000;
    cfg.seed = 2024;
    const EstimateWithError e = annealed_check(cfg);
    const double target = cfg.nu * an::lambda_beta(beta);
    const bool pass = std::abs(e.value - target) <= 3.0 * e.std_error;
    ok = ok && pass;
    detail += fmt("beta=%g est=%.6f target=%.6f se=%.2e; ", beta, e.value, target, e.std_error);
  }
  report(ok && timer.seconds() < 60.0, "1 annealed identity", detail, timer);
}

void bessel_table() {
  Timer timer;
  const double printed[] = {1.265, 1.792, 2.190};
  bool ok = true;
  std::string detail;
  for (int d = 3; d <= 5; ++d) {
    const an::BesselBound b = an::bessel_bound(d);
    // d = 3 is printed both as 1.265 and 1.266; the ratio is 1.26606
    const double ref = d == 3 ? 1.266 : printed[d - 3];
    ok = ok && std::abs(b.ratio - ref) <= 2e-3;
    detail += fmt("d=%d ratio=%.5f squared=%.5f; ", d, b.ratio, b.ratio_squared);
  }
  report(ok, "2a Bessel ratios d=3,4,5", detail, timer);

  const an::BesselBound big = an::bessel_bound(200);
  const double per_root_d = big.ratio / std::sqrt(200.0);
  const double stated = std::sqrt(std::numbers::e / (8.0 * std::numbers::pi));
  const double limit = std::sqrt(std::numbers::pi * std::numbers::e / 8.0);
  report(std::abs(per_root_d - stated) <= 0.05 * stated && timer.seconds() < 1.0,
         "2b large-d ratio/sqrt(d) vs sqrt(e/(8 pi))",
         fmt("d=200 ratio=%.4f ratio/sqrt(d)=%.4f stated=%.4f; sqrt(pi e/8)=%.4f (rel. diff %.3f)", big.ratio,
             per_root_d, stated, limit, per_root_d / limit - 1.0),
         timer);
}

void closed_forms() {
  Timer timer;
  bool ok = an::alpha_beta(0.0) == 2.0;
  int monotone_breaks = 0;
  double prev = INFINITY;
  for (int i = 0; i <= 10000; ++i) {
    const double a = an::alpha_beta(-10.0 + 20.0 * i / 10000.0);
    if (!(a < prev)) ++monotone_breaks;
    prev = a;
  }

  constexpr double tol = 1e-12;
  int violations = 0;
  for (int i = 0; i < 10000; ++i)
    if (an::h_alpha(2.0, 100.0 * i / 9999.0) > tol) ++violations;
  for (int i = 0; i < 10000; ++i)
    if (an::h_alpha(2.0, -(1.0 - 1e-9) * i / 9999.0) < -tol) ++violations;
  for (int i = 0; i < 10000; ++i) {
    const double beta = 0.01 + 5.0 * (i % 100) / 99.0;
    const double a = 0.5 + (an::alpha_beta(beta) - 0.5) * ((i / 100) % 10) / 9.0;
    if (an::h_alpha(a, an::lambda_beta(beta) * (i / 1000) / 9.0) < -tol) ++violations;
  }
  for (int i = 0; i < 10000; ++i) {
    const double beta = -0.01 - 5.0 * (i % 100) / 99.0;
    const double a = an::alpha_beta(beta) * (1.0 + 3.0 * ((i / 100) % 10) / 9.0);
    if (an::h_alpha(a, an::lambda_beta(beta) * (i / 1000) / 9.0) > tol) ++violations;
  }

  double worst = 0.0;
  for (int j = 0; j <= 100; ++j) {
    const double beta = -5.0 + 10.0 * j / 100.0;
    for (int i = 0; i <= 1000; ++i) {
      const double u = i / 1000.0;
      worst = std::max(worst, std::abs(an::psi(beta, u) - an::psi_ratio_form(beta, u)));
      worst = std::max(worst, std::abs(an::phi(beta, u) - an::phi_ratio_form(beta, u)));
    }
  }
  ok = ok && monotone_breaks == 0 && violations == 0 && worst <= 1e-12 && timer.seconds() < 5.0;
  report(ok, "3 closed forms",
         fmt("alpha(0)=%g monotone breaks=%d h_alpha violations=%d max psi/phi form gap=%.2e", an::alpha_beta(0.0),
             monotone_breaks, violations, worst),
         timer);
}

void two_to_one() {
  Timer timer;
  Stream s(20240607);
  double worst = INFINITY;
  std::string worst_name;
  ReplicateNeeds needs;
  needs.field = true;
  needs.check_invariants = false;
  for (int i = 0; i < 100; ++i) {
    ExperimentConfig cfg;
    cfg.beta = -2.0 + 4.0 * s.uniform();
    cfg.nu = 0.5 + 3.5 * s.uniform();
    cfg.t = 2.0;
    cfg.paths = 300;
    cfg.environments = 1;
    cfg.seed = 1000 + i;
    const TwoToOneReport r = run_replicate(cfg, 0, needs).report;
    const double m = r.min_slack();
    if (m < worst) {
      worst = m;
      worst_name = r.violation(-INFINITY).value_or("?");
    }
    if (!r.slack_left) worst = -INFINITY;  // the d = 1 left inequality must be evaluated
  }
  report(worst >= -1e-9 && timer.seconds() < 120.0, "4 two-to-one inequalities",
         fmt("100 ensembles, min slack=%.3e", worst), timer);
}

void derivatives_and_sandwich() {
  Timer timer;
  ExperimentConfig cfg;
  cfg.beta = 0.5;
  cfg.nu = 1.0;
  cfg.t = 2.0;
  cfg.paths = 2000;
  cfg.environments = 200;
  cfg.seed = 5;
  const ExperimentResult r = run_experiment(cfg, Mode::derivatives);
  const EstimateWithError direct = row(r, "dp_dbeta_direct").estimate;
  const EstimateWithError palm = row(r, "dp_dbeta_palm").estimate;
  const EstimateWithError fd = row(r, "dp_dbeta_fd").estimate;
  const double allowance = 0.05 * cfg.nu * std::exp(cfg.beta);
  const double gap_palm = std::abs(direct.value - palm.value);
  const double gap_fd = std::abs(direct.value - fd.value);
  const double bound_palm = 3.0 * combined_error(direct, palm) + allowance;
  const double bound_fd = 3.0 * combined_error(direct, fd);
  const bool t_ok = timer.seconds() < 300.0;
  report(gap_palm <= bound_palm && t_ok, "5a dp/dbeta direct vs palm",
         fmt("direct=%.5f+-%.5f palm=%.5f+-%.5f gap=%.5f bound=%.5f", direct.value, direct.std_error, palm.value,
             palm.std_error, gap_palm, bound_palm),
         timer);
  report(gap_fd <= bound_fd && t_ok, "5b dp/dbeta direct vs finite difference",
         fmt("fd=%.5f+-%.5f gap=%.5f bound=%.5f", fd.value, fd.std_error, gap_fd, bound_fd), timer);

  Timer t6;
  const EstimateWithError p = row(r, "p_quenched").estimate;
  const EstimateWithError annealed = annealed_check(cfg);
  const double lower = cfg.nu * cfg.beta;
  const bool low_ok = lower - 3.0 * p.std_error <= p.value;
  const bool high_ok = p.value <= annealed.value + 3.0 * combined_error(p, annealed);
  report(low_ok && high_ok, "6 free-energy sandwich",
         fmt("nu*beta=%.5f p=%.5f+-%.5f annealed=%.5f+-%.5f (exact %.5f)", lower, p.value, p.std_error,
             annealed.value, annealed.std_error, cfg.nu * an::lambda_beta(cfg.beta)),
         t6);
}

void monotonicity() {
  Timer timer;
  ExperimentConfig cfg;
  cfg.beta = 1.0;
  cfg.nu = 2.0;
  cfg.nu_prime = 1.0;
  cfg.t = 2.0;
  cfg.seed = 7;
  const MonotonicityResult m = nu_monotonicity(cfg, 1.0);
  const bool ok = m.lower_slack.value >= -3.0 * m.lower_slack.std_error &&
                  m.upper_slack.value >= -3.0 * m.upper_slack.std_error && timer.seconds() < 180.0;
  report(ok, "7 nu-monotonicity coupling",
         fmt("p(2)-p(1)=%.5f+-%.5f lower slack=%.5f+-%.5f upper slack=%.5f+-%.5f", m.difference.value,
             m.difference.std_error, m.lower_slack.value, m.lower_slack.std_error, m.upper_slack.value,
             m.upper_slack.std_error),
         timer);
}

void localization_trend() {
  Timer timer;
  const auto cell = [](double beta, double nu) {
    ExperimentConfig cfg;
    cfg.beta = beta;
    cfg.nu = nu;
    cfg.t = 4.0;
    cfg.seed = 11;
    return localization_cell(cfg);
  };
  const auto nondecreasing = [](const std::vector<LocalizationCell>& cells, std::string& detail) {
    bool ok = true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      detail += fmt("R=%.4f+-%.4f; ", cells[i].overlap.value, cells[i].overlap.std_error);
      if (i == 0) continue;
      const auto& a = cells[i - 1].overlap;
      const auto& b = cells[i].overlap;
      if (b.value < a.value - 2.0 * combined_error(a, b)) ok = false;
    }
    return ok;
  };

  std::vector<LocalizationCell> by_beta;
  for (double beta : {0.0, 0.5, 1.0, 2.0}) by_beta.push_back(cell(beta, 1.0));
  std::string d1 = "beta 0,0.5,1,2 at nu=1: ";
  const bool ok1 = nondecreasing(by_beta, d1);

  std::vector<LocalizationCell> by_nu{by_beta[1]};
  for (double nu : {10.0, 100.0}) by_nu.push_back(cell(0.5, nu));
  std::string d2 = "nu 1,10,100 at beta=0.5: ";
  const bool ok2 = nondecreasing(by_nu, d2);
  const bool ok3 = by_nu.back().overlap.value >= 0.5;
  d2 += fmt("ess_min(nu=100)=%.2f", by_nu.back().ess_min);
  const bool t_ok = timer.seconds() < 600.0;
  report(ok1 && t_ok, "8a overlap trend in beta", d1, timer);
  report(ok2 && ok3 && t_ok, "8b overlap trend in nu, R(nu=100) >= 0.5", d2, timer);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "polymer");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

void determinism() {
  Timer timer;
  const fs::path dir = fs::temp_directory_path() / "polymer_acceptance_replay";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "d = 1\nbeta = 0.7\nnu = 2\nt = 1\npaths_per_env = 200\nn_envs = 20\nseed = 99\nmode = full\n";
  }
  const int a = invoke({"simulate", (dir / "run.cfg").string(), "--out", (dir / "a").string()});
  const int b = invoke({"simulate", (dir / "run.cfg").string(), "--out", (dir / "b").string(), "--threads", "3"});
  const int c = invoke({"simulate", (dir / "a" / "manifest.json").string(), "--out", (dir / "c").string()});
  const std::string first = slurp(dir / "a" / "results.csv");
  const bool ok = a == 0 && b == 0 && c == 0 && !first.empty() && first == slurp(dir / "b" / "results.csv") &&
                  first == slurp(dir / "c" / "results.csv");
  report(ok, "9 determinism", fmt("rerun, 3-thread rerun and manifest replay; %zu CSV bytes", first.size()), timer);
}

}  // namespace

int main() {
  try {
    annealed_identity();
    bessel_table();
    closed_forms();
    two_to_one();
    derivatives_and_sandwich();
    monotonicity();
    localization_trend();
    determinism();
  } catch (const std::exception& e) {
    std::printf("[FAIL] harness: %s\n", e.what());
    return 1;
  }
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
