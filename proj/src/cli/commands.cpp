#include "polymer/cli/commands.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "polymer/analytics.hpp"
#include "polymer/cli/config.hpp"
#include "polymer/cli/results.hpp"
#include "polymer/environment.hpp"
#include "polymer/error.hpp"
#include "polymer/estimators.hpp"
#include "polymer/format.hpp"

namespace polymer::cli {
namespace {

namespace an = polymer::analytics;

RunConfig prepare(const RunOptions& options) {
  RunConfig rc = load_config(options.config);
  if (options.seed) {
    auto entries = rc.entries;
    entries["seed"] = std::to_string(*options.seed);
    rc = from_entries(std::move(entries));
  }
  rc.experiment.threads = options.threads;
  return rc;
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::config, "cannot write " + path.string());
  body(out);
  if (!out) throw Error(ErrorKind::config, "write failed for " + path.string());
}

int execute(const std::string& command, const RunOptions& options, std::ostream& err, bool allow_grid) {
  try {
    RunConfig rc = prepare(options);
    std::vector<ExperimentConfig> cells = rc.cells();
    if (!allow_grid && cells.size() > 1) {
      err << "simulate: config declares a grid with " << cells.size() << " cells; use sweep\n";
      return kExitUsage;
    }
    for (auto& c : cells) c.threads = options.threads;

    RunManifest manifest;
    manifest.command = command;
    manifest.config = rc;
    manifest.config_hash = git_blob_hash(canonical_text(rc));

    std::filesystem::create_directories(options.out_dir);
    if (options.dump_cloud) {
      const PointCloud cloud = replicate_cloud(cells.front(), 0);
      write_file(*options.dump_cloud, [&](std::ostream& o) { write_cloud_csv(o, cloud); });
    }

    std::vector<ExperimentResult> results;
    const auto start = std::chrono::steady_clock::now();
    for (const auto& cell : cells) {
      const auto t0 = std::chrono::steady_clock::now();
      results.push_back(run_experiment(cell, rc.mode));
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
      manifest.timings.push_back({std::string(to_string(rc.mode)) + " beta=" + format_double(cell.beta) +
                                      " nu=" + format_double(cell.nu) + " t=" + format_double(cell.t),
                                  dt.count()});
      for (const auto& w : results.back().warnings) err << "warning: " << w << '\n';
    }
    const std::chrono::duration<double> total = std::chrono::steady_clock::now() - start;
    manifest.timings.push_back({"total", total.count()});

    write_file(options.out_dir / "results.csv", [&](std::ostream& o) { write_results_csv(o, results); });
    write_file(options.out_dir / "results.json",
               [&](std::ostream& o) { write_results_json(o, results, manifest.config_hash); });
    write_file(options.out_dir / "manifest.json", [&](std::ostream& o) { write_manifest(o, manifest); });
    return kExitOk;
  } catch (const InvariantViolation& ex) {
    err << "invariant violation: " << ex.what() << '\n';
    return kExitInvariant;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  }
}

void add_run_options(CLI::App* sub, RunOptions& options) {
  sub->add_option("config", options.config, "config file or manifest.json")->required();
  sub->add_option("--out", options.out_dir, "output directory");
  sub->add_option("--seed", options.seed, "master seed (overrides the config)");
  sub->add_option("--threads", options.threads, "worker threads, 0 = all cores");
  sub->add_option("--dump-cloud", options.dump_cloud, "write replicate 0's point cloud as CSV");
}

an::Branch parse_branch(const std::string& s) {
  if (s == "plus") return an::Branch::plus;
  if (s == "minus") return an::Branch::minus;
  throw Error(ErrorKind::config, "branch: expected plus or minus");
}

}  // namespace

int cmd_simulate(const RunOptions& options, std::ostream& err) { return execute("simulate", options, err, false); }

int cmd_sweep(const RunOptions& options, std::ostream& err) { return execute("sweep", options, err, true); }

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Brownian directed polymers in a Poissonian medium"};
  app.name("polymer");
  app.require_subcommand(1);

  std::function<int()> action;

  auto* analytic = app.add_subcommand("analytic", "closed forms, printed as CSV");
  analytic->require_subcommand(1);

  std::vector<double> betas, nus, us;
  double alpha = 1.0, beta0 = 0.0, nu0 = 1.0, a_l2 = 1.0;
  std::string branch = "plus";
  std::optional<double> nu_c_upper;
  bool unchecked = false;
  std::vector<int> dims;

  auto* lambda = analytic->add_subcommand("lambda", "lambda(beta) = e^beta - 1");
  lambda->add_option("--beta", betas)->required()->delimiter(',');
  lambda->callback([&] {
    action = [&] {
      out << "beta,lambda\n";
      for (double b : betas) out << format_double(b) << ',' << format_double(an::lambda_beta(b)) << '\n';
      return kExitOk;
    };
  });

  auto* alpha_cmd = analytic->add_subcommand("alpha", "alpha(beta)");
  alpha_cmd->add_option("--beta", betas)->required()->delimiter(',');
  alpha_cmd->callback([&] {
    action = [&] {
      out << "beta,alpha\n";
      for (double b : betas) out << format_double(b) << ',' << format_double(an::alpha_beta(b)) << '\n';
      return kExitOk;
    };
  });

  auto* h_alpha = analytic->add_subcommand("h-alpha", "h_alpha(u)");
  h_alpha->add_option("--alpha", alpha)->required();
  h_alpha->add_option("--u", us)->required()->delimiter(',');
  h_alpha->callback([&] {
    action = [&] {
      out << "alpha,u,h_alpha\n";
      for (double u : us) {
        out << format_double(alpha) << ',' << format_double(u) << ',' << format_double(an::h_alpha(alpha, u)) << '\n';
      }
      return kExitOk;
    };
  });

  auto* psi_phi = analytic->add_subcommand("psi-phi", "psi and phi in both forms");
  psi_phi->add_option("--beta", betas)->required()->delimiter(',');
  psi_phi->add_option("--u", us)->required()->delimiter(',');
  psi_phi->callback([&] {
    action = [&] {
      out << "beta,u,psi,phi,psi_ratio_form,phi_ratio_form\n";
      for (double b : betas) {
        for (double u : us) {
          out << format_double(b) << ',' << format_double(u) << ',' << format_double(an::psi(b, u)) << ','
              << format_double(an::phi(b, u)) << ',' << format_double(an::psi_ratio_form(b, u)) << ','
              << format_double(an::phi_ratio_form(b, u)) << '\n';
        }
      }
      return kExitOk;
    };
  });

  auto* bc = analytic->add_subcommand("bc-bounds", "bounds on the critical curve from a known critical point");
  bc->add_option("--branch", branch)->required();
  bc->add_option("--beta0", beta0)->required();
  bc->add_option("--nu0", nu0)->required();
  bc->add_option("--alpha", alpha)->required();
  bc->add_option("--nu", nus)->required()->delimiter(',');
  bc->add_option("--nu-c-upper", nu_c_upper, "known upper bound on nu_c (case b2)");
  bc->add_flag("--unchecked", unchecked, "evaluate the formulas without hypothesis checks");
  bc->callback([&] {
    action = [&] {
      const an::CriticalPoint crit(beta0, nu0, parse_branch(branch));
      out << "nu,case,lower,upper\n";
      for (double nu : nus) {
        const auto b = unchecked ? an::sandwich_formula(nu, crit, alpha) : an::bc_bounds(nu, crit, alpha, nu_c_upper);
        out << format_double(nu) << ',' << an::to_string(b.which) << ',' << format_double(b.lower) << ','
            << format_double(b.upper) << '\n';
      }
      return kExitOk;
    };
  });

  auto* classify = analytic->add_subcommand("classify", "D / L / unknown relative to a critical point");
  classify->add_option("--branch", branch)->required();
  classify->add_option("--beta0", beta0)->required();
  classify->add_option("--nu0", nu0)->required();
  classify->add_option("--alpha", alpha)->required();
  classify->add_option("--beta", betas)->required()->delimiter(',');
  classify->add_option("--nu", nus)->required()->delimiter(',');
  classify->callback([&] {
    action = [&] {
      const an::CriticalPoint crit(beta0, nu0, parse_branch(branch));
      out << "beta,nu,phase\n";
      for (double b : betas) {
        for (double nu : nus) {
          out << format_double(b) << ',' << format_double(nu) << ','
              << an::to_string(an::classify_phase(b, nu, crit, alpha)) << '\n';
        }
      }
      return kExitOk;
    };
  });

  auto* bessel = analytic->add_subcommand("bessel", "first Bessel zero bound for nu_c");
  bessel->add_option("--d", dims)->required()->delimiter(',');
  bessel->callback([&] {
    action = [&] {
      out << "d,order,gamma,radius,ratio,ratio_squared\n";
      for (int d : dims) {
        const auto b = an::bessel_bound(d);
        out << d << ',' << format_double(b.order) << ',' << format_double(b.gamma) << ',' << format_double(b.radius)
            << ',' << format_double(b.ratio) << ',' << format_double(b.ratio_squared) << '\n';
      }
      return kExitOk;
    };
  });

  auto* l2 = analytic->add_subcommand("l2", "nu lambda(beta)^2 < a");
  l2->add_option("--beta", betas)->required()->delimiter(',');
  l2->add_option("--nu", nus)->required()->delimiter(',');
  l2->add_option("--a", a_l2)->required();
  l2->callback([&] {
    action = [&] {
      out << "beta,nu,nu_lambda_squared,in_region\n";
      for (double b : betas) {
        for (double nu : nus) {
          const double l = an::lambda_beta(b);
          out << format_double(b) << ',' << format_double(nu) << ',' << format_double(nu * l * l) << ','
              << (an::l2_region(b, nu, a_l2) ? "true" : "false") << '\n';
        }
      }
      return kExitOk;
    };
  });

  RunOptions sim_options;
  auto* simulate = app.add_subcommand("simulate", "run one experiment from a config file");
  add_run_options(simulate, sim_options);
  simulate->callback([&] { action = [&] { return cmd_simulate(sim_options, err); }; });

  RunOptions sweep_options;
  auto* sweep = app.add_subcommand("sweep", "run every cell of the config's grid");
  add_run_options(sweep, sweep_options);
  sweep->callback([&] { action = [&] { return cmd_sweep(sweep_options, err); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return action ? action() : kExitUsage;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace polymer::cli
