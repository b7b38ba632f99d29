// regret-dissect: asymptotic theory and Monte Carlo tail experiments for
// estimate-then-optimize vs integrated estimation-optimization pipelines.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regret/asymptotics.hpp"
#include "regret/errors.hpp"
#include "regret/io.hpp"
#include "regret/montecarlo.hpp"

namespace fs = std::filesystem;
using namespace regret;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CliArgs {
  std::string config_path;
  std::string out_dir = "out";
  int threads = 0;  // 0: use the config value
  bool raw = false;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string g(double v) { return format_g17(v); }

std::string short_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string spectrum_str(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += short_num(v[i]);
  }
  return out + "]";
}

RunManifest make_manifest(const std::string& command, const CliArgs& args,
                          const RunConfig& cfg) {
  RunManifest m;
  m.tool_version = kVersion;
  m.command = command;
  m.config_path = args.config_path;
  m.config_hash_hex = hash_hex(cfg.content_hash);
  m.out_dir = args.out_dir;
  m.status = "running";
  m.config_echo = cfg.raw_text;
  return m;
}

void write_manifest(const RunManifest& m) {
  write_text_file((fs::path(m.out_dir) /
                   ("manifest_" + m.command + ".json")).string(),
                  manifest_to_json(m));
}

void print_summary_table(const AsymptoticSummary& s) {
  std::cout << "asymptotic summary (q = " << s.q << ")\n"
            << "  instance: family=" << s.family_kind
            << " truth=" << s.true_kind << " cost=" << s.cost_kind << "\n"
            << "  theta_kl    = " << spectrum_str(std::vector<double>(
                   s.theta_kl.data(), s.theta_kl.data() + s.theta_kl.size()))
            << "\n"
            << "  theta_star  = " << spectrum_str(std::vector<double>(
                   s.theta_star.data(),
                   s.theta_star.data() + s.theta_star.size()))
            << "\n"
            << "  kappa0_eto  = " << short_num(s.kappa0_eto) << "\n"
            << "  kappa0_ieo  = " << short_num(s.kappa0_ieo) << "\n"
            << "  delta       = " << short_num(s.delta) << "\n"
            << "  B0          = " << short_num(s.b0)
            << "  (gaps: h_log=" << short_num(s.b0_gaps[0])
            << ", v_score=" << short_num(s.b0_gaps[1])
            << ", hess_v0=" << short_num(s.b0_gaps[2])
            << ", var_grad_c=" << short_num(s.b0_gaps[3])
            << ", hess_kl_vs_star=" << short_num(s.b0_gaps[4]) << ")\n"
            << "  lambda_eto  = " << spectrum_str(s.lambda_eto)
            << (s.eto_signed ? "  [signed mixture]" : "") << "\n"
            << "  lambda_ieo  = " << spectrum_str(s.lambda_ieo) << "\n"
            << "  tau1        = " << short_num(s.tau1) << "\n"
            << "  tau2        = " << short_num(s.tau2) << "\n"
            << "  tau3        = " << short_num(s.tau3)
            << "  (kl-curvature variant: " << short_num(s.tau3_kl_variant)
            << ")\n"
            << "  tau6        = " << short_num(s.tau6) << "\n"
            << "  first-order sd s = " << short_num(s.grad_v0_kl_norm)
            << "\n";
}

int cmd_theory(const CliArgs& args) {
  const RunConfig cfg = load_config(args.config_path);
  fs::create_directories(args.out_dir);
  RunManifest man = make_manifest("theory", args, cfg);
  man.phases.push_back({"summary", 0.0, "running"});
  write_manifest(man);

  const auto t0 = std::chrono::steady_clock::now();
  const AsymptoticSummary s = compute_summary(cfg.experiment.instance);
  man.phases[0].seconds = seconds_since(t0);
  man.phases[0].status = "complete";

  const std::string summary_path =
      (fs::path(args.out_dir) / "summary.json").string();
  write_text_file(summary_path, summary_to_json(s));
  man.outputs.push_back(summary_path);
  man.status = "complete";
  write_manifest(man);

  print_summary_table(s);
  std::cout << "wrote " << summary_path << "\n";
  return 0;
}

int cmd_simulate(const CliArgs& args) {
  RunConfig cfg = load_config(args.config_path);
  if (args.threads > 0) cfg.experiment.threads = args.threads;
  if (args.raw) cfg.experiment.keep_raw = true;
  cfg.experiment.validate();
  fs::create_directories(args.out_dir);

  RunManifest man = make_manifest("simulate", args, cfg);
  man.phases.push_back({"summary", 0.0, "running"});
  man.phases.push_back({"simulate", 0.0, "pending"});
  write_manifest(man);  // before any long phase

  auto t0 = std::chrono::steady_clock::now();
  const AsymptoticSummary s = compute_summary(cfg.experiment.instance);
  man.phases[0].seconds = seconds_since(t0);
  man.phases[0].status = "complete";
  const std::string summary_path =
      (fs::path(args.out_dir) / "summary.json").string();
  write_text_file(summary_path, summary_to_json(s));
  man.outputs.push_back(summary_path);
  man.phases[1].status = "running";
  write_manifest(man);

  t0 = std::chrono::steady_clock::now();
  const std::vector<CurvePair> pairs = run_experiment(cfg.experiment, &s);
  man.phases[1].seconds = seconds_since(t0);
  man.phases[1].status = "complete";

  for (const CurvePair& pair : pairs) {
    const DiffCurve diff = diff_curve(pair.eto, pair.ieo);
    const std::string csv = curves_to_csv(pair.eto, pair.ieo);
    const std::string n_str = std::to_string(pair.eto.n);
    const std::string tail_path =
        (fs::path(args.out_dir) / ("tail_" + n_str + ".csv")).string();
    const std::string diff_path =
        (fs::path(args.out_dir) / ("diff_" + n_str + ".csv")).string();
    // Both files carry the full 7-column table (the difference columns are
    // cheap to duplicate and keep each file self-describing).
    write_text_file(tail_path, csv);
    write_text_file(diff_path, csv);
    const std::string json_path =
        (fs::path(args.out_dir) / ("curves_" + n_str + ".json")).string();
    write_text_file(json_path,
                    pair_to_json(pair, diff, cfg.experiment.keep_raw));
    man.outputs.push_back(tail_path);
    man.outputs.push_back(diff_path);
    man.outputs.push_back(json_path);
    man.notes.push_back("n=" + n_str + ": " +
                        std::to_string(pair.eto.failures) + " of " +
                        std::to_string(pair.eto.replications_total) +
                        " replications excluded");

    double max_abs_d = 0.0;
    for (double dv : diff.d) max_abs_d = std::max(max_abs_d, std::fabs(dv));
    std::cout << "n=" << n_str << ": used "
              << pair.eto.replications_used << "/"
              << pair.eto.replications_total << " replications, max |D(t)| = "
              << short_num(max_abs_d) << "\n  t-grid "
              << pair.eto.t_grid_rule << "\n";
  }

  if (pairs.size() >= 3) {
    const ScalingReport rep = scaling_check(pairs, s);
    const std::string scaling_path =
        (fs::path(args.out_dir) / "scaling.json").string();
    write_text_file(scaling_path, scaling_to_json(rep));
    man.outputs.push_back(scaling_path);
    std::cout << "scaling: slope_ieo = " << short_num(rep.slope_ieo)
              << " (expect -1), slope_eto = " << short_num(rep.slope_eto)
              << ", KS(ieo) per n = " << spectrum_str(rep.ks_ieo) << "\n";
    if (rep.eto_check_skipped) {
      std::cout << "scaling: ETO normal check skipped: "
                << rep.eto_skip_reason << "\n";
    }
  }

  man.status = "complete";
  write_manifest(man);
  std::cout << "wrote outputs to " << args.out_dir << "\n";
  return 0;
}

int cmd_bounds(const CliArgs& args) {
  const RunConfig cfg = load_config(args.config_path);
  fs::create_directories(args.out_dir);
  RunManifest man = make_manifest("bounds", args, cfg);
  man.phases.push_back({"summary", 0.0, "running"});
  man.phases.push_back({"evaluate", 0.0, "pending"});
  write_manifest(man);

  const std::string summary_path =
      (fs::path(args.out_dir) / "summary.json").string();
  AsymptoticSummary s;
  const auto t0 = std::chrono::steady_clock::now();
  if (fs::exists(summary_path)) {
    s = summary_from_json(read_text_file(summary_path));
    std::cout << "loaded " << summary_path << "\n";
  } else {
    s = compute_summary(cfg.experiment.instance);
    write_text_file(summary_path, summary_to_json(s));
    man.outputs.push_back(summary_path);
    std::cout << "computed and wrote " << summary_path << "\n";
  }
  man.phases[0].seconds = seconds_since(t0);
  man.phases[0].status = "complete";
  man.phases[1].status = "running";

  const BoundsSpec& bs = cfg.bounds;
  const double n = bs.n;
  std::vector<double> ts = bs.t_list;
  if (ts.empty()) {
    // Default probe set: just above the IEO floor at the 1/n scale, plus the
    // midpoint of the kappa gap when the instance is misspecified.
    for (double tt : {1.0, 2.0, 4.0}) ts.push_back(s.kappa0_ieo + tt / n);
    if (s.delta > bs.delta_threshold) {
      ts.push_back(0.5 * (s.kappa0_ieo + s.kappa0_eto));
    }
    std::sort(ts.begin(), ts.end());
    std::cout << "no bounds.t in config: using default probe thresholds\n";
  }

  std::cout << "tail-difference bounds at n = " << short_num(n)
            << " (budgets: g_eto=" << short_num(bs.lower_budget.g_eto)
            << ", g_ieo=" << short_num(bs.lower_budget.g_ieo)
            << ", upper=" << short_num(bs.upper_budget) << ")\n";
  std::printf("  %-22s %-14s %-22s %-14s %-22s %s\n", "t", "lower", "case",
              "upper", "case", "epsilon");
  for (double t : ts) {
    const BoundValue lo =
        lower_bound_tail_diff(s, s.grad_v0_kl_norm, n, t, bs.lower_budget);
    std::string up_val = "-", up_tag, eps_str = "-";
    try {
      const BoundValue up =
          upper_bound_tail_diff(s, n, t, bs.epsilon, bs.upper_budget);
      up_val = short_num(up.value);
      up_tag = up.case_tag;
      if (up.case_tag == "case2-misspecified") {
        eps_str = short_num(up.epsilon_used);
      }
    } catch (const RegionError&) {
      up_tag = "uncovered-region";
    } catch (const PreconditionError& e) {
      up_tag = "precondition-failed";
      man.notes.push_back(std::string("upper bound precondition: ") +
                          e.what());
    }
    std::printf("  %-22s %-14s %-22s %-14s %-22s %s\n", short_num(t).c_str(),
                short_num(lo.value).c_str(), lo.case_tag.c_str(),
                up_val.c_str(), up_tag.c_str(), eps_str.c_str());
    if (up_tag == "uncovered-region") {
      std::cout << "  note: t = " << short_num(t)
                << " lies in the uncovered region (kappa_ieo, kappa_ieo + "
                   "((tau6+tau1)/tau1) delta]; no upper bound applies there\n";
    }
  }

  if (bs.have_genbound) {
    const double gb = generalization_bound(bs.genbound);
    std::cout << "generalization bound: " << g(gb)
              << "  (q=" << bs.genbound.q << ", n=" << short_num(bs.genbound.n)
              << ", confidence=" << short_num(bs.genbound.confidence) << ")\n";
  }

  // Table-style regime classification; every cutoff is a user input and is
  // echoed because the regime labels have no canonical thresholds.
  const auto tail_ref = MixtureTail::get(limit_ieo(s));
  const double q99 = tail_ref->quantile(0.99);
  const double gg_cut = bs.gg_factor * q99 / n;
  std::string regime;
  if (s.delta > std::max(gg_cut, bs.delta_threshold)) {
    regime = "delta >> 0: misspecification separates the tails at order 1";
  } else if (s.delta > bs.delta_threshold) {
    regime = "delta ~ 0 (order 1/n), B0 > 0: tails compare at the 1/n scale";
  } else if (s.b0 > bs.b0_threshold) {
    regime = "delta = 0, B0 > 0: same floor, misspecified geometry";
  } else {
    regime = "delta = 0, B0 = 0: well-specified";
  }
  std::cout << "regime classification: " << regime << "\n"
            << "  thresholds: delta ~ 0 below " << short_num(bs.delta_threshold)
            << "; delta >> 0 above gg_factor*q99(G_ieo)/n = "
            << short_num(bs.gg_factor) << "*" << short_num(q99) << "/"
            << short_num(n) << " = " << short_num(gg_cut)
            << "; B0 ~ 0 below " << short_num(bs.b0_threshold) << "\n";

  man.phases[1].status = "complete";
  man.status = "complete";
  write_manifest(man);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regret-dissect: regret asymptotics and tail experiments for "
               "estimate-then-optimize vs integrated estimation-optimization"};
  app.set_version_flag("--version", std::string("regret-dissect ") + kVersion);
  app.require_subcommand(1);

  CliArgs args;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "JSON config path")
        ->required();
    sub->add_option("--out", args.out_dir, "output directory (default: out)");
    sub->add_option("--threads", args.threads,
                    "worker threads (overrides the config)");
    sub->add_flag("--raw", args.raw,
                  "include raw regrets in JSON curve outputs");
  };
  CLI::App* theory =
      app.add_subcommand("theory", "compute the asymptotic summary");
  CLI::App* simulate =
      app.add_subcommand("simulate", "run the Monte Carlo tail experiment");
  CLI::App* bounds =
      app.add_subcommand("bounds", "evaluate the finite-sample tail bounds");
  add_common(theory);
  add_common(simulate);
  add_common(bounds);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (theory->parsed()) return cmd_theory(args);
    if (simulate->parsed()) return cmd_simulate(args);
    if (bounds->parsed()) return cmd_bounds(args);
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ExperimentError& e) {
    std::cerr << "experiment error: " << e.what() << "\n";
    return 4;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
