#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kslab/lab/acceptance.hpp"
#include "kslab/lab/config.hpp"
#include "kslab/lab/experiment.hpp"

namespace lab = kslab::lab;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::int64_t seed = -1;
  bool quiet = false;
};

void attach_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--config", opts.config_path, "JSON experiment config (overrides the defaults)");
  sub->add_option("--out", opts.out_dir, "output directory (default runs/<name>)");
  sub->add_option("--seed", opts.seed, "override the config seed");
  sub->add_flag("--quiet", opts.quiet, "suppress progress output");
}

int run_experiment(lab::ExperimentKind kind, const CommonOpts& opts) {
  lab::ExperimentConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = lab::load_config_file(opts.config_path);
    const bool evolve_family = kind == lab::ExperimentKind::evolve &&
                               (cfg.kind == lab::ExperimentKind::evolve ||
                                cfg.kind == lab::ExperimentKind::positivity);
    if (cfg.kind != kind && !evolve_family) {
      std::cerr << "config kind '" << lab::kind_name(cfg.kind) << "' does not match the '"
                << lab::kind_name(kind) << "' subcommand\n";
      return 2;
    }
  } else {
    cfg = lab::default_config(kind);
  }
  if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
  const std::string out = opts.out_dir.empty() ? "runs/" + cfg.name : opts.out_dir;
  const lab::ExperimentReport rep = lab::run(cfg, out, opts.quiet);
  if (!opts.quiet) {
    std::cout << (rep.all_passed() ? "OK" : "CHECKS FAILED") << "  report: " << out
              << "/report.json\n";
  }
  return rep.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kslab: pseudo-spectral experiments for the parabolic-elliptic Keller-Segel system"};
  app.require_subcommand(1);

  struct SubSpec {
    const char* name;
    const char* desc;
    lab::ExperimentKind kind;
  };
  const SubSpec subs[] = {
      {"dispersion", "dispersion relation, abscissa, and lattice rates", lab::ExperimentKind::dispersion},
      {"evolve", "nonlinear evolution (perturbation or raw formulation)", lab::ExperimentKind::evolve},
      {"picard", "Picard/Duhamel fixed-point iteration with ETD cross-check", lab::ExperimentKind::picard},
      {"decay", "semigroup decay-rate measurement for A < 1", lab::ExperimentKind::decay},
      {"growth", "nonlinear growth-rate measurement for A > 1", lab::ExperimentKind::growth},
      {"delta-sweep", "escape times across perturbation sizes", lab::ExperimentKind::delta_sweep},
      {"norms-suite", "uloc norm inequalities on random fields", lab::ExperimentKind::norms_suite},
  };

  CommonOpts opts[8];
  int which = -1;
  int idx = 0;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.desc);
    attach_common(sub, opts[idx]);
    sub->callback([&which, idx] { which = idx; });
    ++idx;
  }
  CLI::App* verify = app.add_subcommand("verify", "run the full invariant suite");
  attach_common(verify, opts[7]);
  bool do_verify = false;
  verify->callback([&do_verify] { do_verify = true; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (do_verify) return kslab::lab::run_acceptance(std::cout) ? 0 : 1;
    return run_experiment(subs[which].kind, opts[which]);
  } catch (const lab::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
