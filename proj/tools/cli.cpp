#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "swgain/gallery.hpp"
#include "swgain/l2gain.hpp"
#include "swgain/realization.hpp"
#include "swgain/report.hpp"
#include "swgain/spectral.hpp"
#include "swgain/system.hpp"

namespace swgain {
namespace cli {

namespace {

std::string ReadFile(const std::string& path, const char* what) {
  if (path.empty()) throw std::invalid_argument(std::string("missing --") + what);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteReport(const RunConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + cfg.out_path);
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

SignalClassSpec MakeClass(const RunConfig& cfg) {
  std::string name = cfg.class_name;
  if (name.empty()) name = cfg.tau > 0.0 ? "dwell" : "arb";
  SignalClassSpec cls;
  if (name == "arb") {
    cls = SignalClassSpec::Arbitrary();
  } else if (name == "dwell") {
    cls = SignalClassSpec::Dwell(cfg.tau);
  } else if (name == "avgdwell") {
    cls = SignalClassSpec::AverageDwell(cfg.tau, cfg.n0);
  } else if (name == "pe") {
    cls = SignalClassSpec::PersistentExcitation(cfg.T, cfg.mu, cfg.m0, cfg.m1);
  } else {
    throw std::invalid_argument("unknown class " + name);
  }
  cls.Validate();
  return cls;
}

SystemSpec LoadSystem(const RunConfig& cfg) {
  return parse_system(ReadFile(cfg.system_path, "system"));
}

int RunMinreal(const RunConfig& cfg) {
  const SystemSpec sys = LoadSystem(cfg);
  const MinimalRealization mr = minimal_realization(sys);
  const double window = cfg.horizon > 0.0 ? cfg.horizon : 10.0;
  const UniformObservabilityReport uo =
      check_uniform_observability(mr.sys_min, MakeClass(cfg), window, 32, cfg.seed);
  WriteReport(cfg, reduction_report_json(sys, mr, uo));
  return kExitOk;
}

int RunRho(const RunConfig& cfg) {
  const SystemSpec sys = LoadSystem(cfg);
  RhoSearchOptions search;
  search.threads = cfg.threads;
  RhoUpperOptions upper;
  upper.epsilon = cfg.epsilon;
  if (cfg.horizon > 0.0) upper.horizon_h = cfg.horizon;
  if (cfg.grid_step > 0.0) upper.grid_step = cfg.grid_step;
  upper.mu_override = cfg.mu_hat;
  if (!cfg.taus.empty()) {
    WriteReport(cfg, rho_curve_json(rho_curve(sys.state_matrices(), cfg.taus, search,
                                              &upper)));
    return kExitOk;
  }
  const SignalClassSpec cls = MakeClass(cfg);
  const RhoEstimate lower = rho_lower(sys, cls, search);
  WriteReport(cfg, rho_estimate_json(rho_upper(sys, cls, upper, &lower)));
  return kExitOk;
}

GainSearchBudget MakeBudget(const RunConfig& cfg) {
  GainSearchBudget budget;
  budget.max_switches = cfg.max_switches;
  budget.grid_step = cfg.grid_step;
  budget.threads = cfg.threads;
  if (cfg.tol > 0.0) budget.tol = cfg.tol;
  return budget;
}

int RunGain(const RunConfig& cfg) {
  const SystemSpec sys = LoadSystem(cfg);
  if (!cfg.signal_path.empty()) {
    const Signal sig = parse_signal(ReadFile(cfg.signal_path, "signal"));
    sig.ValidateFor(sys);
    const double T = cfg.T > 0.0 ? cfg.T : sig.total_duration();
    GainEstimate est = gain_for_signal(sys, sig, T, cfg.tol > 0.0 ? cfg.tol : 1e-4);
    if (cfg.power_step > 0.0) {
      PowerIterationOptions p;
      p.seed = cfg.seed;
      est.witness_input_energy_ratio = gain_power_lower(sys, sig, T, cfg.power_step, p).value;
    }
    WriteReport(cfg, gain_report_json(est, cfg.tau));
    return kExitOk;
  }
  const GainSearchBudget budget = MakeBudget(cfg);
  if (!cfg.sweep_T.empty() || !cfg.taus.empty()) {
    const std::vector<double> taus = cfg.taus.empty() ? std::vector<double>{cfg.tau} : cfg.taus;
    const std::vector<double> Ts = cfg.sweep_T.empty() ? std::vector<double>{cfg.T} : cfg.sweep_T;
    std::vector<SweepRow> rows;
    for (double tau : taus) {
      RunConfig c = cfg;
      c.tau = tau;
      if (c.class_name.empty() || c.class_name == "arb") c.class_name = tau > 0.0 ? "dwell" : "arb";
      const SignalClassSpec cls = MakeClass(c);
      for (double T : Ts) rows.push_back({tau, T, gain_search(sys, cls, T, budget).value});
    }
    WriteReport(cfg, sweep_csv(rows));
    return kExitOk;
  }
  if (!(cfg.T > 0.0)) throw std::invalid_argument("gain search needs --T");
  const GainEstimate est = gain_search(sys, MakeClass(cfg), cfg.T, budget);
  WriteReport(cfg, gain_report_json(est, cfg.tau));
  return kExitOk;
}

int RunTauMin(const RunConfig& cfg) {
  const SystemSpec sys = LoadSystem(cfg);
  TauMinOptions opts;
  opts.search.threads = cfg.threads;
  if (cfg.tol > 0.0) opts.tol = cfg.tol;
  WriteReport(cfg, tau_min_json(tau_min(sys, cfg.tau_lo, cfg.tau_hi, opts)));
  return kExitOk;
}

int RunFiniteness(const RunConfig& cfg) {
  const SystemSpec sys = LoadSystem(cfg);
  FinitenessOptions opts;
  opts.search.threads = cfg.threads;
  opts.seed = cfg.seed;
  if (cfg.horizon > 0.0) opts.uo_horizon = cfg.horizon;
  const FinitenessVerdict v = finiteness_test(sys, MakeClass(cfg), opts);
  WriteReport(cfg, finiteness_json(v));
  return v.verdict == Verdict::kUndetermined ? kExitUndetermined : kExitOk;
}

int RunGallery(const RunConfig& cfg) {
  const int chosen = cfg.alpha_star + cfg.verify + cfg.emit_example + cfg.orbit;
  if (chosen != 1) {
    throw std::invalid_argument(
        "gallery needs exactly one of --alpha-star, --verify, --emit-example, --orbit");
  }
  const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-10;
  if (cfg.alpha_star) {
    const double a = alpha_star(tol);
    WriteReport(cfg, alpha_star_json(a, planar_return_ratio(a), tol));
    return kExitOk;
  }
  const double alpha = cfg.alpha ? *cfg.alpha : alpha_star(1e-10);
  if (cfg.verify) {
    WriteReport(cfg, verification_json(verify_lyapunov_decay(alpha, cfg.samples, cfg.seed)));
  } else if (cfg.emit_example) {
    WriteReport(cfg, serialize_system(example_system(alpha)));
  } else {
    WriteReport(cfg, orbit_csv(worst_case_orbit(alpha)));
  }
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config) {
  try {
    const std::string& sub = config.subcommand;
    if (sub == "minreal") return RunMinreal(config);
    if (sub == "rho") return RunRho(config);
    if (sub == "gain") return RunGain(config);
    if (sub == "taumin") return RunTauMin(config);
    if (sub == "finiteness") return RunFiniteness(config);
    if (sub == "gallery") return RunGallery(config);
    throw std::invalid_argument("unknown subcommand '" + sub + "'");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Switched linear system stability and L2-gain analysis"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--system", cfg.system_path, "System JSON file");
    sub->add_option("--out", cfg.out_path, "Report file (default: stdout)");
    sub->add_option("--class", cfg.class_name, "Signal class")
        ->check(CLI::IsMember({"arb", "dwell", "avgdwell", "pe"}));
    sub->add_option("--tau", cfg.tau, "Dwell time");
    sub->add_option("--n0", cfg.n0, "Chatter bound of the average dwell class");
    sub->add_option("--T", cfg.T, "Window (pe) or horizon (gain)");
    sub->add_option("--mu", cfg.mu, "Excitation level of the pe class");
    sub->add_option("--m0", cfg.m0, "Mode for weight 0 of the pe class");
    sub->add_option("--m1", cfg.m1, "Mode for weight 1 of the pe class");
    sub->add_option("--horizon", cfg.horizon, "Closure horizon or observability window");
    sub->add_option("--tol", cfg.tol, "Tolerance");
    sub->add_option("--max-switches", cfg.max_switches, "Switches per searched signal");
    sub->add_option("--grid-step", cfg.grid_step, "Grid step");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  CLI::App* minreal = app.add_subcommand("minreal", "Minimal realization report");
  common(minreal);
  CLI::App* rho = app.add_subcommand("rho", "Spectral radius bounds");
  common(rho);
  rho->add_option("--taus", cfg.taus, "Dwell times of a rho curve")->delimiter(',');
  rho->add_option("--epsilon", cfg.epsilon, "Closure margin");
  rho->add_option("--mu-hat", cfg.mu_hat, "Growth rate candidate override");
  CLI::App* gain = app.add_subcommand("gain", "Finite-horizon L2 gain");
  common(gain);
  gain->add_option("--signal", cfg.signal_path, "Signal JSON file");
  gain->add_option("--taus", cfg.taus, "Dwell times of a sweep")->delimiter(',');
  gain->add_option("--sweep-T", cfg.sweep_T, "Horizons of a sweep")->delimiter(',');
  gain->add_option("--power-step", cfg.power_step, "Power-iteration cross-check step");
  CLI::App* taumin = app.add_subcommand("taumin", "Bracket the critical dwell time");
  common(taumin);
  taumin->add_option("--tau-lo", cfg.tau_lo, "Lower end of the bracket")->required();
  taumin->add_option("--tau-hi", cfg.tau_hi, "Upper end of the bracket")->required();
  CLI::App* finiteness = app.add_subcommand("finiteness", "Finiteness verdict of the gain");
  common(finiteness);
  CLI::App* gallery = app.add_subcommand("gallery", "Worked example utilities");
  common(gallery);
  gallery->add_flag("--alpha-star", cfg.alpha_star, "Marginal value of alpha");
  gallery->add_flag("--verify", cfg.verify, "Lyapunov decay verification");
  gallery->add_flag("--emit-example", cfg.emit_example, "Write the example system");
  gallery->add_flag("--orbit", cfg.orbit, "Write the worst-case orbit");
  gallery->add_option("--alpha", cfg.alpha, "Example parameter");
  gallery->add_option("--samples", cfg.samples, "Verification samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }
  for (CLI::App* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
  return run(cfg);
}

}  // namespace cli
}  // namespace swgain
