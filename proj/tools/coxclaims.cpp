#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coxclaims/config.hpp"
#include "coxclaims/errors.hpp"
#include "coxclaims/kernels.hpp"
#include "coxclaims/pascal.hpp"
#include "coxclaims/simulator.hpp"
#include "coxclaims/validation.hpp"

using namespace coxclaims;

namespace {

enum Exit { ok = 0, config_error = 2, precondition = 3, accuracy = 4 };

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;

  int horizon = 0;
  long replications = 1;

  std::string which = "reported";
  long n_max = 0;
  double eps = 1e-6;
  long mc = 0;
  bool verify = false;
  int period = 1;

  int max_lag = 10;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ValidationError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string prob(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  std::string s = buf;
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::uint64_t need_seed(const Options& o, const RunConfig& cfg, const char* what) {
  if (o.seed) return *o.seed;
  if (cfg.seed) return *cfg.seed;
  throw ValidationError(std::string("config key 'seed': required for ") + what +
                        " (or pass --seed)");
}

int valuation_index(const RunConfig& cfg) { return *cfg.model.grid_index(cfg.valuation); }

void note_extrapolation(const ModelSpec& spec, int horizon) {
  if (horizon > spec.periods())
    std::cerr << "note: periods " << spec.periods() + 1 << ".." << horizon
              << " extend past the grid using the last period length and exposure\n";
}

int cmd_simulate(const Options& o) {
  const RunConfig cfg = load_config(o.config);
  const std::uint64_t seed = need_seed(o, cfg, "simulate");
  const int horizon = o.horizon > 0 ? o.horizon : valuation_index(cfg);
  if (o.replications < 1) throw ValidationError("--replications must be at least 1");
  note_extrapolation(cfg.model, horizon);

  std::vector<ClaimSet> sets(o.replications);
#pragma omp parallel for schedule(dynamic, 16)
  for (long r = 0; r < o.replications; ++r) {
    Stream rng(seed, static_cast<std::uint64_t>(r));
    sets[r] = simulate(cfg.model, cfg.delay, horizon, rng);
  }
  Output out(o.out);
  if (o.replications == 1)
    write_claims_csv(out.stream(), sets.front());
  else
    write_claims_csv(out.stream(), std::span<const ClaimSet>(sets));
  return ok;
}

// Empirical law of the selected count, reusing the replication kernel.
McCountLaw mc_law(const RunConfig& cfg, const std::string& which, int period, long reps,
                  std::uint64_t seed) {
  if (which != "period-marginal") {
    const Which w = which == "reported" ? Which::reported : Which::ibnr;
    return mc_count_pmf(cfg.model, cfg.delay, cfg.valuation, w, reps, seed);
  }
  const auto table = kernels::replicate_counts(cfg.model, cfg.delay, period, reps, seed);
  McCountLaw law;
  law.replications = reps;
  for (long r = 0; r < reps; ++r) {
    const long n = table.all[static_cast<std::size_t>(r) * period + period - 1];
    if (static_cast<long>(law.pmf.size()) <= n) law.pmf.resize(n + 1, 0.0);
    law.pmf[n] += 1.0;
  }
  for (double& p : law.pmf) p /= static_cast<double>(reps);
  law.std_error.resize(law.pmf.size());
  for (std::size_t n = 0; n < law.pmf.size(); ++n)
    law.std_error[n] = std::sqrt(law.pmf[n] * (1.0 - law.pmf[n]) / reps);
  return law;
}

int cmd_dist(const Options& o) {
  const RunConfig cfg = load_config(o.config);
  if (o.which != "reported" && o.which != "ibnr" && o.which != "period-marginal")
    throw ValidationError("--which must be reported, ibnr or period-marginal");
  if (!(o.eps > 0.0 && o.eps < 0.1)) throw ValidationError("--eps must lie in (0, 0.1)");
  if (o.period < 1) throw ValidationError("--period must be at least 1");

  std::optional<CountLaw> law;
  try {
    if (o.which == "period-marginal") {
      law = marginal_law(cfg.model, o.period, o.eps, o.n_max);
    } else {
      const Which w = o.which == "reported" ? Which::reported : Which::ibnr;
      law = total_count_law(cfg.model, cfg.delay, cfg.valuation, w, o.eps, o.n_max);
    }
  } catch (const AccuracyError& e) {
    if (o.mc <= 0) {
      std::cerr << "error: " << e.what() << "\nrerun with --mc <replications> for a Monte Carlo estimate\n";
      return accuracy;
    }
  }

  Output out(o.out);
  std::ostream& os = out.stream();
  if (!law) {
    const std::uint64_t seed = need_seed(o, cfg, "--mc");
    const McCountLaw mc = mc_law(cfg, o.which, o.period, o.mc, seed);
    os << "# method=monte-carlo replications=" << o.mc << '\n';
    os << "n,probability\n";
    for (std::size_t n = 0; n < mc.pmf.size(); ++n) os << n << ',' << prob(mc.pmf[n]) << '\n';
    return ok;
  }

  os << "# tail_bound=" << prob(law->tail_bound) << '\n';
  os << "n,probability\n";
  for (std::size_t n = 0; n < law->pmf.size(); ++n) os << n << ',' << prob(law->pmf[n]) << '\n';

  if (o.verify) {
    const std::uint64_t seed = need_seed(o, cfg, "--verify");
    const long reps = o.mc > 0 ? o.mc : 100000;
    const McCountLaw mc = mc_law(cfg, o.which, o.period, reps, seed);
    const PmfComparison cmp = compare_pmf(mc, *law);
    os << "# verify replications=" << reps << " max_z=" << cmp.max_z
       << " total_variation=" << cmp.total_variation << " result=" << (cmp.pass ? "pass" : "fail")
       << '\n';
    if (!cmp.pass) return accuracy;
  }
  return ok;
}

int cmd_acf(const Options& o) {
  const RunConfig cfg = load_config(o.config);
  if (o.max_lag < 1) throw ValidationError("--max-lag must be at least 1");
  const AcfSeries s = acf_series(cfg.model, o.max_lag);
  Output out(o.out);
  std::ostream& os = out.stream();
  os << "# path=" << (s.path == AcfPath::spectral ? "spectral" : "direct") << '\n';
  os << "k,rho\n";
  char buf[64];
  for (int k = 1; k <= o.max_lag; ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", s.rho[k - 1]);
    os << k << ',' << buf << '\n';
  }
  return ok;
}

// Self-check of the configured model against the independent oracles.
int cmd_verify(const Options& o) {
  const RunConfig cfg = load_config(o.config);
  const std::uint64_t seed = need_seed(o, cfg, "verify");
  const ModelSpec& spec = cfg.model;
  const int k = valuation_index(cfg);
  Output out(o.out);
  std::ostream& os = out.stream();
  os << "check,value,limit,result\n";
  bool all = true;
  const auto row = [&](const std::string& name, double value, double limit) {
    const bool pass = value <= limit;
    all = all && pass;
    os << name << ',' << value << ',' << limit << ',' << (pass ? "pass" : "fail") << '\n';
  };

  {
    const int depth = std::min(k, 4);
    const std::vector<double> scales = period_scales(spec, depth);
    double worst = 0.0;
    std::vector<long> counts(depth, 0);
    for (long c = 0; c < std::lround(std::pow(4, depth)); ++c) {
      long x = c;
      for (int j = 0; j < depth; ++j, x /= 4) counts[j] = x % 4;
      worst = std::max(worst, std::abs(joint_pmf(spec, counts, scales) -
                                       brute_force_joint(spec, counts, scales)));
    }
    row("forward_vs_paths", worst, 1e-12);
  }

  {
    const ThinnedScales ts = thinned_scales(spec, cfg.delay, cfg.valuation);
    double worst = 0.0;
    for (int j = 1; j <= k; ++j)
      worst = std::max(worst, std::abs(ts.reported[j - 1] + ts.ibnr[j - 1] - spec.period_scale(j)));
    row("scale_conservation", worst, 1e-10);
  }

  try {
    const AcfSeries s = acf_series(spec, 20);
    double worst = 0.0;
    for (int lag = 1; lag <= 20; ++lag)
      worst = std::max(worst, std::abs(s.rho[lag - 1] - acf_direct(spec, lag)));
    row("acf_paths", worst, 1e-10);
  } catch (const PreconditionError& e) {
    os << "acf_paths,,," << "skipped\n";
    std::cerr << "note: " << e.what() << '\n';
  }

  for (Which w : {Which::reported, Which::ibnr}) {
    const char* name = w == Which::reported ? "reported_vs_mc_max_z" : "ibnr_vs_mc_max_z";
    const CountLaw law = total_count_law(spec, cfg.delay, cfg.valuation, w, 1e-8);
    const long reps = o.mc > 0 ? o.mc : 100000;
    const McCountLaw mc = mc_count_pmf(spec, cfg.delay, cfg.valuation, w, reps, seed);
    row(name, compare_pmf(mc, law).max_z, 4.0);
  }
  return all ? ok : accuracy;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Marked Cox claim-arrival model with a hidden Markov Erlang intensity"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  std::uint64_t seed = 0;
  app.add_option("--config", o.config, "JSON model file")->required()->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides the config)");
  app.add_option("--out", o.out, "Output file (default: stdout)");

  auto* sim = app.add_subcommand("simulate", "Simulate claim sets as CSV");
  sim->add_option("--horizon", o.horizon, "Number of periods (default: up to the valuation)");
  sim->add_option("--replications", o.replications, "Independent claim sets");

  auto* dist = app.add_subcommand("dist", "Predictive count distribution as CSV");
  dist->add_option("--which", o.which, "reported | ibnr | period-marginal");
  dist->add_option("--n-max", o.n_max, "Largest count listed (default: from the tail bound)");
  dist->add_option("--eps", o.eps, "Truncation tolerance");
  dist->add_option("--mc", o.mc, "Monte Carlo replications when the series cannot meet --eps");
  dist->add_flag("--verify", o.verify, "Cross-check against Monte Carlo");
  dist->add_option("--period", o.period, "Period for period-marginal");

  auto* acf = app.add_subcommand("acf", "Stationary autocorrelation of period counts");
  acf->add_option("--max-lag", o.max_lag, "Largest lag");

  auto* verify = app.add_subcommand("verify", "Check the model against independent oracles");
  verify->add_option("--mc", o.mc, "Monte Carlo replications");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : config_error;
  }
  if (seed_opt->count() > 0) o.seed = seed;

  try {
    if (*sim) return cmd_simulate(o);
    if (*dist) return cmd_dist(o);
    if (*acf) return cmd_acf(o);
    if (*verify) return cmd_verify(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return config_error;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return precondition;
  } catch (const AccuracyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return accuracy;
  }
  return config_error;
}
