// pmh: command-line front end for the predictive moment hierarchy library.
//
// Exit status: 0 on success, 1 on a domain error (message on stderr), 2 on
// a usage error (message plus the valid flags of the offending command).

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pmh/pmh.hpp"

namespace {

using namespace pmh;

struct OutputOptions {
  std::string format = "table";
  std::string path;
};

void add_output_flags(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output,-o", out.path, "Write to this file instead of standard output");
}

void emit(const Table& table, const OutputOptions& out) {
  const Format format = parse_format(out.format);
  if (out.path.empty()) {
    write_table(std::cout, table, format);
    std::cout.flush();
    return;
  }
  std::ofstream file(out.path, std::ios::binary);
  if (!file) throw DomainError("cannot open output file " + out.path);
  write_table(file, table, format);
}

std::string show(const Rational& v, bool exact) { return exact ? to_fraction_string(v) : format_sig(v); }
std::string show(double v, bool) { return format_sig(v); }

// Prior, conditioning counts and arithmetic mode shared by measure verbs.
struct MeasureOptions {
  std::string prior = "jeffreys";
  std::uint64_t n = 0;
  std::uint64_t s = 0;
  bool exact = false;
  bool use_double = false;
};

void add_mode_flags(CLI::App* cmd, bool& exact, bool& use_double) {
  auto* e = cmd->add_flag("--exact", exact, "Print exact rationals instead of 12 significant digits");
  auto* d = cmd->add_flag("--double", use_double, "Compute in double precision instead of exact rationals");
  e->excludes(d);
}

void add_measure_flags(CLI::App* cmd, MeasureOptions& m, bool with_counts = true) {
  cmd->add_option("--prior", m.prior, "beta:a,b | point:m | discrete:x1,w1;x2,w2;... | jeffreys | uniform")
      ->capture_default_str();
  if (with_counts) {
    cmd->add_option("--n", m.n, "Number of observations conditioned on")->capture_default_str();
    cmd->add_option("--s", m.s, "Number of successes among them")->capture_default_str();
  }
  add_mode_flags(cmd, m.exact, m.use_double);
}

template <Scalar T>
MixingMeasure<T> posterior_of(const MeasureOptions& m) {
  return posterior(parse_measure_spec<T>(m.prior), m.n, m.s);
}

// Calls f with a value of the selected scalar type.
template <class F>
void dispatch(bool use_double, F&& f) {
  if (use_double) {
    f(double{});
  } else {
    f(Rational{});
  }
}

std::string horizon_text(const std::optional<unsigned>& tau) { return tau ? std::to_string(*tau) : "none"; }

Functional parse_functional(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto need_arg = [&] {
    if (arg.empty()) throw ParseError("functional '" + name + "' needs an argument, e.g. " + name + ":2");
  };
  if (name == "zeros-run" || name == "ones-run") {
    need_arg();
    const auto k = static_cast<unsigned>(std::stoul(arg));
    if (name == "zeros-run") return ZerosRun{k};
    return OnesRun{k};
  }
  if (name == "indicator") {
    need_arg();
    return Indicator{scalar_from_text<double>(arg)};
  }
  if (name == "entropy") return Entropy{};
  throw ParseError("unknown functional '" + text + "' (zeros-run:k, ones-run:k, indicator:t, entropy)");
}

std::vector<std::uint8_t> parse_bits(const std::string& text) {
  if (text.empty()) return {};
  return Pattern::parse(text).bits();
}

std::string bits_text(const std::vector<std::uint8_t>& bits) {
  std::string out;
  for (auto b : bits) out += static_cast<char>('0' + b);
  return out.empty() ? "-" : out;
}

struct SchemeOptions {
  std::string scheme;
  std::string c = "1";
  double alpha = 0.75;
  std::string theta0 = "0.5";
  std::string prior = "jeffreys";
};

template <Scalar T>
MartingaleScheme<T> build_scheme(const SchemeOptions& o) {
  if (o.scheme == "counterexample") return Counterexample{};
  if (o.scheme == "harmonic") return HarmonicRate<T>{scalar_from_text<T>(o.c), scalar_from_text<T>(o.theta0)};
  if (o.scheme == "power") return PowerRate<T>{o.alpha, scalar_from_text<T>(o.theta0)};
  return BayesMean<T>{parse_measure_spec<T>(o.prior)};
}

std::istream& open_input(const std::string& path, std::ifstream& file) {
  if (path == "-") return std::cin;
  file.open(path);
  if (!file) throw DomainError("cannot open input file " + path);
  return file;
}

void require_seed(const std::optional<std::uint64_t>& seed, const std::string& what) {
  if (!seed) throw CLI::RequiredError(what + ": --seed");
}

// Deepest subcommand that was named on the command line.
const CLI::App* deepest(const CLI::App& app) {
  const CLI::App* current = &app;
  for (;;) {
    const auto parsed = current->get_subcommands();
    if (parsed.empty()) return current;
    current = parsed.front();
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Predictive moment hierarchy for exchangeable Bernoulli sequences", "pmh"};
  app.require_subcommand(1);
  int status = 0;

  // table3
  std::uint64_t t3_n = 5, t3_s = 2;
  unsigned t3_kmax = 4;
  bool t3_exact = false;
  OutputOptions t3_out;
  auto* table3 = app.add_subcommand("table3", "Plug-in vs Jeffreys-Bayes k-step run probabilities");
  table3->add_option("--n", t3_n, "Observations")->capture_default_str();
  table3->add_option("--s", t3_s, "Successes")->capture_default_str();
  table3->add_option("--kmax", t3_kmax, "Largest horizon k (rows k = 2..kmax)")->capture_default_str();
  table3->add_flag("--exact", t3_exact, "Print exact rationals");
  add_output_flags(table3, t3_out);
  table3->callback([&] {
    Table t({"k", "plugin", "bayes", "relative_gap"});
    for (const auto& row : comparison_table(t3_n, t3_s, t3_kmax)) {
      const auto r = render(row, t3_exact);
      t.add_row({r.k, r.plugin, r.bayes, r.relative_gap});
    }
    emit(t, t3_out);
  });

  // predict
  auto* predict = app.add_subcommand("predict", "k-step predictives under a posterior");
  predict->require_subcommand(1);

  MeasureOptions pp_m;
  std::string pp_pattern;
  OutputOptions pp_out;
  auto* pp = predict->add_subcommand("pattern", "Probability of a pattern of the next k observations");
  add_measure_flags(pp, pp_m);
  pp->add_option("--pattern", pp_pattern, "Bits of the pattern, e.g. 0110")->required();
  add_output_flags(pp, pp_out);
  pp->callback([&] {
    dispatch(pp_m.use_double, [&](auto tag) {
      using T = decltype(tag);
      const auto post = posterior_of<T>(pp_m);
      const Pattern p = Pattern::parse(pp_pattern);
      const T mu = mean(post);
      const T plug = ipow(mu, p.ones()) * ipow(T(T{1} - mu), p.size() - p.ones());
      Table t({"pattern", "k", "ones", "bayes", "plugin"});
      t.add_row({p.str(), std::to_string(p.size()), std::to_string(p.ones()), show(pattern_prob(post, p), pp_m.exact),
                 show(plug, pp_m.exact)});
      emit(t, pp_out);
    });
  });

  MeasureOptions pr_m;
  std::vector<unsigned> pr_k;
  OutputOptions pr_out;
  auto* pr = predict->add_subcommand("run", "Probability that the next k observations are all zero");
  add_measure_flags(pr, pr_m);
  pr->add_option("--k", pr_k, "Run length(s), comma separated")->required()->delimiter(',');
  add_output_flags(pr, pr_out);
  pr->callback([&] {
    dispatch(pr_m.use_double, [&](auto tag) {
      using T = decltype(tag);
      const auto post = posterior_of<T>(pr_m);
      Table t({"k", "bayes", "plugin"});
      for (unsigned k : pr_k) {
        t.add_row({std::to_string(k), show(run_prob(post, k), pr_m.exact), show(plugin_run_prob(post, k), pr_m.exact)});
      }
      emit(t, pr_out);
    });
  });

  MeasureOptions pg_m;
  std::vector<unsigned> pg_k;
  OutputOptions pg_out;
  auto* pg = predict->add_subcommand("gap", "Bayes minus plug-in run probability with its quadratic bound");
  add_measure_flags(pg, pg_m);
  pg->add_option("--k", pg_k, "Run length(s), comma separated")->required()->delimiter(',');
  add_output_flags(pg, pg_out);
  pg->callback([&] {
    dispatch(pg_m.use_double, [&](auto tag) {
      using T = decltype(tag);
      const auto post = posterior_of<T>(pg_m);
      Table t({"k", "bayes", "plugin", "gap", "upper_bound", "variance"});
      for (unsigned k : pg_k) {
        const auto g = gap_report(post, k);
        t.add_row({std::to_string(k), show(g.bayes, pg_m.exact), show(g.plugin, pg_m.exact), show(g.gap, pg_m.exact),
                   show(g.upper_bound, pg_m.exact), show(g.variance, pg_m.exact)});
      }
      emit(t, pg_out);
    });
  });

  std::string rg_m;
  unsigned rg_k = 2;
  bool rg_exact = false, rg_double = false;
  OutputOptions rg_out;
  auto* rg = predict->add_subcommand("range", "Range of the k-step run probability over measures with mean m");
  rg->add_option("--m", rg_m, "Posterior mean in (0,1)")->required();
  rg->add_option("--k", rg_k, "Run length (>= 2)")->required();
  add_mode_flags(rg, rg_exact, rg_double);
  add_output_flags(rg, rg_out);
  rg->callback([&] {
    dispatch(rg_double, [&](auto tag) {
      using T = decltype(tag);
      const T m = scalar_from_text<T>(rg_m);
      const auto range = predictive_range(m, rg_k);
      Table t({"m", "k", "lo", "hi", "lo_attained", "hi_attained"});
      t.add_row({show(m, rg_exact), std::to_string(rg_k), show(range.lo, rg_exact), show(range.hi, rg_exact),
                 show(run_prob(MixingMeasure<T>::point(m), rg_k), rg_exact),
                 show(run_prob(range_upper_measure(m), rg_k), rg_exact)});
      emit(t, rg_out);
    });
  });

  std::string wt_m, wt_f, wt_a = "0", wt_b = "1";
  OutputOptions wt_out;
  auto* wt = predict->add_subcommand("witness", "Two measures with the same mean but different E[f(theta)]");
  wt->add_option("--m", wt_m, "Common mean")->required();
  wt->add_option("--functional", wt_f, "zeros-run:k | ones-run:k | indicator:t | entropy")->required();
  wt->add_option("--a", wt_a, "Lower bracket point")->capture_default_str();
  wt->add_option("--b", wt_b, "Upper bracket point")->capture_default_str();
  add_output_flags(wt, wt_out);
  wt->callback([&] {
    const Functional f = parse_functional(wt_f);
    const auto w = nonid_witness(parse_rational(wt_m), f, parse_rational(wt_a), parse_rational(wt_b));
    Table t({"functional", "measure", "mean", "value"});
    t.add_row({describe(f), describe(w.point), to_exact_string(mean(w.point)), format_sig(w.point_value)});
    t.add_row({describe(f), describe(w.two_point), to_exact_string(mean(w.two_point)), format_sig(w.two_point_value)});
    emit(t, wt_out);
  });

  // hierarchy
  auto* hierarchy = app.add_subcommand("hierarchy", "Run/moment transform and Hausdorff screening");
  hierarchy->require_subcommand(1);

  std::string inv_in, inv_from = "runs";
  bool inv_exact = false, inv_double = false;
  OutputOptions inv_out;
  auto* inv = hierarchy->add_subcommand("invert", "Map runs to moments (or moments to runs)");
  inv->add_option("--input", inv_in, "CSV of index,value ('-' for standard input)")->required();
  inv->add_option("--from", inv_from, "Kind of the input sequence")
      ->check(CLI::IsMember({"runs", "moments"}))
      ->capture_default_str();
  add_mode_flags(inv, inv_exact, inv_double);
  add_output_flags(inv, inv_out);
  inv->callback([&] {
    std::ifstream file;
    std::istream& is = open_input(inv_in, file);
    dispatch(inv_double, [&](auto tag) {
      using T = decltype(tag);
      const auto values = read_sequence<T>(is);
      std::vector<T> out;
      if (inv_from == "runs") {
        const auto m = moments_from_runs(RunSequence<T>(values));
        out.assign(m.values().begin(), m.values().end());
      } else {
        const auto r = runs_from_moments(MomentSequence<T>(values));
        out.assign(r.values().begin(), r.values().end());
      }
      Table t({"index", "value"});
      for (std::size_t i = 0; i < out.size(); ++i) {
        std::string v;
        if constexpr (is_exact_v<T>) {
          v = inv_exact ? to_fraction_string(out[i]) : to_exact_string(out[i]);
        } else {
          v = format_sig(out[i]);
        }
        t.add_row({std::to_string(i), v});
      }
      emit(t, inv_out);
    });
  });

  std::string cm_in, cm_tol;
  unsigned cm_order = 0;
  bool cm_exact = false, cm_double = false;
  OutputOptions cm_out;
  auto* cm = hierarchy->add_subcommand("check-cm", "Screen a sequence for complete monotonicity");
  cm->add_option("--input", cm_in, "CSV of index,value ('-' for standard input)")->required();
  cm->add_option("--max-order", cm_order, "Largest difference order (default: length - 1)");
  cm->add_option("--tol", cm_tol, "Tolerance (default 0 exact, 1e-10 * length in double mode)");
  add_mode_flags(cm, cm_exact, cm_double);
  add_output_flags(cm, cm_out);
  cm->callback([&] {
    std::ifstream file;
    std::istream& is = open_input(cm_in, file);
    dispatch(cm_double, [&](auto tag) {
      using T = decltype(tag);
      const auto values = read_sequence<T>(is);
      T tol{0};
      if (!cm_tol.empty()) {
        tol = scalar_from_text<T>(cm_tol);
      } else if constexpr (!is_exact_v<T>) {
        tol = default_monotonicity_tolerance(values.size());
      }
      const unsigned order = cm_order == 0 ? static_cast<unsigned>(std::max<std::size_t>(1, values.size() - 1)) : cm_order;
      const auto verdict = check_complete_monotonicity<T>(values, order, tol);
      Table t({"pass", "order", "index", "signed_value"});
      if (verdict.pass) {
        t.add_row({"true", "", "", ""});
      } else {
        const auto& w = *verdict.witness;
        t.add_row({"false", std::to_string(w.order), std::to_string(w.index), show(w.signed_value, cm_exact)});
      }
      emit(t, cm_out);
    });
  });

  MeasureOptions rt_m;
  unsigned rt_K = 10;
  bool rt_detail = false;
  OutputOptions rt_out;
  auto* rt = hierarchy->add_subcommand("roundtrip", "moments -> runs -> moments reconstruction error");
  add_measure_flags(rt, rt_m);
  rt->add_option("--K", rt_K, "Highest order")->required();
  rt->add_flag("--detail", rt_detail, "Print every index instead of the summary");
  add_output_flags(rt, rt_out);
  rt->callback([&] {
    dispatch(rt_m.use_double, [&](auto tag) {
      using T = decltype(tag);
      const auto post = posterior_of<T>(rt_m);
      const auto report = injectivity_roundtrip(post, rt_K);
      if (rt_detail) {
        Table t({"index", "moment", "run", "reconstructed"});
        for (std::size_t j = 0; j <= rt_K; ++j) {
          t.add_row({std::to_string(j), show(report.moments[j], rt_m.exact), show(report.runs[j], rt_m.exact),
                     show(report.reconstructed[j], rt_m.exact)});
        }
        emit(t, rt_out);
        return;
      }
      Table t({"measure", "K", "max_abs_error", "runs_completely_monotone"});
      t.add_row({describe(post), std::to_string(rt_K), show(report.max_abs_error, rt_m.exact),
                 report.runs_completely_monotone ? "true" : "false"});
      emit(t, rt_out);
    });
  });

  // regret
  auto* regret = app.add_subcommand("regret", "Scoring-rule regret of the plug-in predictive");
  regret->require_subcommand(1);
  std::string rs_prior = "jeffreys", rs_ratio = "0.4";
  std::vector<std::uint64_t> rs_n;
  std::vector<unsigned> rs_k;
  OutputOptions rs_out;
  auto* rs = regret->add_subcommand("sweep", "Log-score and Brier regret over (n, k) at s = round(ratio n)");
  rs->add_option("--prior", rs_prior, "Prior spec")->capture_default_str();
  rs->add_option("--n-list", rs_n, "Sample sizes, comma separated")->required()->delimiter(',');
  rs->add_option("--k-list", rs_k, "Horizons, comma separated")->required()->delimiter(',');
  rs->add_option("--ratio", rs_ratio, "Success ratio s/n")->capture_default_str();
  add_output_flags(rs, rs_out);
  rs->callback([&] {
    Table t({"n", "s_over_n", "k", "p_bayes", "p_plugin", "kl_regret", "brier_regret", "variance"});
    for (const auto& r : regret_sweep(parse_measure_spec<Rational>(rs_prior), rs_n, rs_k, parse_rational(rs_ratio))) {
      t.add_row({std::to_string(r.n), format_sig(r.s_over_n), std::to_string(r.k), format_sig(r.p_bayes),
                 format_sig(r.p_plugin), format_sig(r.kl_regret), format_sig(r.brier_regret), format_sig(r.variance)});
    }
    emit(t, rs_out);
  });

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Martingale-scheme simulators and checks");
  simulate->require_subcommand(1);
  SchemeOptions sc;
  std::string sc_check = "path", sc_prefix, sc_driving = "predictive";
  std::uint64_t sc_n = 10, sc_reps = 100000;
  unsigned sc_horizon = 4, sc_maxlen = 4, sc_threads = 0;
  std::optional<std::uint64_t> sc_seed;
  OutputOptions sc_out;
  auto* ss = simulate->add_subcommand("scheme", "Simulate or check one martingale scheme");
  ss->add_option("--scheme", sc.scheme, "Scheme")
      ->required()
      ->check(CLI::IsMember({"counterexample", "harmonic", "power", "bayes"}));
  ss->add_option("--check", sc_check, "What to run")
      ->check(CLI::IsMember({"path", "order", "bounds", "cid", "martingale"}))
      ->capture_default_str();
  ss->add_option("--c", sc.c, "Harmonic rate offset: gamma_n = 1/(n+1+c)")->capture_default_str();
  ss->add_option("--alpha", sc.alpha, "Power rate exponent: gamma_n = (n+1)^-alpha")->capture_default_str();
  ss->add_option("--theta0", sc.theta0, "Initial value for learning-rate schemes")->capture_default_str();
  ss->add_option("--prior", sc.prior, "Prior for the bayes scheme")->capture_default_str();
  ss->add_option("--n", sc_n, "Path length (path, bounds) or conditioning length (cid)")->capture_default_str();
  ss->add_option("--horizon", sc_horizon, "Leads j checked by cid")->capture_default_str();
  ss->add_option("--reps", sc_reps, "Monte Carlo replications")->capture_default_str();
  ss->add_option("--max-length", sc_maxlen, "Longest path enumerated by order")->capture_default_str();
  ss->add_option("--prefix", sc_prefix, "Conditioning path for martingale, e.g. 10011");
  ss->add_option("--driving", sc_driving, "Law of the next observation for martingale")
      ->check(CLI::IsMember({"predictive", "fair-coin"}))
      ->capture_default_str();
  ss->add_option("--seed", sc_seed, "Master seed (required for path, cid, martingale)");
  ss->add_option("--threads", sc_threads, "Worker threads (0 = all cores); results do not depend on it");
  add_output_flags(ss, sc_out);
  ss->callback([&] {
    if (sc_check == "order") {
      const auto verdict = order_dependence_check(build_scheme<Rational>(sc), sc_maxlen);
      Table t({"exchange_consistent", "first", "second", "first_theta", "second_theta"});
      if (verdict.exchange_consistent) {
        t.add_row({"true", "", "", "", ""});
      } else {
        const auto& w = *verdict.witness;
        t.add_row({"false", bits_text(w.first), bits_text(w.second), to_fraction_string(w.first_theta),
                   to_fraction_string(w.second_theta)});
      }
      emit(t, sc_out);
      return;
    }
    if (sc_check == "bounds") {
      Table t({"n", "paths", "min_theta", "max_theta"});
      const bool exact_ok = sc.scheme != "power" || sc.alpha == std::floor(sc.alpha);
      for (unsigned n = 0; n <= sc_n; ++n) {
        const Bounds b = exact_ok ? enumerate_theta_bounds(build_scheme<Rational>(sc), n)
                                  : enumerate_theta_bounds(build_scheme<double>(sc), n);
        t.add_row({std::to_string(n), std::to_string(b.paths), format_sig(b.min_theta), format_sig(b.max_theta)});
      }
      emit(t, sc_out);
      return;
    }
    require_seed(sc_seed, "simulate scheme --check " + sc_check);
    const auto scheme = build_scheme<double>(sc);
    if (sc_check == "path") {
      const auto path = simulate_path(scheme, sc_n, *sc_seed, 0);
      Table t({"step", "x", "s", "theta"});
      t.comments.push_back("seed=" + std::to_string(*sc_seed));
      SchemeState<double> state = initial_state(scheme);
      t.add_row({"0", "", "0", format_sig(state.theta)});
      for (auto x : path) {
        state = step_scheme(scheme, state, x != 0);
        t.add_row({std::to_string(state.n), std::to_string(x), std::to_string(state.s), format_sig(state.theta)});
      }
      emit(t, sc_out);
    } else if (sc_check == "cid") {
      const auto report = cid_check(scheme, sc_n, sc_horizon, sc_reps, *sc_seed, sc_threads);
      Table t({"j", "estimate", "standard_error", "deviation", "within_3se"});
      t.comments.push_back("seed=" + std::to_string(*sc_seed) + " replications=" + std::to_string(sc_reps));
      t.comments.push_back("prefix=" + bits_text(report.prefix) + " theta_n=" + format_sig(report.theta_n) +
                           " pass=" + (report.pass ? "true" : "false"));
      for (const auto& r : report.rows) {
        t.add_row({std::to_string(r.j), format_sig(r.estimate), format_sig(r.standard_error), format_sig(r.deviation),
                   r.within ? "true" : "false"});
      }
      emit(t, sc_out);
    } else {
      const DrivingLaw law = sc_driving == "fair-coin" ? DrivingLaw::FairCoin : DrivingLaw::Predictive;
      const auto c = martingale_check(scheme, parse_bits(sc_prefix), sc_reps, *sc_seed, sc_threads, law);
      Table t({"prefix", "theta_n", "mean_increment", "standard_error", "within_3se"});
      t.comments.push_back("seed=" + std::to_string(*sc_seed) + " replications=" + std::to_string(sc_reps) +
                           " driving=" + sc_driving);
      t.add_row({bits_text(parse_bits(sc_prefix)), format_sig(c.theta_n), format_sig(c.mean_increment),
                 format_sig(c.standard_error), c.within ? "true" : "false"});
      emit(t, sc_out);
    }
  });

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Frequentist sweeps of the Bayes / plug-in gap");
  experiment->require_subcommand(1);
  struct ExperimentFlags {
    std::string prior = "jeffreys";
    std::vector<double> theta0;
    std::vector<std::uint64_t> n_list;
    std::uint64_t reps = 200;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    OutputOptions out;
  };
  auto add_experiment_flags = [](CLI::App* cmd, ExperimentFlags& f) {
    cmd->add_option("--prior", f.prior, "Prior used for inference")->capture_default_str();
    cmd->add_option("--theta0", f.theta0, "True parameters, comma separated")->required()->delimiter(',');
    cmd->add_option("--n-list", f.n_list, "Sample sizes, comma separated and increasing")->required()->delimiter(',');
    cmd->add_option("--reps", f.reps, "Replications per theta0")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Master seed")->required();
    cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores); results do not depend on it");
    add_output_flags(cmd, f.out);
  };
  auto experiment_spec = [](const ExperimentFlags& f) {
    ExperimentSpec spec;
    spec.prior = parse_measure_spec<double>(f.prior);
    spec.theta0_list = f.theta0;
    spec.n_grid = f.n_list;
    spec.replications = f.reps;
    spec.master_seed = *f.seed;
    spec.threads = f.threads;
    return spec;
  };
  auto result_table = [](const ExperimentFlags& f, const std::vector<ResultRow>& rows) {
    Table t({"theta0", "n", "k", "mean_gap", "se", "mean_relative_gap", "relative_se", "mean_variance"});
    t.comments.push_back("seed=" + std::to_string(*f.seed) + " replications=" + std::to_string(f.reps) +
                         " prior=" + f.prior);
    for (const auto& r : rows) {
      t.add_row({format_sig(r.theta0), std::to_string(r.n), std::to_string(r.k), format_sig(r.mean_gap),
                 format_sig(r.se), format_sig(r.mean_relative_gap), format_sig(r.relative_se),
                 format_sig(r.mean_variance)});
    }
    return t;
  };

  ExperimentFlags eg;
  std::vector<unsigned> eg_k{2};
  auto* eg_cmd = experiment->add_subcommand("gap", "Mean gap at fixed horizons, with log-log slopes");
  add_experiment_flags(eg_cmd, eg);
  eg_cmd->add_option("--k-list", eg_k, "Fixed horizons, comma separated")->delimiter(',')->capture_default_str();
  eg_cmd->callback([&] {
    ExperimentSpec spec = experiment_spec(eg);
    spec.horizons = FixedHorizons{eg_k};
    const auto rows = discrepancy_experiment(spec);
    Table t = result_table(eg, rows);
    for (double theta0 : eg.theta0) {
      for (unsigned k : eg_k) {
        std::vector<double> xs, ys;
        for (const auto& r : rows) {
          if (r.theta0 == theta0 && r.k == k) {
            xs.push_back(static_cast<double>(r.n));
            ys.push_back(r.mean_gap);
          }
        }
        try {
          t.comments.push_back("slope theta0=" + format_sig(theta0) + " k=" + std::to_string(k) + ": " +
                               format_sig(fit_loglog_slope(xs, ys), 6));
        } catch (const DomainError&) {
          // fewer than two points with n >= 50
        }
      }
    }
    emit(t, eg.out);
  });

  ExperimentFlags eh;
  std::string eh_rule = "sqrt";
  double eh_c = 1.0;
  auto* eh_cmd = experiment->add_subcommand("horizon", "Mean gap with a horizon growing in n");
  add_experiment_flags(eh_cmd, eh);
  eh_cmd->add_option("--rule", eh_rule, "k_n = max(2, round(c sqrt n)) or max(2, round(c log n))")
      ->check(CLI::IsMember({"sqrt", "log"}))
      ->capture_default_str();
  eh_cmd->add_option("--c", eh_c, "Horizon scale c")->capture_default_str();
  eh_cmd->callback([&] {
    ExperimentSpec spec = experiment_spec(eh);
    if (eh_rule == "sqrt") {
      spec.horizons = SqrtHorizon{eh_c};
    } else {
      spec.horizons = LogHorizon{eh_c};
    }
    const auto rows = growing_horizon_experiment(spec);
    Table t = result_table(eh, rows);
    for (double theta0 : eh.theta0) {
      const auto abs_trend = horizon_trend(rows, theta0, false);
      const auto rel_trend = horizon_trend(rows, theta0, true);
      t.comments.push_back("trend theta0=" + format_sig(theta0) + " mean_gap " + format_sig(abs_trend.first, 6) +
                           " -> " + format_sig(abs_trend.last, 6) + ", mean_relative_gap " +
                           format_sig(rel_trend.first, 6) + " -> " + format_sig(rel_trend.last, 6));
    }
    emit(t, eh.out);
  });

  // stopping
  auto* stopping = app.add_subcommand("stopping", "Multi-step prediction values and effective horizons");
  stopping->require_subcommand(1);

  MeasureOptions sg_m;
  unsigned sg_K = 6;
  OutputOptions sg_out;
  auto* sg = stopping->add_subcommand("gap", "V - V_tilde over tau in [2, K]");
  add_measure_flags(sg, sg_m);
  sg->add_option("--K", sg_K, "Largest horizon")->required();
  add_output_flags(sg, sg_out);
  sg->callback([&] {
    dispatch(sg_m.use_double, [&](auto tag) {
      using T = decltype(tag);
      const auto post = posterior_of<T>(sg_m);
      const auto v = stopping_value_gap(post, sg_K);
      Table t({"V", "V_tilde", "gap", "variance", "argmax_full", "argmax_plugin"});
      t.add_row({show(v.value_full, sg_m.exact), show(v.value_plugin, sg_m.exact), show(v.gap, sg_m.exact),
                 show(variance(post), sg_m.exact), std::to_string(v.argmax_full), std::to_string(v.argmax_plugin)});
      emit(t, sg_out);
    });
  });

  MeasureOptions sw_m;
  unsigned sw_K = 4;
  std::optional<unsigned> sw_tau0;
  OutputOptions sw_out;
  auto* sw = stopping->add_subcommand("witness", "Threshold separating full-posterior and plug-in horizons");
  add_measure_flags(sw, sw_m);
  sw->add_option("--K", sw_K, "Largest horizon (>= 3)")->required();
  sw->add_option("--tau0", sw_tau0, "Horizon to separate (default: largest gap in [2, K-1])");
  add_output_flags(sw, sw_out);
  sw->callback([&] {
    dispatch(sw_m.use_double, [&](auto tag) {
      using T = decltype(tag);
      const auto w = stopping_boundary_witness(posterior_of<T>(sw_m), sw_K, sw_tau0);
      Table t({"r", "tau0", "bayes_at_tau0", "plugin_at_tau0", "tau_star", "tau_tilde"});
      t.add_row({show(w.threshold, sw_m.exact), std::to_string(w.tau0), show(w.bayes_at_tau0, sw_m.exact),
                 show(w.plugin_at_tau0, sw_m.exact), horizon_text(w.tau_full), horizon_text(w.tau_plugin)});
      emit(t, sw_out);
    });
  });

  // figure
  std::string fig_id;
  FigureConfig fig_config;
  OutputOptions fig_out;
  fig_out.format = "csv";
  auto* figure = app.add_subcommand("figure", "Data behind a figure, as CSV by default");
  figure->add_option("id", fig_id, "Figure id")->required()->check(CLI::IsMember(figure_ids()));
  figure->add_option("--seed", fig_config.seed, "Master seed (required for asymptotic)");
  figure->add_option("--reps", fig_config.replications, "Replications for asymptotic")->capture_default_str();
  figure->add_option("--threads", fig_config.threads, "Worker threads (0 = all cores); results do not depend on it");
  add_output_flags(figure, fig_out);
  figure->callback([&] {
    if (fig_id == "asymptotic") require_seed(fig_config.seed, "figure asymptotic");
    emit(emit_figure_data(fig_id, fig_config), fig_out);
  });

  // verify
  PropertyOptions vf;
  OutputOptions vf_out;
  auto* verify = app.add_subcommand("verify", "Run every property suite and report pass/fail counts");
  verify->add_option("--seed", vf.seed, "Seed for randomized properties")->capture_default_str();
  verify->add_option("--threads", vf.threads, "Worker threads (0 = all cores)");
  add_output_flags(verify, vf_out);
  verify->callback([&] {
    const auto results = run_property_suite(vf);
    Table t({"module", "property", "result", "detail"});
    std::size_t passed = 0;
    for (const auto& r : results) {
      t.add_row({r.module, r.name, r.pass ? "PASS" : "FAIL", r.detail});
      if (r.pass) ++passed;
    }
    t.comments.push_back("seed=" + std::to_string(vf.seed));
    emit(t, vf_out);
    std::cerr << "passed " << passed << " of " << results.size() << " properties";
    if (passed != results.size()) std::cerr << ", " << results.size() - passed << " failed";
    std::cerr << '\n';
    status = passed == results.size() ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << deepest(app)->help();
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << deepest(app)->help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
