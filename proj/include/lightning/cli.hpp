#pragma once

// Command-line configuration and dispatch for the lightning tool.

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lightning/builder.hpp"
#include "lightning/error.hpp"
#include "lightning/evaluator.hpp"
#include "lightning/experiments.hpp"
#include "lightning/mpnum.hpp"
#include "lightning/scheme.hpp"
#include "lightning/serialize.hpp"
#include "lightning/theory.hpp"

namespace lightning {

enum class Subcommand { Build, Eval, Converge, QuadErr, Theory };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNumerical = 4;

struct RunConfig {
  Subcommand subcommand = Subcommand::Build;
  SchemeKind kind = SchemeKind::Tapered;
  Axis axis = Axis::RealAxis;
  std::string alpha = "0.5";
  std::optional<std::string> sigma;  // unset: best sigma
  std::string c_shift = "1";
  std::vector<int> n1_list{16};
  N2Choice n2;
  int precision_bits = 0;  // resolved, always > 0 after parse_args
  int n_log = 1000;
  int n_lin = 200;
  int threads = 1;
  int oracle_doublings = OracleOptions{}.max_doublings;
  std::string output;  // empty: stdout
  std::string input;   // eval: approximant document
  std::vector<std::string> eval_points;
  std::string help;  // set when --help was given; run_cli prints it and exits 0
};

/// "a:b:c" -> {a, a+b, ..., <= c}.
inline std::vector<int> parse_n1_grid(const std::string& text) {
  auto bad = [&] { return Error(ErrorKind::Usage, "malformed grid '" + text + "', expected start:step:stop"); };
  std::vector<long> parts;
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t next = text.find(':', pos);
    if ((i < 2) != (next != std::string::npos)) throw bad();
    const std::string piece = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (piece.empty() || piece.find_first_not_of("0123456789") != std::string::npos || piece.size() > 9) {
      throw bad();
    }
    parts.push_back(std::stol(piece));
    pos = next + 1;
  }
  const long start = parts[0], step = parts[1], stop = parts[2];
  if (start < 1 || step < 1 || stop < start) throw bad();
  std::vector<int> out;
  for (long v = start; v <= stop; v += step) out.push_back(static_cast<int>(v));
  return out;
}

inline N2Choice parse_n2_choice(const std::string& text) {
  N2Choice c;
  if (text == "fig") {
    c.mode = N2Mode::FigRule;
  } else if (text == "bound") {
    c.mode = N2Mode::BoundRule;
  } else if (!text.empty() && text.size() <= 6 && text.find_first_not_of("0123456789") == std::string::npos) {
    c.fixed_degree = std::stoi(text);
  } else {
    throw Error(ErrorKind::Usage, "--n2 must be fig, bound or a non-negative integer, got '" + text + "'");
  }
  return c;
}

namespace detail {

inline BigReal usage_decimal(const std::string& flag, const std::string& text, int bits) {
  if (!is_decimal_literal(text)) throw Error(ErrorKind::Usage, flag + " expects a decimal number, got '" + text + "'");
  return from_decimal(text, bits);
}

// Validates the numeric inputs and fills in the precision.
inline void resolve_config(RunConfig& cfg, const std::string& precision_text) {
  const int probe_bits = 256;
  PrecisionScope probe(probe_bits);
  const BigReal alpha = usage_decimal("--alpha", cfg.alpha, probe_bits);
  if (!(alpha >= from_decimal("0.02", probe_bits) && alpha <= from_decimal("0.98", probe_bits))) {
    throw Error(ErrorKind::Usage, "--alpha must lie in [0.02, 0.98], got " + cfg.alpha);
  }
  const BigReal sigma = cfg.sigma ? usage_decimal("--sigma", *cfg.sigma, probe_bits) : best_sigma(cfg.kind, alpha);
  if (!(sigma > BigReal(0))) throw Error(ErrorKind::Usage, "--sigma must be positive");
  const BigReal c = usage_decimal("--c-shift", cfg.c_shift, probe_bits);
  if (!(c >= BigReal(1))) throw Error(ErrorKind::Usage, "--c-shift must be >= 1");

  if (precision_text == "auto") {
    const int n1_max = *std::max_element(cfg.n1_list.begin(), cfg.n1_list.end());
    SchemeParams p = make_params(cfg.kind, cfg.axis, alpha, sigma, c, n1_max, 0);
    const int n2 = cfg.n2.resolve(n1_max, n2_rule_step(p));
    PrecisionPolicy policy;
    policy.target_exponent_rho = predicted_exponent(cfg.kind, alpha, sigma).exponent_rho.to_double();
    policy.n_max = n1_max + n2;
    cfg.precision_bits = required_precision(policy);
  } else {
    if (precision_text.empty() || precision_text.size() > 7 ||
        precision_text.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorKind::Usage, "--precision must be auto or a bit count, got '" + precision_text + "'");
    }
    cfg.precision_bits = std::stoi(precision_text);
    if (cfg.precision_bits < kMinPrecisionBits || cfg.precision_bits > 1 << 16) {
      throw Error(ErrorKind::Usage, "--precision must lie in [128, 65536]");
    }
  }
}

}  // namespace detail

/// Parses argv into a validated configuration; every failure is a Usage error.
inline RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Lightning + polynomial approximation of x^alpha", "lightning"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string scheme = "tapered", axis = "real", sigma_mode, n1_grid, n2 = "fig", precision = "auto";
  std::optional<int> n1;
  std::string sigma;

  auto add_config = [&](CLI::App* sub, bool grid) {
    sub->add_option("--scheme", scheme, "tapered | uniform")->check(CLI::IsMember({"tapered", "uniform"}));
    sub->add_option("--alpha", cfg.alpha, "exponent in [0.02, 0.98]");
    sub->add_option("--sigma", sigma, "pole clustering parameter");
    sub->add_option("--sigma-mode", sigma_mode, "best: use the optimal sigma")->check(CLI::IsMember({"best"}));
    sub->add_option("--precision", precision, "auto | mantissa bits");
    if (grid) {
      sub->add_option("--n1-grid", n1_grid, "start:step:stop");
      sub->add_option("--n1", n1, "single N1");
      sub->add_option("--n-log", cfg.n_log, "log-spaced error grid points");
      sub->add_option("--n-lin", cfg.n_lin, "equispaced error grid points");
      sub->add_option("--threads", cfg.threads, "worker threads");
    } else {
      sub->add_option("--n1", n1, "clustered poles");
    }
    sub->add_option("--output", cfg.output, "output path (stdout if omitted)");
  };

  CLI::App* build = app.add_subcommand("build", "build one approximant and write it as JSON");
  add_config(build, false);
  build->add_option("--axis", axis, "real | imag")->check(CLI::IsMember({"real", "imag"}));
  build->add_option("--c-shift", cfg.c_shift, "pole shift C >= 1");
  build->add_option("--n2", n2, "fig | bound | degree");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a saved approximant");
  eval->add_option("--input", cfg.input, "approximant document")->required();
  eval->add_option("--x", cfg.eval_points, "evaluation points")->required();
  eval->add_option("--output", cfg.output, "output path (stdout if omitted)");

  CLI::App* converge = app.add_subcommand("converge", "sup-norm error study over N1");
  add_config(converge, true);
  converge->add_option("--axis", axis, "real | imag")->check(CLI::IsMember({"real", "imag"}));
  converge->add_option("--c-shift", cfg.c_shift, "pole shift C >= 1");
  converge->add_option("--n2", n2, "fig | bound | degree");

  CLI::App* quaderr = app.add_subcommand("quaderr", "quadrature error study over N1");
  add_config(quaderr, true);
  quaderr->add_option("--oracle-doublings", cfg.oracle_doublings, "panel doublings before the oracle gives up");

  CLI::App* theory = app.add_subcommand("theory", "print predicted constants");
  add_config(theory, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* chosen = &app;
    for (const CLI::App* sub : app.get_subcommands()) chosen = sub;
    cfg.help = chosen->help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::Usage, e.what());
  }

  if (build->parsed()) cfg.subcommand = Subcommand::Build;
  if (eval->parsed()) cfg.subcommand = Subcommand::Eval;
  if (converge->parsed()) cfg.subcommand = Subcommand::Converge;
  if (quaderr->parsed()) cfg.subcommand = Subcommand::QuadErr;
  if (theory->parsed()) cfg.subcommand = Subcommand::Theory;

  try {
    cfg.kind = parse_scheme_kind(scheme);
    cfg.axis = parse_axis(axis);
    cfg.n2 = parse_n2_choice(n2);
  } catch (const Error& e) {
    throw Error(ErrorKind::Usage, e.what());
  }
  if (!sigma.empty() && !sigma_mode.empty()) throw Error(ErrorKind::Usage, "--sigma and --sigma-mode are exclusive");
  if (!sigma.empty()) cfg.sigma = sigma;
  if (!n1_grid.empty() && n1) throw Error(ErrorKind::Usage, "--n1 and --n1-grid are exclusive");
  if (!n1_grid.empty()) {
    cfg.n1_list = parse_n1_grid(n1_grid);
  } else if (n1) {
    if (*n1 < 1) throw Error(ErrorKind::Usage, "--n1 must be >= 1");
    cfg.n1_list = {*n1};
  } else if (cfg.subcommand == Subcommand::Theory) {
    cfg.n1_list = {100};
  }
  if (cfg.n_log < 1 || cfg.n_lin < 1) throw Error(ErrorKind::Usage, "grid sizes must be >= 1");
  if (cfg.threads < 1) throw Error(ErrorKind::Usage, "--threads must be >= 1");
  if (cfg.oracle_doublings < 0) throw Error(ErrorKind::Usage, "--oracle-doublings must be >= 0");
  if (cfg.subcommand != Subcommand::Eval) {
    try {
      detail::resolve_config(cfg, precision);
    } catch (const Error& e) {
      throw Error(ErrorKind::Usage, e.what());
    }
  }
  return cfg;
}

inline RunConfig parse_args(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return parse_args(args);
}

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::Format:
    case ErrorKind::Domain:
    case ErrorKind::InvalidPolicy:
      return kExitUsage;
    case ErrorKind::Io:
    case ErrorKind::Load:
      return kExitIo;
    case ErrorKind::OracleFailure:
    case ErrorKind::Singularity:
    case ErrorKind::InsufficientData:
      return kExitNumerical;
  }
  return kExitNumerical;
}

namespace detail {

inline void deliver(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
  } else {
    write_text(cfg.output, text);
  }
}

inline SchemeParams params_for(const RunConfig& cfg, int n1) {
  const BigReal alpha = from_decimal(cfg.alpha);
  const BigReal sigma = cfg.sigma ? from_decimal(*cfg.sigma) : best_sigma(cfg.kind, alpha);
  SchemeParams p = make_params(cfg.kind, cfg.axis, alpha, sigma, from_decimal(cfg.c_shift), n1, 0);
  p.n2 = cfg.n2.resolve(n1, n2_rule_step(p));
  return p;
}

inline std::string theory_table(const RunConfig& cfg) {
  const int digits = 20;
  const SchemeParams p = params_for(cfg, cfg.n1_list.back());
  const RateModel rate = predicted_exponent(p.kind, p.alpha, p.sigma);
  const SingularityInfo s = x_star(p.alpha, p.t_cap);
  const QBound q = q_bounds(p.alpha, p.sigma, p.t_cap);
  const TruncBounds tb = trunc_bounds(p.t_cap);
  std::vector<std::pair<std::string, std::string>> rows = {
      {"scheme", to_string(p.kind)},
      {"alpha", to_decimal(p.alpha, digits)},
      {"sigma", to_decimal(p.sigma, digits)},
      {"kappa", to_decimal(p.kappa, digits)},
      {"predicted_rho", to_decimal(rate.exponent_rho, digits)},
      {"regime", to_string(rate.regime)},
      {"best_sigma", to_decimal(best_sigma(p.kind, p.alpha), digits)},
      {"stahl_limit", to_decimal(stahl_limit(p.alpha), digits)},
      {"m_zero", std::to_string(m_zero(p.sigma))},
      {"rate_prefactor", to_decimal(rate_prefactor(p.sigma), digits)},
      {"n1", std::to_string(p.n1)},
      {"n2", std::to_string(p.n2)},
      {"step", to_decimal(p.step, digits)},
      {"t_cap", to_decimal(p.t_cap, digits)},
      {"n_total", std::to_string(p.n_total)},
      {"u_star", to_decimal(s.u_star, digits)},
      {"gamma", to_decimal(s.gamma, digits)},
      {"x_star", to_decimal(s.x_star, digits)},
      {"eta", to_decimal(q.eta, digits)},
      {"q_lower", to_decimal(q.lower, digits)},
      {"q_upper", to_decimal(q.upper, digits)},
      {"q_x_min", to_decimal(q.x_min, digits)},
      {"trunc_e1", to_decimal(tb.e1, digits)},
      {"trunc_e_full", to_decimal(tb.e_full, digits)},
  };
  std::string out;
  for (const auto& [k, v] : rows) out += k + "=" + v + "\n";
  return out;
}

}  // namespace detail

/// Runs a parsed configuration; returns the process exit code.
inline int run_cli(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.help.empty()) {
    out << cfg.help;
    return kExitOk;
  }
  try {
    if (cfg.subcommand == Subcommand::Eval) {
      const LPApproximant a = load_approximant(cfg.input);
      PrecisionScope scope(a.diagnostics.build_precision_bits);
      const int digits = lossless_digits(a.diagnostics.build_precision_bits);
      std::string text = "x,value,target,abs_err\n";
      for (const auto& s : cfg.eval_points) {
        const BigReal x = detail::usage_decimal("--x", s, a.diagnostics.build_precision_bits);
        const BigReal v = eval_lp(a, x);
        const BigReal t = target_value(x, a.params.alpha, a.params.axis);
        text += s + "," + to_decimal(v, digits) + "," + to_decimal(t, digits) + "," + to_decimal(abs(v - t), 6) + "\n";
      }
      detail::deliver(cfg, text, out);
      return kExitOk;
    }

    PrecisionScope scope(cfg.precision_bits);
    switch (cfg.subcommand) {
      case Subcommand::Build: {
        const LPApproximant a = build_lp(detail::params_for(cfg, cfg.n1_list.front()));
        detail::deliver(cfg, format_approximant(a), out);
        break;
      }
      case Subcommand::Converge: {
        RunOptions opt;
        opt.c_shift = from_decimal(cfg.c_shift);
        opt.n_log = cfg.n_log;
        opt.n_lin = cfg.n_lin;
        opt.precision_bits = cfg.precision_bits;
        opt.threads = cfg.threads;
        const BigReal alpha = from_decimal(cfg.alpha);
        const SigmaChoice sc = cfg.sigma ? SigmaChoice::fixed(from_decimal(*cfg.sigma)) : SigmaChoice::best();
        const auto records = run_convergence(cfg.kind, cfg.axis, alpha, sc, cfg.n1_list, cfg.n2, opt);
        detail::deliver(cfg, format_csv(records), out);
        break;
      }
      case Subcommand::QuadErr: {
        RunOptions opt;
        opt.n_log = cfg.n_log;
        opt.n_lin = cfg.n_lin;
        opt.precision_bits = cfg.precision_bits;
        opt.threads = cfg.threads;
        const BigReal alpha = from_decimal(cfg.alpha);
        const BigReal sigma = cfg.sigma ? from_decimal(*cfg.sigma) : best_sigma(cfg.kind, alpha);
        OracleOptions oracle;
        oracle.max_doublings = cfg.oracle_doublings;
        const auto records = run_quaderr(cfg.kind, alpha, sigma, cfg.n1_list, opt, oracle);
        detail::deliver(cfg, format_csv(records), out);
        break;
      }
      case Subcommand::Theory:
        detail::deliver(cfg, detail::theory_table(cfg), out);
        break;
      case Subcommand::Eval:
        break;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
}

}  // namespace lightning
