#pragma once

/**
 * @file cli.hpp
 * @brief The opchain command-line front end: eval, diff, table, verify, repl.
 *
 * run() takes its arguments and streams explicitly so tests can drive it
 * without spawning a process. Exit codes: 0 ok, 1 verify failure, 2 parse or
 * usage error, 3 math error, 4 no convergence.
 */

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opchain/opchain.hpp"
#include "opchain/verify.hpp"

namespace opchain::cli {

enum exit_code : int { ok = 0, verify_failed = 1, usage = 2, math = 3, not_converged = 4 };

struct Config {
  Mode mode = Mode::complex;
  BranchPolicy branch = BranchPolicy::principal;
  bool json = false;
  double tolerance = 1e-6;
  std::uint64_t seed = 42;
  LevelBounds bounds{};
};

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Formatting

inline std::string shortest(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string format_value(const JoinComplex& z) {
  if (z.is_bottom()) return "-inf";
  if (z.im() == 0.0) return shortest(z.re());
  std::string im = shortest(std::abs(z.im())) + "i";
  if (z.re() == 0.0) return (z.im() < 0 ? "-" : "") + im;
  return shortest(z.re()) + (z.im() < 0 ? " - " : " + ") + im;
}

inline json value_json(const JoinComplex& z) {
  if (z.is_bottom()) return "bottom";
  return json{{"re", z.re() == 0.0 ? 0.0 : z.re()}, {"im", z.im() == 0.0 ? 0.0 : z.im()}};
}

inline json diagnostics_json(const LimitDiagnostics& d) {
  json h = json::array(), it = json::array();
  for (const auto& x : d.h_schedule) h.push_back(value_json(x));
  for (const auto& x : d.iterates) it.push_back(value_json(x));
  json delta = std::isfinite(d.final_delta) ? json(d.final_delta) : json(nullptr);
  return json{{"h_schedule", h}, {"iterates", it}, {"converged", d.converged}, {"final_delta", delta}};
}

inline void print_diagnostics(std::ostream& out, const LimitDiagnostics& d) {
  out << "diagnostics: " << (d.converged ? "converged" : "not converged") << " after "
      << d.iterates.size() << " iterates, final delta " << shortest(d.final_delta) << "\n";
  for (std::size_t k = 0; k < d.iterates.size(); ++k)
    out << "  h = " << format_value(d.h_schedule[k]) << "  ->  " << format_value(d.iterates[k]) << "\n";
}

// ---------------------------------------------------------------------------
// Argument parsing helpers

/// A complex literal: any constant expression, e.g. 2, -1.5, 3i, i, 2+i, -inf.
inline JoinComplex parse_literal(const std::string& text) {
  Expr e = parse(text);
  auto vars = free_variables(e);
  if (!vars.empty()) throw parse_error(0, "a numeric literal", *vars.begin());
  return eval(e, {}, EvalOptions{});
}

inline LevelBounds parse_bounds(const std::string& text) {
  int lo = 0, hi = 0;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> lo >> comma >> hi) || comma != ',' || !(in >> std::ws).eof())
    throw CLI::ValidationError("OPCHAIN_LEVEL_BOUNDS", "expected \"lo,hi\", got \"" + text + "\"");
  LevelBounds b{lo, hi};
  if (!b.valid())
    throw CLI::ValidationError("OPCHAIN_LEVEL_BOUNDS", "bounds must satisfy -8 <= lo <= hi <= 8");
  return b;
}

inline const char* kind_of(const std::exception& e) {
  if (dynamic_cast<const parse_error*>(&e)) return "ParseError";
  if (dynamic_cast<const no_convergence*>(&e)) return "NoConvergence";
  if (dynamic_cast<const domain_error*>(&e)) return "DomainError";
  if (dynamic_cast<const undefined_form*>(&e)) return "UndefinedForm";
  if (dynamic_cast<const overflow_error*>(&e)) return "Overflow";
  if (dynamic_cast<const no_identity*>(&e)) return "NoIdentity";
  if (dynamic_cast<const no_inverse*>(&e)) return "NoInverse";
  if (dynamic_cast<const level_error*>(&e)) return "LevelError";
  if (dynamic_cast<const unbound_variable*>(&e)) return "UnboundVariable";
  if (dynamic_cast<const unsupported*>(&e)) return "Unsupported";
  return "Error";
}

inline std::string describe(const std::exception& e) { return std::string(kind_of(e)) + ": " + e.what(); }

// Parse-error message with a caret under the offending column.
inline std::string describe(const parse_error& e, const std::string& source) {
  std::string msg = describe(static_cast<const std::exception&>(e));
  if (source.empty() || e.position() > source.size()) return msg;
  return msg + "\n  " + source + "\n  " + std::string(e.position(), ' ') + "^";
}

struct Session {
  Config cfg;
  std::ostream& out;
  std::ostream& err;

  EvalOptions eval_options() const { return EvalOptions{cfg.mode, cfg.branch, cfg.bounds}; }

  Env bind(const std::vector<std::string>& bindings) const {
    Env env;
    for (const auto& b : bindings) {
      auto eq = b.find('=');
      if (eq == std::string::npos || eq == 0)
        throw CLI::ValidationError("--bind", "expected name=value, got \"" + b + "\"");
      std::string name = b.substr(0, eq);
      JoinComplex v = parse_literal(b.substr(eq + 1));
      if (cfg.mode == Mode::real && !v.is_bottom() && v.im() != 0.0)
        throw domain_error("binding of '" + name + "' is not real");
      env[name] = v;
    }
    return env;
  }

  int fail(const std::exception& e, int code, const std::string& source = {}) {
    std::string msg;
    if (auto* pe = dynamic_cast<const parse_error*>(&e)) msg = describe(*pe, source);
    else msg = describe(e);
    if (cfg.json) {
      json j{{"error", describe(e)}, {"mode", to_string(cfg.mode)}};
      if (auto* nc = dynamic_cast<const no_convergence*>(&e)) j["diagnostics"] = diagnostics_json(nc->diagnostics());
      out << j.dump() << "\n";
    } else if (auto* nc = dynamic_cast<const no_convergence*>(&e)) {
      print_diagnostics(err, nc->diagnostics());
    }
    err << "error: " << msg << "\n";
    return code;
  }

  // Runs body and maps library exceptions to exit codes.
  template <class F>
  int guarded(const std::string& source, F&& body) {
    try {
      return body();
    } catch (const parse_error& e) {
      return fail(e, usage, source);
    } catch (const no_convergence& e) {
      return fail(e, not_converged);
    } catch (const math_error& e) {
      return fail(e, math);
    } catch (const CLI::Error& e) {
      err << "error: " << e.what() << "\n";
      return usage;
    }
  }

  void emit(const JoinComplex& v, json extra = json::object()) {
    if (cfg.json) {
      json j{{"value", value_json(v)}, {"mode", to_string(cfg.mode)}};
      for (auto& [k, x] : extra.items()) j[k] = x;
      out << j.dump() << "\n";
    } else {
      out << format_value(v) << "\n";
    }
  }

  // ---- eval --------------------------------------------------------------

  int cmd_eval(const std::string& text, const std::vector<std::string>& bindings) {
    return guarded(text, [&] {
      Expr e = parse(text);
      emit(eval(e, bind(bindings), eval_options()));
      return int(ok);
    });
  }

  // ---- diff --------------------------------------------------------------

  JoinComplex realize(const JoinComplex& v) const {
    if (cfg.mode == Mode::real && !v.is_bottom()) {
      if (std::abs(v.im()) > 1e-12 * std::max(1.0, std::abs(v.re())))
        throw domain_error("the derivative is not real at this point");
      return JoinComplex(v.re());
    }
    return v;
  }

  int cmd_diff(int n, const std::string& text, const std::string& at, const std::string& method,
               const std::vector<std::string>& bindings) {
    return guarded(text, [&] {
      Expr f = parse(text);
      OpLevel level(n, cfg.bounds);
      Context ctx;
      ctx.var = default_variable(f);
      ctx.env = bind(bindings);
      ctx.policy = cfg.branch;
      ctx.bounds = cfg.bounds;
      JoinComplex z = parse_literal(at);
      if (cfg.mode == Mode::real && !z.is_bottom() && z.im() != 0.0) throw domain_error("--at is not real");
      LimitOptions lopts;
      lopts.tolerance = cfg.tolerance;

      std::string m = method;
      if (m == "auto") m = n <= 1 ? "closed" : "limit";
      if (m == "closed") {
        emit(realize(n_derivative_closed(level, f, z, ctx)), json{{"method", "closed-form"}});
        return int(ok);
      }
      if (m == "limit") {
        DnResult r = n_derivative_limit(level, f, z, lopts, ctx);
        if (cfg.json) {
          emit(realize(r.value), json{{"method", "limit"}, {"diagnostics", diagnostics_json(*r.diagnostics)}});
        } else {
          out << format_value(realize(r.value)) << "\n";
        }
        return int(ok);
      }
      // both
      JoinComplex closed = n_derivative_closed(level, f, z, ctx);
      DnResult lim = n_derivative_limit(level, f, z, lopts, ctx);
      BranchPolicy cmp = n <= -1 ? BranchPolicy::modulo_2pi : BranchPolicy::principal;
      double dist = distance(closed, lim.value, cmp);
      if (cfg.json) {
        emit(realize(closed), json{{"method", "both"},
                                   {"closed", value_json(closed)},
                                   {"limit", value_json(lim.value)},
                                   {"distance", std::isfinite(dist) ? json(dist) : json(nullptr)},
                                   {"diagnostics", diagnostics_json(*lim.diagnostics)}});
      } else {
        out << "closed    " << format_value(realize(closed)) << "\n"
            << "limit     " << format_value(realize(lim.value)) << "\n"
            << "distance  " << shortest(dist) << (n <= -1 ? " (mod 2 pi i)" : "") << "\n";
        print_diagnostics(out, *lim.diagnostics);
      }
      return int(ok);
    });
  }

  // ---- table -------------------------------------------------------------

  static std::string repeat(const std::string& f, int k, const std::string& arg) {
    std::string s = arg;
    for (int i = 0; i < k; ++i) s = f + "(" + s + ")";
    return s;
  }

  static std::string iterated_ln(int k) { return k == 0 ? "" : std::string(static_cast<std::size_t>(k - 1), 'l') + "ln "; }

  static json table_row(int n) {
    std::string notation, definition, ident, inv;
    switch (n) {
      case 1: notation = "x * y"; break;
      case 0: notation = "x + y"; break;
      case -1: notation = "x \\/ y"; break;
      default: break;
    }
    if (n >= 1) {
      int k = n - 1;
      definition = repeat("exp", k, iterated_ln(k) + "x * " + iterated_ln(k) + "y");
    } else {
      int k = -n;
      definition = repeat("ln", k, repeat("exp", k, "x") + " + " + repeat("exp", k, "y"));
    }
    if (n <= -2) {
      ident = "none (see docs)";
    } else if (n == -1) {
      ident = "-inf";
    } else {
      std::string closed = n == 0 ? "0" : n == 1 ? "1" : n == 2 ? "e" : n == 3 ? "e^e" : repeat("exp", n, "0");
      try {
        double v = identity(OpLevel(n, {hard_level_min, hard_level_max})).value();
        ident = n <= 1 ? closed : closed + " = " + shortest(v);
      } catch (const overflow_error&) {
        ident = closed + " (overflows binary64)";
      }
    }
    if (n == 0) inv = "-x";
    else if (n >= 1) inv = repeat("exp", n - 1, "1/" + iterated_ln(n - 1) + "x");
    else if (n == -1) inv = "complex only: z+i*pi";
    else inv = repeat("ln", -n - 1, repeat("exp", -n - 1, "z") + " + i*pi") + " (complex)";
    json row{{"level", n}, {"notation", notation}, {"definition", definition}, {"identity", ident}, {"inverse", inv}};
    return row;
  }

  int cmd_table(int lo, int hi) {
    if (lo > hi || !cfg.bounds.contains(lo) || !cfg.bounds.contains(hi)) {
      err << "error: LevelError: table range [" << lo << ", " << hi << "] outside level bounds [" << cfg.bounds.lo
          << ", " << cfg.bounds.hi << "]\n";
      return usage;
    }
    json rows = json::array();
    for (int n = hi; n >= lo; --n) rows.push_back(table_row(n));
    if (cfg.json) {
      out << json{{"rows", rows}}.dump() << "\n";
      return ok;
    }
    std::size_t wn = 10, wd = 11, wi = 10;
    for (const auto& r : rows) {
      wn = std::max(wn, r["notation"].get<std::string>().size() + 2);
      wd = std::max(wd, r["definition"].get<std::string>().size() + 2);
      wi = std::max(wi, r["identity"].get<std::string>().size() + 2);
    }
    auto w = [](std::size_t n) { return std::setw(static_cast<int>(n)); };
    out << std::left << std::setw(4) << "n" << w(wn) << "notation" << w(wd) << "x (+)_n y" << w(wi) << "identity"
        << "inverse\n";
    for (const auto& r : rows) {
      out << std::setw(4) << r["level"].get<int>() << w(wn) << r["notation"].get<std::string>() << w(wd)
          << r["definition"].get<std::string>() << w(wi) << r["identity"].get<std::string>()
          << r["inverse"].get<std::string>() << "\n";
    }
    return ok;
  }

  // ---- verify ------------------------------------------------------------

  int cmd_verify(const std::string& suite, long samples) {
    if (samples < 1) {
      err << "error: --samples must be positive\n";
      return usage;
    }
    verify::Report report;
    try {
      report = verify::run(suite, verify::Config{samples, cfg.seed});
    } catch (const domain_error& e) {
      err << "error: " << e.what() << "\n";
      return usage;
    }
    long failing = 0;
    json props = json::array();
    for (const auto& p : report.properties) {
      if (!p.ok()) ++failing;
      if (cfg.json) {
        props.push_back(json{{"suite", p.suite},
                             {"property", p.name},
                             {"passed", p.passed},
                             {"failed", p.failed},
                             {"worst", std::isfinite(p.worst) ? json(p.worst) : json(nullptr)},
                             {"tolerance", p.tolerance},
                             {"ok", p.ok()}});
        continue;
      }
      std::ostringstream worst;
      worst << std::setprecision(3) << p.worst;
      out << (p.ok() ? "PASS  " : "FAIL  ") << std::left << std::setw(9) << p.suite << std::setw(58) << p.name
          << std::right << std::setw(6) << p.passed << "/" << std::left << std::setw(6) << p.passed + p.failed
          << " worst " << worst.str() << " (tol " << p.tolerance << ")\n";
    }
    long total = static_cast<long>(report.properties.size());
    if (cfg.json) {
      out << json{{"suite", suite}, {"seed", cfg.seed}, {"samples", samples}, {"properties", props},
                  {"failing", failing}, {"ok", failing == 0}}.dump()
          << "\n";
    } else {
      out << (total - failing) << "/" << total << " properties hold (suite " << suite << ", seed " << cfg.seed
          << ", " << samples << " samples)\n";
    }
    return failing == 0 ? ok : verify_failed;
  }

  // ---- repl --------------------------------------------------------------

  static std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  int cmd_repl(std::istream& in) {
    Env env;
    std::string line;
    out << "> " << std::flush;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line == ":quit" || line == ":q") break;
      if (!line.empty()) repl_line(line, env);
      out << "> " << std::flush;
    }
    out << "\n";
    return ok;
  }

  void repl_line(const std::string& line, Env& env) {
    auto report = [&](const std::exception& e, const std::string& src) {
      if (auto* pe = dynamic_cast<const parse_error*>(&e)) out << "error: " << describe(*pe, src) << "\n";
      else out << "error: " << describe(e) << "\n";
    };
    if (line[0] != ':') {
      try {
        out << format_value(eval(parse(line), env, eval_options())) << "\n";
      } catch (const opchain::error& e) {
        report(e, line);
      }
      return;
    }
    std::istringstream words(line);
    std::string cmd, arg;
    words >> cmd >> arg;
    if (cmd == ":let") {
      auto eq = line.find('=');
      std::string name = trim(line.substr(4, eq == std::string::npos ? std::string::npos : eq - 4));
      if (eq == std::string::npos || name.empty()) {
        out << "error: usage :let name = expr\n";
        return;
      }
      std::string rhs = trim(line.substr(eq + 1));
      try {
        Expr target = parse(name);
        if (!target.as<Var>()) throw parse_error(0, "a variable name", name);
        env[name] = eval(parse(rhs), env, eval_options());
        out << name << " = " << format_value(env[name]) << "\n";
      } catch (const opchain::error& e) {
        report(e, rhs);
      }
    } else if (cmd == ":mode") {
      if (arg == "real") cfg.mode = Mode::real;
      else if (arg == "complex") cfg.mode = Mode::complex;
      else if (!arg.empty()) {
        out << "error: :mode takes real or complex\n";
        return;
      }
      out << "mode " << to_string(cfg.mode) << "\n";
    } else if (cmd == ":branch") {
      if (arg == "principal") cfg.branch = BranchPolicy::principal;
      else if (arg == "modulo" || arg == "modulo_2pi") cfg.branch = BranchPolicy::modulo_2pi;
      else if (!arg.empty()) {
        out << "error: :branch takes principal or modulo\n";
        return;
      }
      out << "branch " << to_string(cfg.branch) << "\n";
    } else if (cmd == ":help") {
      out << "expressions evaluate; :let name = expr, :mode real|complex, :branch principal|modulo, :quit\n";
    } else {
      out << "error: unknown directive " << cmd << " (try :help)\n";
    }
  }
};

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Config cfg;
  if (const char* b = std::getenv("OPCHAIN_LEVEL_BOUNDS")) {
    try {
      cfg.bounds = parse_bounds(b);
    } catch (const CLI::Error& e) {
      err << "error: " << e.what() << "\n";
      return usage;
    }
  }

  CLI::App app{"Arithmetic chain calculator: operations (+)_n, joins and n-derivatives", "opchain"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string mode = "complex", branch = "principal", format = "text";
  app.add_option("--mode", mode, "Number system")->check(CLI::IsMember({"real", "complex"}));
  app.add_option("--branch", branch, "Branch policy for logarithms")
      ->check(CLI::IsMember({"principal", "modulo", "modulo_2pi"}));
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--tolerance", cfg.tolerance, "Convergence tolerance of the limit method")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for verify sampling");

  std::string expr_text, at, method = "auto", suite = "all";
  std::vector<std::string> bindings;
  int level = -1;
  long samples = 500;
  std::string levels;

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate an expression");
  eval_cmd->add_option("expr", expr_text, "Expression")->required();
  eval_cmd->add_option("--bind", bindings, "name=value binding (repeatable)");

  auto* diff_cmd = app.add_subcommand("diff", "n-derivative of an expression at a point");
  diff_cmd->add_option("expr", expr_text, "Expression in one variable")->required();
  diff_cmd->add_option("-n", level, "Derivative level (default -1, the join derivative)");
  diff_cmd->add_option("--at", at, "Point, a complex literal such as 1+2i")->required();
  diff_cmd->add_option("--method", method, "closed, limit, both, or auto (closed for n <= 1)")
      ->check(CLI::IsMember({"auto", "closed", "limit", "both"}));
  diff_cmd->add_option("--bind", bindings, "name=value binding for constants (repeatable)");

  auto* table_cmd = app.add_subcommand("table", "Operations, identities and inverses per level");
  table_cmd->add_option("--levels", levels, "Range lo,hi (default: the level bounds)");

  auto* verify_cmd = app.add_subcommand("verify", "Run property suites");
  verify_cmd->add_option("--suite", suite, "Suite name")
      ->check(CLI::IsMember({"laws", "table", "binomial", "joinalg", "calculus", "partials", "maxlimit", "all"}));
  verify_cmd->add_option("--samples", samples, "Samples per property");

  auto* repl_cmd = app.add_subcommand("repl", "Interactive session");

  std::vector<std::string> argv_store{"opchain"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  cfg.mode = mode == "real" ? Mode::real : Mode::complex;
  cfg.branch = branch == "principal" ? BranchPolicy::principal : BranchPolicy::modulo_2pi;
  cfg.json = format == "json";
  Session s{cfg, out, err};

  if (*eval_cmd) return s.cmd_eval(expr_text, bindings);
  if (*diff_cmd) return s.cmd_diff(level, expr_text, at, method, bindings);
  if (*table_cmd) {
    int lo = cfg.bounds.lo, hi = cfg.bounds.hi;
    if (!levels.empty()) {
      try {
        LevelBounds b = parse_bounds(levels);
        lo = b.lo;
        hi = b.hi;
      } catch (const CLI::Error& e) {
        err << "error: --levels " << e.what() << "\n";
        return usage;
      }
    }
    return s.cmd_table(lo, hi);
  }
  if (*verify_cmd) return s.cmd_verify(suite, samples);
  if (*repl_cmd) return s.cmd_repl(in);
  return usage;
}

}  // namespace opchain::cli
