#pragma once

// Batch front end: argument parsing into a RunConfig and the command
// dispatcher. Exit codes: 0 all checks pass, 1 a verification failed,
// 2 usage or input error.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mubkit/composite.hpp"
#include "mubkit/io.hpp"
#include "mubkit/mub.hpp"
#include "mubkit/su2.hpp"
#include "mubkit/weyl.hpp"

namespace mubkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

enum class Command { gen, set, verify, sumrule, su2, ffz, composite };
enum class Format { json, csv };

struct RunConfig {
  Command command = Command::gen;
  int dim = 0;
  int two_j = 0;
  int p = 0;
  int e = 0;
  std::optional<int> a;
  std::vector<int> a_params;
  double tol = kDefaultTolerance;
  bool exact = false;
  bool force = false;
  Format format = Format::json;
  std::string output;
  std::string set_path;
  std::string matrix = "v";
  int m1 = 0;
  int m2 = 0;
  int max_m = 0;  // 0 means 2d
  std::optional<int> sign;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default tolerance, overridden by MUBKIT_TOL when set.
inline double default_tolerance() {
  const char* env = std::getenv("MUBKIT_TOL");
  if (!env || !*env) return kDefaultTolerance;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0.0)) throw UsageError("MUBKIT_TOL must be a positive number");
  return v;
}

/// `args` excludes the program name.
inline RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  cfg.tol = default_tolerance();
  std::string format = "json";

  CLI::App app{"mubkit: mutually unbiased bases from the V_a generator", "mubkit"};
  app.require_subcommand(1);
  app.fallthrough();

  auto* gen = app.add_subcommand("gen", "emit a generator matrix (V_a, Z or T_m) as JSON");
  auto* set = app.add_subcommand("set", "build the complete set for prime d and verify it");
  auto* verify = app.add_subcommand("verify", "verify a MubSet JSON file");
  auto* sumrule = app.add_subcommand("sumrule", "tabulate the Gauss sum rule over all indices");
  auto* su2 = app.add_subcommand("su2", "check the SU(2) polar decomposition");
  auto* ffz = app.add_subcommand("ffz", "check the FFZ commutator identity");
  auto* composite = app.add_subcommand("composite", "build a complete set in dimension p^e");

  for (auto* sub : {gen, set, sumrule, ffz}) sub->add_option("--dim", cfg.dim, "dimension d")->required();
  for (auto* sub : {gen, ffz, su2}) sub->add_option("--a", cfg.a, "generator parameter a");
  for (auto* sub : {gen, set, verify, sumrule, su2, ffz, composite}) {
    sub->add_option("--tol", cfg.tol, "pass/fail tolerance");
    sub->add_option("--output,-o", cfg.output, "output path (default stdout)");
  }
  for (auto* sub : {set, composite}) {
    sub->add_flag("--exact", cfg.exact, "write exact amplitudes");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  }
  sumrule->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  set->add_flag("--force", cfg.force, "build even when d is not prime");
  verify->add_option("--set", cfg.set_path, "MubSet JSON file")->required();
  su2->add_option("--two-j", cfg.two_j, "twice the angular momentum")->required();
  gen->add_option("--matrix", cfg.matrix, "v, z or t")->check(CLI::IsMember({"v", "z", "t"}));
  gen->add_option("--m1", cfg.m1, "T_m first index");
  gen->add_option("--m2", cfg.m2, "T_m second index");
  for (auto* sub : {gen, ffz}) sub->add_option("--sign", cfg.sign, "T_m prefactor sign (+1/-1)");
  ffz->add_option("--max-m", cfg.max_m, "sweep index components in 0..max-m-1 (default 2d)");
  composite->add_option("--p", cfg.p, "prime base")->required();
  composite->add_option("--e", cfg.e, "exponent")->required();
  composite->add_option("--a", cfg.a_params, "one a parameter per tensor slot");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (*gen) cfg.command = Command::gen;
  if (*set) cfg.command = Command::set;
  if (*verify) cfg.command = Command::verify;
  if (*sumrule) cfg.command = Command::sumrule;
  if (*su2) cfg.command = Command::su2;
  if (*ffz) cfg.command = Command::ffz;
  if (*composite) cfg.command = Command::composite;
  cfg.format = format == "csv" ? Format::csv : Format::json;

  if (!(cfg.tol > 0.0)) throw UsageError("--tol must be positive");
  if (cfg.sign && *cfg.sign != 1 && *cfg.sign != -1) throw UsageError("--sign must be +1 or -1");
  const bool needs_dim = cfg.command == Command::gen || cfg.command == Command::set ||
                         cfg.command == Command::sumrule || cfg.command == Command::ffz;
  if (needs_dim && cfg.dim < 2) throw UsageError("--dim must be >= 2");
  if (cfg.a && (cfg.command == Command::gen || cfg.command == Command::ffz) && (*cfg.a < 0 || *cfg.a >= cfg.dim))
    throw UsageError("--a must lie in 0..d-1");
  if (cfg.command == Command::su2) {
    if (cfg.two_j < 1) throw UsageError("--two-j must be >= 1");
    if (cfg.a && (*cfg.a < 0 || *cfg.a > cfg.two_j)) throw UsageError("--a must lie in 0..two_j");
  }
  if (cfg.max_m < 0) throw UsageError("--max-m must be positive");
  if (cfg.m1 < 0 || cfg.m2 < 0) throw UsageError("--m1/--m2 must be >= 0");
  return cfg;
}

namespace detail {

inline io::Json su2_report_json(int two_j, int a, double tol) {
  const auto rep = check_su2(two_j, a, tol);
  const auto action = check_ladder_action(two_j, a, tol);
  io::Json j;
  j["two_j"] = two_j;
  j["a"] = a;
  io::Json res;
  res["jz_jp"] = rep.residual("jz_jp");
  res["jz_jm"] = rep.residual("jz_jm");
  res["jp_jm"] = rep.residual("jp_jm");
  res["casimir"] = rep.residual("casimir");
  res["action"] = std::max({rep.residual("jz_action"), action.max_residual});
  j["residuals"] = std::move(res);
  j["jz_exact"] = rep.exact_passed.value_or(false);
  j["pass"] = rep.passed && action.passed;
  return j;
}

inline io::Json ffz_report_json(int d, int a, int max_m, int sign, bool from_oracle, double tol, bool& ok) {
  const auto sweep = ffz_sweep(d, a, max_m, sign, tol);
  const auto opposite = ffz_commutator_residual(d, a, {1, 0}, {0, 1}, -sign, tol);
  io::Json j;
  j["dim"] = d;
  j["a"] = a;
  j["max_m"] = max_m;
  j["sign_convention"] = sign;
  j["selected_by_oracle"] = from_oracle;
  j["residual"] = sweep.max_residual;
  j["failures"] = static_cast<long>(sweep.residual("failures"));
  j["opposite_convention_residual_m10_n01"] = opposite.max_residual;
  j["opposite_convention_fails"] = !opposite.passed;
  j["pass"] = sweep.passed;
  if (!sweep.notes.empty()) j["notes"] = sweep.notes;
  ok = ok && sweep.passed;
  return j;
}

inline MubSet strip_exact(MubSet set) {
  for (auto& b : set.bases)
    for (auto& v : b.vectors) v.exact.reset();
  return set;
}

}  // namespace detail

/// Executes one command. Artifacts go to cfg.output (or `out`),
/// diagnostics to `err`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string artifact;
  int status = kExitOk;
  try {
    switch (cfg.command) {
      case Command::gen: {
        const int a = cfg.a.value_or(0);
        OperatorMatrix m;
        if (cfg.matrix == "v")
          m = build_v(cfg.dim, a);
        else if (cfg.matrix == "z")
          m = build_z(cfg.dim);
        else
          m = build_t(cfg.dim, a, {cfg.m1, cfg.m2}, cfg.sign.value_or(select_ffz_convention()));
        artifact = io::dump(io::matrix_to_json(m));
        break;
      }
      case Command::set: {
        auto set = build_complete_set(cfg.dim, cfg.force);
        if (!cfg.exact) set = detail::strip_exact(std::move(set));
        const auto check = verify_set(set, cfg.tol);
        artifact = cfg.format == Format::csv ? io::mubset_to_csv(set) : io::dump(io::mubset_to_json(set, cfg.exact));
        if (!check.summary.passed) {
          err << "verification failed for dimension " << cfg.dim << "\n";
          err << io::dump(io::report_to_json(check.summary));
          status = kExitVerificationFailed;
        }
        break;
      }
      case Command::verify: {
        const auto set = io::mubset_from_json(io::read_json_file(cfg.set_path));
        const auto check = verify_set(set, cfg.tol);
        artifact = io::dump(io::set_verification_to_json(set, check));
        if (!check.summary.passed) status = kExitVerificationFailed;
        break;
      }
      case Command::sumrule: {
        const int d = cfg.dim;
        bool all = true;
        io::Json rows = io::Json::array();
        std::ostringstream csv;
        csv << "a,b,n_alpha,n_beta,magnitude,abs_squared,expected,holds\n";
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b)
            for (int na = 0; na < d; ++na)
              for (int nb = 0; nb < d; ++nb) {
                const auto g = gauss_sum_magnitude(d, a, b, na, nb);
                const auto expected = sum_rule_expected(d, a, b, na, nb);
                const bool holds = sum_rule_holds(g, expected, cfg.tol);
                all = all && holds;
                const auto exact = g.abs_squared.as_integer();
                if (cfg.format == Format::csv) {
                  csv << a << "," << b << "," << na << "," << nb << "," << io::format_double(g.magnitude) << ","
                      << (exact ? std::to_string(*exact) : std::string()) << "," << expected << ","
                      << (holds ? 1 : 0) << "\n";
                } else {
                  io::Json r;
                  r["a"] = a;
                  r["b"] = b;
                  r["n_alpha"] = na;
                  r["n_beta"] = nb;
                  r["magnitude"] = g.magnitude;
                  r["abs_squared"] = exact ? io::Json(*exact) : io::Json(nullptr);
                  r["expected_abs_squared"] = expected;
                  r["holds"] = holds;
                  rows.push_back(std::move(r));
                }
              }
        if (cfg.format == Format::csv) {
          artifact = csv.str();
        } else {
          io::Json j;
          j["dim"] = d;
          j["exact"] = is_prime(d);
          j["pass"] = all;
          j["rows"] = std::move(rows);
          artifact = io::dump(j);
        }
        if (!all) status = kExitVerificationFailed;
        break;
      }
      case Command::su2: {
        io::Json j;
        bool ok = true;
        if (cfg.a) {
          j = detail::su2_report_json(cfg.two_j, *cfg.a, cfg.tol);
          ok = j["pass"].get<bool>();
        } else {
          j = io::Json::array();
          for (int a = 0; a <= cfg.two_j; ++a) {
            auto r = detail::su2_report_json(cfg.two_j, a, cfg.tol);
            ok = ok && r["pass"].get<bool>();
            j.push_back(std::move(r));
          }
        }
        artifact = io::dump(j);
        if (!ok) status = kExitVerificationFailed;
        break;
      }
      case Command::ffz: {
        const int d = cfg.dim;
        const int max_m = cfg.max_m > 0 ? cfg.max_m : 2 * d;
        const bool from_oracle = !cfg.sign;
        const int sign = cfg.sign.value_or(select_ffz_convention());
        bool ok = true;
        io::Json j;
        if (cfg.a) {
          j = detail::ffz_report_json(d, *cfg.a, max_m, sign, from_oracle, cfg.tol, ok);
        } else {
          j = io::Json::array();
          for (int a = 0; a < d; ++a) j.push_back(detail::ffz_report_json(d, a, max_m, sign, from_oracle, cfg.tol, ok));
        }
        artifact = io::dump(j);
        if (!ok) status = kExitVerificationFailed;
        break;
      }
      case Command::composite: {
        auto set = build_composite_set(cfg.p, cfg.e, cfg.a_params, std::max(cfg.tol, 1e-9));
        artifact = cfg.format == Format::csv ? io::mubset_to_csv(set) : io::dump(io::mubset_to_json(set, cfg.exact));
        break;
      }
    }
  } catch (const NotPrimeError& e) {
    err << "mubkit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConstructionFailedError& e) {
    err << "mubkit: " << e.what() << "\n";
    return kExitVerificationFailed;
  } catch (const Error& e) {
    err << "mubkit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "mubkit: bad input: " << e.what() << "\n";
    return kExitUsage;
  }

  if (cfg.output.empty()) {
    out << artifact;
  } else {
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f || !(f << artifact)) {
      err << "mubkit: cannot write '" << cfg.output << "'\n";
      return kExitUsage;
    }
  }
  return status;
}

inline int main(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(parse_args(args), out, err);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "mubkit: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace mubkit::cli
