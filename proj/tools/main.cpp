// Command-line front end: parse problem specs, dispatch the solvers, emit
// JSON reports and CSV tables. Exit codes: 0 success, 1 numerical failure or
// failed verification, 2 input/validation error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "tubespec/errors.hpp"
#include "tubespec/problem_spec.hpp"
#include "tubespec/special.hpp"

namespace ts = tubespec;
using nlohmann::json;

namespace {

struct CommonFlags {
  bool deterministic = true;
  std::uint64_t seed = 0x5eed1e5ULL;
  int threads = 0;  // 0 = env default

  int resolved_threads() const {
    if (deterministic) return 1;
    if (threads > 0) return threads;
    if (const char* env = std::getenv("TUBESPEC_THREADS")) {
      const int n = std::atoi(env);
      if (n >= 1) return n;
    }
    return 1;
  }
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_flag("--deterministic,!--no-deterministic", flags.deterministic,
                "single-threaded reference mode (default on)");
  cmd->add_option("--seed", flags.seed, "iteration seed");
  cmd->add_option("--threads", flags.threads,
                  "assembly thread cap (TUBESPEC_THREADS env default; ignored in "
                  "deterministic mode)");
}

std::vector<double> parse_range(const std::string& text) {
  // "lo:hi:count"
  double lo = 0, hi = 0;
  int count = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2)
    throw ts::ValidationError("range syntax: expected lo:hi:count with count >= 2");
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = lo + (hi - lo) * i / (count - 1);
  return grid;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ts::ValidationError("cannot open output file: " + path);
  out << text;
}

ts::CrossSection section_from_flags(const std::string& cs_inline, const std::string& spec_path,
                                    ts::TorusSolveOptions* topts) {
  if (!cs_inline.empty()) return ts::parse_cs_inline(cs_inline);
  if (spec_path.empty())
    throw ts::ValidationError("need either --cs or --spec to define the cross-section");
  const json j = ts::parse_json_file(spec_path);
  if (!j.contains("cross_section"))
    throw ts::ValidationError("spec: \"cross_section\" is required");
  if (topts && j.contains("solver")) {
    const auto& sj = j["solver"];
    if (sj.contains("tol")) topts->solver.tol = sj["tol"].get<double>();
    if (sj.contains("levels")) topts->levels = sj["levels"].get<int>();
    if (sj.contains("seed")) topts->solver.seed = sj["seed"].get<std::uint64_t>();
  }
  return ts::cross_section_from_json(j["cross_section"]);
}

int run(int argc, char** argv) {
  CLI::App app{"spectral thresholds of Dirichlet Laplacians in curved tubes"};
  app.require_subcommand(1);

  // --- torus ---------------------------------------------------------------
  auto* torus = app.add_subcommand("torus", "reference eigenvalue lambda0(kappa)");
  CommonFlags torus_flags;
  add_common(torus, torus_flags);
  double kappa = 0.0;
  std::string cs_inline, spec_path, sweep_range, out_path, formulation = "weighted";
  int cells = 0, levels = 2;
  bool sweep_default = false;
  torus->add_option("--kappa", kappa, "signed curvature");
  torus->add_option("--cs", cs_inline, "inline cross-section (interval:2, square:1, ...)");
  torus->add_option("--spec", spec_path, "problem spec JSON (cross_section and solver used)");
  torus->add_option("--sweep-range", sweep_range, "kappa grid lo:hi:count; writes a CSV");
  torus->add_flag("--sweep", sweep_default, "sweep the default 21-point grid");
  torus->add_option("--out", out_path, "output file (CSV for sweeps, JSON otherwise)");
  torus->add_option("--cells", cells, "coarse-level cells across the section");
  torus->add_option("--levels", levels, "refinement levels");
  torus->add_option("--formulation", formulation, "weighted | potential | both")
      ->check(CLI::IsMember({"weighted", "potential", "both"}));

  torus->callback([&] {
    ts::TorusSolveOptions topts;
    topts.base_cells = cells;
    topts.levels = levels;
    topts.solver.seed = torus_flags.seed;
    const ts::CrossSection cs = section_from_flags(cs_inline, spec_path, &topts);

    if (!sweep_range.empty() || sweep_default) {
      const auto grid =
          sweep_range.empty() ? ts::default_kappa_grid(cs) : parse_range(sweep_range);
      const ts::SweepResult sweep = ts::sweep_lambda0(cs, grid, topts);
      if (out_path.empty()) {
        ts::write_sweep_csv(std::cout, sweep);
      } else {
        std::ofstream out(out_path);
        if (!out) throw ts::ValidationError("cannot open output file: " + out_path);
        ts::write_sweep_csv(out, sweep);
        std::cout << "wrote " << sweep.rows.size() << " rows to " << out_path << "\n";
      }
      return;
    }

    json j;
    if (formulation == "weighted" || formulation == "both")
      j["weighted"] = ts::refined_result_to_json(ts::lambda0_weighted(kappa, cs, topts));
    if (formulation == "potential" || formulation == "both")
      j["potential"] = ts::refined_result_to_json(ts::lambda0_potential(kappa, cs, topts));
    j["kappa"] = kappa;
    j["cross_section"] = ts::cross_section_to_json(cs);
    const auto& main = j.contains("weighted") ? j["weighted"] : j["potential"];
    std::printf("lambda0(%g) = %.12g  (error estimate %.3g)\n", kappa,
                main["eigenvalues"][0].get<double>(),
                main["error_estimates"][0].get<double>());
    if (!out_path.empty()) write_text_file(out_path, j.dump(2) + "\n");
  });

  // --- tube ----------------------------------------------------------------
  auto* tube = app.add_subcommand("tube", "full curved-tube threshold");
  CommonFlags tube_flags;
  add_common(tube, tube_flags);
  std::string tube_spec, tube_out, field_out, embedding_out;
  tube->add_option("--spec", tube_spec, "problem spec JSON")->required();
  tube->add_option("--out", tube_out, "result JSON path");
  tube->add_option("--field-out", field_out, "ground-state CSV path");
  tube->add_option("--embedding-out", embedding_out, "curve embedding CSV path");

  tube->callback([&] {
    ts::TubeProblem p = ts::problem_from_json(ts::parse_json_file(tube_spec));
    p.solver.seed = tube_flags.seed;
    if (!tube_flags.deterministic) p.threads = tube_flags.resolved_threads();

    if (!embedding_out.empty()) {
      std::ofstream out(embedding_out);
      if (!out) throw ts::ValidationError("cannot open output file: " + embedding_out);
      ts::write_embedding_csv(out, ts::frenet_integrate(p.curve, p.curve.length() / 2000.0));
    }

    ts::RefinedEigenResult r;
    if (!field_out.empty()) {
      std::ofstream out(field_out);
      if (!out) throw ts::ValidationError("cannot open output file: " + field_out);
      r = ts::export_field(p, out);
    } else {
      r = ts::tube_threshold(p);
    }
    std::printf("threshold = %.12g  (raw %.12g, error estimate %.3g)\n", r.value(), r.raw(),
                r.error());
    json j = ts::refined_result_to_json(r);
    j["validity"] = ts::validity_report_to_json(ts::check_h2(p.curve, p.section));
    if (!tube_out.empty()) write_text_file(tube_out, j.dump(2) + "\n");
  });

  // --- verify ----------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "lower-bound report for a tube or a suite");
  CommonFlags verify_flags;
  add_common(verify, verify_flags);
  std::string verify_spec, suite_name, verify_out;
  verify->add_option("--spec", verify_spec, "problem spec JSON");
  verify->add_option("--suite", suite_name, "built-in suite name (regression)");
  verify->add_option("--out", verify_out, "report JSON path");

  verify->callback([&] {
    if (verify_spec.empty() == suite_name.empty())
      throw ts::ValidationError("verify: need exactly one of --spec or --suite");
    json out_json;
    bool all_pass = true;
    if (!verify_spec.empty()) {
      ts::TubeProblem p = ts::problem_from_json(ts::parse_json_file(verify_spec));
      p.solver.seed = verify_flags.seed;
      if (!verify_flags.deterministic) p.threads = verify_flags.resolved_threads();
      const ts::BoundReport rep = ts::verify_bound(p);
      out_json = ts::bound_report_to_json(rep);
      all_pass = rep.verdict;
      std::printf("%-16s verdict=%s  lhs_raw=%.9g rhs=%.9g margin=%.3g\n", "spec",
                  rep.verdict ? "pass" : "FAIL", rep.lhs_raw, rep.rhs, rep.margin_lhs_rhs);
    } else {
      if (suite_name != "regression")
        throw ts::ValidationError("verify: unknown suite \"" + suite_name + "\"");
      auto suite = ts::regression_suite();
      out_json = json::array();
      int passed = 0;
      for (auto& rc : suite) {
        rc.problem.solver.seed = verify_flags.seed;
        if (!verify_flags.deterministic)
          rc.problem.threads = verify_flags.resolved_threads();
        ts::BoundReport rep = ts::verify_bound(rc.problem);
        bool ok = rep.verdict && (!rc.expect_sharp || (rep.sharp && *rep.sharp));
        all_pass = all_pass && ok;
        passed += ok ? 1 : 0;
        json jc = ts::bound_report_to_json(rep);
        jc["name"] = rc.name;
        jc["expect_sharp"] = rc.expect_sharp;
        out_json.push_back(jc);
        std::printf("%-16s verdict=%s%s  lhs_raw=%.9g rhs=%.9g margin=%.3g\n",
                    rc.name.c_str(), rep.verdict ? "pass" : "FAIL",
                    rc.expect_sharp ? (rep.sharp && *rep.sharp ? " sharp" : " NOT-SHARP") : "",
                    rep.lhs_raw, rep.rhs, rep.margin_lhs_rhs);
      }
      std::printf("%d/%zu pass\n", passed, suite.size());
    }
    if (!verify_out.empty()) write_text_file(verify_out, out_json.dump(2) + "\n");
    if (!all_pass) throw ts::SolverError("verification failed");
  });

  // --- constants -------------------------------------------------------------
  auto* constants = app.add_subcommand("constants", "uniform constant c and mu0 for a section");
  CommonFlags const_flags;
  add_common(constants, const_flags);
  int cd = 2;
  std::string const_cs;
  constants->add_option("--d", cd, "ambient dimension")->required();
  constants->add_option("--cs", const_cs, "inline cross-section")->required();
  constants->callback([&] {
    const ts::CrossSection cs = ts::parse_cs_inline(const_cs);
    if ((cd == 2) != (cs.dim == 1))
      throw ts::ValidationError("constants: cross-section dimension does not match --d");
    const double c = ts::faber_krahn_constant(cd, cs.a, cs.area);
    const double mu = ts::mu0(cs).value;
    std::printf("a      = %.12g\n|omega| = %.12g\nc      = %.12g\nmu0    = %.12g\nc/mu0  = %.6f\n",
                cs.a, cs.area, c, mu, c / mu);
  });

  // --- compare-ae ------------------------------------------------------------
  auto* cae = app.add_subcommand("compare-ae", "compare lower-bound ratios against mu0");
  CommonFlags cae_flags;
  add_common(cae, cae_flags);
  int ae_d = 2, ae_n = 1;
  std::string ae_cs, kappa_range_text;
  cae->add_option("--d", ae_d, "ambient dimension")->required();
  cae->add_option("--N", ae_n, "number of discrete eigenvalues assumed")->required();
  cae->add_option("--cs", ae_cs, "cross-section (default: unit ball of the right dimension)");
  cae->add_option("--kappa-range", kappa_range_text,
                  "lo:hi adds the curvature-bound row min lambda0 / mu0");
  cae->callback([&] {
    ts::CrossSection cs = ae_cs.empty()
                              ? (ae_d == 2 ? ts::parse_cs_inline("interval:2")
                                           : ts::parse_cs_inline("disk:1"))
                              : ts::parse_cs_inline(ae_cs);
    if ((ae_d == 2) != (cs.dim == 1))
      throw ts::ValidationError("compare-ae: cross-section dimension does not match --d");
    std::optional<std::pair<double, double>> range;
    if (!kappa_range_text.empty()) {
      double lo = 0, hi = 0;
      if (std::sscanf(kappa_range_text.c_str(), "%lf:%lf", &lo, &hi) != 2)
        throw ts::ValidationError("kappa-range syntax: lo:hi");
      range = std::make_pair(lo, hi);
    }
    const ts::BoundComparison cmp = ts::compare_bounds(ae_d, ae_n, cs, range);
    std::printf("bound ratios relative to mu0 (d=%d, N=%d, %s):\n", cmp.d, cmp.N,
                ts::to_string(cs.kind).c_str());
    std::printf("  %-28s %.6f\n", "Ashbaugh-Exner", cmp.ae_ratio);
    std::printf("  %-28s %.6f\n", "uniform constant c/mu0", cmp.fk_ratio);
    if (cmp.rhs_ratio) std::printf("  %-28s %.6f\n", "curvature bound (range)", *cmp.rhs_ratio);
    std::printf("uniform constant is %s\n", cmp.fk_better ? "better" : "NOT better");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ts::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ts::SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
