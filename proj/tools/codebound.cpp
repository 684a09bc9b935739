// Command-line interface: build, solve, export and verify the code-bound
// programs.  Exit codes: 0 success, 2 solver failure, 3 verification
// failure; CLI11 reports usage errors with its own nonzero codes.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "codebound/oracles.hpp"
#include "codebound/sdpa_io.hpp"
#include "codebound/solver.hpp"
#include "codebound/verify.hpp"

using namespace codebound;

namespace {

struct CommonOpts {
  std::string config;
  bool d_odd_auto = false;
};

SolverOptions solver_options_from(const CommonOpts& c) {
  SolverOptions opt;
  if (!c.config.empty()) apply_config(opt, read_config(c.config));
  return opt;
}

void maybe_reduce(const CommonOpts& c, int& n, int& d) {
  if (d % 2 == 1) {
    if (!c.d_odd_auto)
      throw CLI::ValidationError("d is odd; pass --d-odd-auto to apply A(n,d)=A(n+1,d+1)");
    auto [n2, d2] = odd_reduction(n, d);
    std::fprintf(stderr, "odd d: solving the equivalent instance (n=%d, d=%d)\n", n2, d2);
    n = n2;
    d = d2;
  }
}

int run_solve(const SdpProblem& p, SolverOptions opt, bool certify, const std::string& kind) {
  opt.certify = certify;
  SolveResult res = solve(p, opt);
  std::printf("%s(%d,%d) = %.6f\n", kind.c_str(), p.n, p.d, res.primal_value);
  std::printf("  dual bound        : %.6f\n", res.dual_value);
  if (res.certified_upper_bound)
    std::printf("  certified bound   : %.6f\n", *res.certified_upper_bound);
  else if (certify)
    std::printf("  certified bound   : unavailable (dual too infeasible)\n");
  std::printf("  status            : %s after %d iterations (%s, %.1fs)\n", to_string(res.status),
              res.iterations, res.precision.c_str(), res.wall_seconds);
  std::printf("  max infeasibility : %.3e\n", res.max_block_infeasibility);
  return res.status == SolveStatus::NumericalFailure ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semidefinite programming bounds for binary codes from quadruple distances"};
  app.require_subcommand(1);
  CommonOpts common;
  app.add_option("--config", common.config, "solver config file (key=value lines)");
  app.add_flag("--d-odd-auto", common.d_odd_auto, "apply A(n,d)=A(n+1,d+1) when d is odd");

  // a2 <n> <d>
  int a2n = 0, a2d = 0;
  auto* a2 = app.add_subcommand("a2", "pairwise (Delsarte) LP bound");
  a2->add_option("n", a2n, "word length")->required();
  a2->add_option("d", a2d, "minimum distance")->required();

  // a4 build/solve
  auto* a4 = app.add_subcommand("a4", "quadruple-distance SDP bound");
  a4->require_subcommand(1);
  int a4n = 0, a4d = 0;
  std::string cset = "full", outfile, jsonfile;
  double tol = 1e-8;
  std::string precision = "f64";
  bool certify = false;
  auto* build = a4->add_subcommand("build", "assemble the SDP and export it");
  build->add_option("n", a4n, "word length")->required();
  build->add_option("d", a4d, "minimum distance")->required();
  build->add_option("--constraint-set", cset, "full | empty-quad")->capture_default_str();
  build->add_option("--out", outfile, "write SDPA sparse (.dat-s) file");
  build->add_option("--json", jsonfile, "write JSON block dump");
  auto* slv = a4->add_subcommand("solve", "assemble and solve");
  slv->add_option("n", a4n, "word length")->required();
  slv->add_option("d", a4d, "minimum distance")->required();
  slv->add_option("--constraint-set", cset, "full | empty-quad")->capture_default_str();
  slv->add_option("--tol", tol, "relative duality gap target")->capture_default_str();
  slv->add_option("--precision", precision, "f64 | dd")->capture_default_str();
  slv->add_flag("--certify", certify, "post-process the dual into a rigorous bound");

  // verify
  int max_n = 6;
  std::string report_file;
  auto* ver = app.add_subcommand("verify", "run the oracle and invariant suites");
  ver->add_option("--max-n", max_n, "largest n for the exhaustive checks")->capture_default_str();
  ver->add_option("--report", report_file, "write the JSON report here");

  // table
  std::string spec_file, csv_out;
  auto* tab = app.add_subcommand("table", "solve a batch of (n,d) rows into a CSV");
  tab->add_option("--spec", spec_file, "rows: 'n d kind' with kind a2|a4|a4-eq, # comments")
      ->required();
  tab->add_option("--out", csv_out, "CSV output path")->required();

  // solve an exported file
  std::string datfile;
  auto* runf = app.add_subcommand("solve-file", "solve an SDPA sparse file");
  runf->add_option("file", datfile, ".dat-s path")->required();
  runf->add_option("--tol", tol, "relative duality gap target")->capture_default_str();
  runf->add_option("--precision", precision, "f64 | dd")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (a2->parsed()) {
      maybe_reduce(common, a2n, a2d);
      SolverOptions opt = solver_options_from(common);
      return run_solve(build_delsarte_lp(a2n, a2d), opt, false, "A2");
    }
    if (a4->parsed()) {
      maybe_reduce(common, a4n, a4d);
      ConstraintSet cs = cset == "empty-quad" ? ConstraintSet::EmptyPlusQuad : ConstraintSet::Full;
      SdpProblem p = build_a4_problem(a4n, a4d, cs);
      if (build->parsed()) {
        std::printf("A4(%d,%d): %d variables, %zu blocks\n", a4n, a4d, p.num_vars(),
                    p.blocks.size());
        if (!outfile.empty()) {
          export_sdpa_sparse(p, outfile);
          std::printf("wrote %s\n", outfile.c_str());
        }
        if (!jsonfile.empty()) {
          std::ofstream f(jsonfile);
          f << problem_to_json(p).dump(1) << "\n";
          std::printf("wrote %s\n", jsonfile.c_str());
        }
        return 0;
      }
      SolverOptions opt = solver_options_from(common);
      opt.tol = tol;
      opt.precision = precision == "dd" ? Precision::DD : Precision::F64;
      return run_solve(p, opt, certify, "A4");
    }
    if (ver->parsed()) {
      VerifyReport rep = run_verify(max_n);
      for (const auto& c : rep.checks)
        std::printf("%s %s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.empty() ? "" : " -- ", c.detail.c_str());
      if (!report_file.empty()) {
        std::ofstream f(report_file);
        f << rep.to_json().dump(1) << "\n";
      }
      return rep.pass ? 0 : 3;
    }
    if (tab->parsed()) {
      std::ifstream f(spec_file);
      if (!f) throw std::runtime_error("cannot open " + spec_file);
      std::ofstream out(csv_out);
      out << csv_header() << "\n";
      std::string line;
      SolverOptions opt = solver_options_from(common);
      while (std::getline(f, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ss(line);
        int n, d;
        std::string kind;
        if (!(ss >> n >> d >> kind)) continue;
        maybe_reduce(common, n, d);
        ResultRow row;
        row.n = n;
        row.d = d;
        SolverOptions o = opt;
        o.certify = kind != "a2";
        SdpProblem p = kind == "a2" ? build_delsarte_lp(n, d)
                                    : build_a4_problem(n, d,
                                                       kind == "a4-eq" ? ConstraintSet::EmptyPlusQuad
                                                                       : ConstraintSet::Full);
        SolveResult res = solve(p, o);
        row.bound_kind = kind == "a2" ? "A2" : "A4";
        row.value = res.primal_value;
        row.certified_value = res.certified_upper_bound;
        row.status = to_string(res.status);
        row.wall_time_seconds = res.wall_seconds;
        row.solver_precision = res.precision;
        out << to_csv(row) << "\n";
        std::printf("%s\n", to_csv(row).c_str());
      }
      return 0;
    }
    if (runf->parsed()) {
      SdpProblem p = import_sdpa_sparse(datfile);
      SolverOptions opt = solver_options_from(common);
      opt.tol = tol;
      opt.precision = precision == "dd" ? Precision::DD : Precision::F64;
      SolveResult res = solve(p, opt);
      std::printf("objective (max orientation) = %.10f   status %s\n", res.primal_value,
                  to_string(res.status));
      return res.status == SolveStatus::NumericalFailure ? 2 : 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
