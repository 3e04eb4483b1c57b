#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "torusdet/errors.hpp"
#include "torusdet/torus_spectrum.hpp"
#include "torusdet/zeta_engine.hpp"
#include "validate.hpp"

namespace torusdet::cli {

namespace {

RouteRecord to_route_record(const std::string& name, const RouteValue& v) {
  return {name, v.psi, v.psi_error, v.det, v.ok, v.error};
}

PaperParts to_parts(const PsiBreakdown& p, double det_factored) {
  return {p.psi1,
          p.psi2,
          p.psi3,
          p.psi4,
          p.series_tail_bounds[0],
          p.series_tail_bounds[1],
          p.series_tail_bounds[2],
          p.terms_used,
          p.underflow,
          det_factored};
}

void settle_status(RunRecord& r) {
  for (const auto& rr : r.routes) {
    if (rr.ok) continue;
    const bool budget = rr.error.rfind("budget_exceeded", 0) == 0;
    if (budget) {
      r.status = Status::budget_exceeded;
      r.error = rr.route + ": " + rr.error;
      return;
    }
    if (r.status == Status::ok) {
      r.status = Status::domain_error;
      r.error = rr.route + ": " + rr.error;
    }
  }
}

int exit_for(Status s) {
  switch (s) {
    case Status::ok: return kExitOk;
    case Status::domain_error: return kExitDomain;
    case Status::budget_exceeded: return kExitBudget;
  }
  return kExitOk;
}

InputEcho make_echo(double tau1, double tau2, double v0, const std::string& route,
                    double tol, const EvalOptions& opts) {
  InputEcho in;
  in.tau1 = tau1;
  in.tau2 = tau2;
  in.v0 = v0;
  in.route = route;
  in.tol = tol;
  in.internal_tol = opts.tol;
  in.max_evaluations = opts.max_evaluations;
  in.max_terms = opts.max_terms;
  return in;
}

void emit_det(std::ostream& out, const RunRecord& r, const std::string& format) {
  if (format == "json") {
    out << to_json(r).dump(2) << "\n";
  } else if (format == "csv") {
    out << kCsvSchemaLine << "\n" << csv_header() << "\n" << csv_row(r) << "\n";
  } else {
    write_text(out, r);
  }
}

std::string zeta_csv_header() {
  return "tau1,tau2,v0,route,tol,max_evaluations,max_terms,tool_version,status,"
         "error,s_re,s_im,value_re,value_im,abs_error";
}

std::string zeta_csv_row(const RunRecord& r) {
  const auto& in = r.input;
  const auto& z = *r.zeta;
  std::ostringstream out;
  out << format_double(in.tau1) << ',' << format_double(in.tau2) << ','
      << format_double(in.v0) << ',' << z.route << ',' << format_double(in.tol)
      << ',' << in.max_evaluations << ',' << in.max_terms << ','
      << in.tool_version << ',' << to_string(r.status) << ",\"" << r.error
      << "\"," << format_double(z.s_re) << ',' << format_double(z.s_im) << ','
      << format_double(z.value_re) << ',' << format_double(z.value_im) << ','
      << format_double(z.abs_error);
  return out.str();
}

// CLI11 skips an environment value that fails validation; treat it as a
// usage error instead of falling back to the default.
void check_rejected_env(const CLI::App& app) {
  for (const auto* sub : app.get_subcommands()) {
    for (const auto* opt : sub->get_options()) {
      const auto name = opt->get_envname();
      if (name.empty() || opt->count() > 0) continue;
      const char* value = std::getenv(name.c_str());
      if (value && *value)
        throw CLI::ValidationError(name, std::string("invalid value '") + value + "'");
    }
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

struct SpecFlags {
  double tau1 = 0.0;
  double tau2 = 1.0;
  double v0 = 1.0;
  std::size_t max_evaluations = Defaults::max_evaluations;
  std::size_t max_terms = Defaults::max_terms;

  void attach(CLI::App* cmd, bool required) {
    cmd->add_option("--tau1", tau1, "real part of the modulus")
        ->envname("TORUSDET_TAU1")
        ->capture_default_str();
    auto* t2 = cmd->add_option("--tau2", tau2, "imaginary part of the modulus")
                   ->envname("TORUSDET_TAU2");
    auto* v = cmd->add_option("--v0", v0, "constant offset V0")->envname("TORUSDET_V0");
    if (required) {
      t2->required();
      v->required();
    } else {
      t2->capture_default_str();
      v->capture_default_str();
    }
    attach_budget(cmd);
  }

  void attach_budget(CLI::App* cmd) {
    cmd->add_option("--max-evaluations", max_evaluations,
                    "integrand samples allowed per quadrature")
        ->envname("TORUSDET_MAX_EVALUATIONS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-terms", max_terms, "terms allowed per series")
        ->envname("TORUSDET_MAX_TERMS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  EvalOptions options(double internal_tol) const {
    return {internal_tol, max_evaluations, max_terms};
  }
};

}  // namespace

RunRecord det_record(double tau1, double tau2, double v0, const std::string& route,
                     double tol, const EvalOptions& opts) {
  const auto spec = make_operator(tau1, tau2, v0);
  RunRecord r;
  r.schema = kDetSchema;
  r.input = make_echo(tau1, tau2, v0, route, tol, opts);
  if (route == "all") {
    const auto rep = compare_routes(spec, opts);
    r.routes = {to_route_record("paper", rep.paper),
                to_route_record("closed", rep.closed),
                to_route_record("corrected", rep.corrected),
                to_route_record("oracle", rep.oracle)};
    if (rep.paper.ok) r.paper_parts = to_parts(rep.paper_parts, rep.det_paper_factored);
    r.residuals = Residuals{rep.residual_paper_vs_oracle,
                            rep.residual_corrected_vs_oracle,
                            rep.residual_paper_vs_closed};
  } else {
    const DetRoute which = parse_det_route(route);
    PsiBreakdown parts;
    const auto value = evaluate_route(spec, which, opts, &parts);
    r.routes = {to_route_record(route, value)};
    if (which == DetRoute::paper && value.ok)
      r.paper_parts = to_parts(parts, det_paper_factored(parts, spec));
  }
  settle_status(r);
  return r;
}

std::vector<double> ScanAxis::values() const {
  std::vector<double> out;
  if (steps == 1) return {start};
  for (int i = 0; i < steps; ++i)
    out.push_back(start + (stop - start) * static_cast<double>(i) / (steps - 1));
  std::sort(out.begin(), out.end());
  return out;
}

void ScanGrid::validate() const {
  for (const auto* axis : {&tau1, &tau2, &v0})
    if (axis->steps < 1) throw std::invalid_argument("grid steps must be >= 1");
  for (double t : tau2.values())
    if (!(t > 0.0)) throw std::invalid_argument("tau2 range must be > 0");
  for (double v : v0.values())
    if (!(v > 0.0)) throw std::invalid_argument("v0 range must be > 0");
}

std::vector<RunRecord> run_scan(const ScanGrid& grid, double tol,
                                const EvalOptions& opts, unsigned threads) {
  grid.validate();
  struct Point {
    double tau1, tau2, v0;
  };
  std::vector<Point> points;
  for (double a : grid.tau1.values())
    for (double b : grid.tau2.values())
      for (double c : grid.v0.values()) points.push_back({a, b, c});

  std::vector<RunRecord> records(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const auto& p = points[i];
      try {
        records[i] = det_record(p.tau1, p.tau2, p.v0, grid.route, tol, opts);
      } catch (const DomainError& e) {
        RunRecord r;
        r.schema = kDetSchema;
        r.input = make_echo(p.tau1, p.tau2, p.v0, grid.route, tol, opts);
        r.status = Status::domain_error;
        r.error = e.what();
        records[i] = r;
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return records;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zeta-regularized determinants of massive Laplacians on flat tori",
               "torusdet"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // det
  auto* det = app.add_subcommand("det", "determinant at one operator");
  SpecFlags det_spec;
  std::string det_route = "all";
  double det_tol = Defaults::det_tol;
  std::string det_format = "json";
  bool det_timing = false;
  det_spec.attach(det, true);
  det->add_option("--route", det_route, "paper, corrected, oracle or all")
      ->envname("TORUSDET_DET_ROUTE")
      ->check(CLI::IsMember({"paper", "corrected", "oracle", "all"}))
      ->capture_default_str();
  det->add_option("--tol", det_tol, "relative tolerance on the determinant")
      ->envname("TORUSDET_DET_TOL")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  det->add_option("--format", det_format, "json, csv or text")
      ->envname("TORUSDET_DET_FORMAT")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  det->add_flag("--timing", det_timing, "record wall time")
      ->envname("TORUSDET_DET_TIMING");

  // zeta
  auto* zeta = app.add_subcommand("zeta", "spectral zeta function at complex s");
  SpecFlags zeta_spec;
  double s_re = 0.0;
  double s_im = 0.0;
  std::string zeta_route = "subtraction";
  double zeta_tol = Defaults::internal_tol;
  std::string zeta_format = "json";
  bool zeta_timing = false;
  zeta_spec.attach(zeta, false);
  zeta->add_option("--s-re", s_re, "real part of s")
      ->envname("TORUSDET_ZETA_S_RE")
      ->required();
  zeta->add_option("--s-im", s_im, "imaginary part of s")
      ->envname("TORUSDET_ZETA_S_IM")
      ->capture_default_str();
  zeta->add_option("--route", zeta_route, "direct, mellin or subtraction")
      ->envname("TORUSDET_ZETA_ROUTE")
      ->check(CLI::IsMember({"direct", "mellin", "subtraction"}))
      ->capture_default_str();
  zeta->add_option("--tol", zeta_tol, "absolute tolerance")
      ->envname("TORUSDET_ZETA_TOL")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  zeta->add_option("--format", zeta_format, "json, csv or text")
      ->envname("TORUSDET_ZETA_FORMAT")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  zeta->add_flag("--timing", zeta_timing, "record wall time")
      ->envname("TORUSDET_ZETA_TIMING");

  // validate
  auto* validate = app.add_subcommand("validate", "run the identity and property suite");
  SpecFlags validate_budget;
  double validate_tol = Defaults::internal_tol;
  std::uint64_t seed = kDefaultSeed;
  std::string validate_format = "text";
  validate_budget.attach_budget(validate);
  validate->add_option("--tol", validate_tol, "internal quadrature and series tolerance")
      ->envname("TORUSDET_VALIDATE_TOL")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  validate->add_option("--seed", seed, "seed for randomized operators")
      ->envname("TORUSDET_VALIDATE_SEED")
      ->capture_default_str();
  validate->add_option("--format", validate_format, "text or json")
      ->envname("TORUSDET_VALIDATE_FORMAT")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  // scan
  auto* scan = app.add_subcommand("scan", "determinants over a parameter grid");
  SpecFlags scan_budget;
  std::vector<double> r1{0.0, 0.0, 1.0}, r2{1.0, 1.0, 1.0}, r3{1.0, 1.0, 1.0};
  ScanGrid grid;
  double scan_tol = Defaults::det_tol;
  std::string scan_out;
  unsigned threads = 0;
  scan_budget.attach_budget(scan);
  scan->add_option("--tau1-range", r1, "start,stop,steps")
      ->envname("TORUSDET_SCAN_TAU1_RANGE")
      ->expected(3)
      ->delimiter(',');
  scan->add_option("--tau2-range", r2, "start,stop,steps")
      ->envname("TORUSDET_SCAN_TAU2_RANGE")
      ->expected(3)
      ->delimiter(',');
  scan->add_option("--v0-range", r3, "start,stop,steps")
      ->envname("TORUSDET_SCAN_V0_RANGE")
      ->expected(3)
      ->delimiter(',');
  scan->add_option("--route", grid.route, "paper, corrected, oracle or all")
      ->envname("TORUSDET_SCAN_ROUTE")
      ->check(CLI::IsMember({"paper", "corrected", "oracle", "all"}))
      ->capture_default_str();
  scan->add_option("--tol", scan_tol, "relative tolerance on the determinant")
      ->envname("TORUSDET_SCAN_TOL")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scan->add_option("--format", grid.format, "csv or json")
      ->envname("TORUSDET_SCAN_FORMAT")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  scan->add_option("--out", scan_out, "output file")
      ->envname("TORUSDET_SCAN_OUT")
      ->required();
  scan->add_option("--threads", threads, "worker threads, 0 for all cores")
      ->envname("TORUSDET_SCAN_THREADS")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    check_rejected_env(app);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "torusdet: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (det->parsed()) {
      const auto start = std::chrono::steady_clock::now();
      auto r = det_record(det_spec.tau1, det_spec.tau2, det_spec.v0, det_route, det_tol,
                          det_spec.options(det_tol * Defaults::internal_ratio));
      if (det_timing) r.wall_time_s = seconds_since(start);
      emit_det(out, r, det_format);
      if (r.status != Status::ok) err << "torusdet: " << r.error << "\n";
      return exit_for(r.status);
    }

    if (zeta->parsed()) {
      const auto start = std::chrono::steady_clock::now();
      const auto spec = make_operator(zeta_spec.tau1, zeta_spec.tau2, zeta_spec.v0);
      const auto opts = zeta_spec.options(zeta_tol);
      const std::complex<double> s(s_re, s_im);
      RunRecord r;
      r.schema = kZetaSchema;
      r.input = make_echo(zeta_spec.tau1, zeta_spec.tau2, zeta_spec.v0, zeta_route,
                          zeta_tol, opts);
      ZetaRecord z{s_re, s_im, 0.0, 0.0, 0.0, zeta_route};
      try {
        ZetaResult res;
        switch (parse_zeta_route(zeta_route)) {
          case ZetaRoute::direct: res = zeta_direct(spec, s, opts); break;
          case ZetaRoute::mellin: res = zeta_mellin(spec, s, opts); break;
          case ZetaRoute::subtraction: res = zeta_subtraction(spec, s, opts); break;
        }
        z.value_re = res.value.real();
        z.value_im = res.value.imag();
        z.abs_error = res.abs_error;
        z.route = std::string(to_string(res.route));
      } catch (const BudgetExceeded& e) {
        r.status = Status::budget_exceeded;
        r.error = e.what();
        z.value_re = e.best_estimate();
        z.value_im = std::numeric_limits<double>::quiet_NaN();
        z.abs_error = e.error_estimate();
      }
      r.zeta = z;
      if (zeta_timing) r.wall_time_s = seconds_since(start);
      if (zeta_format == "json") {
        out << to_json(r).dump(2) << "\n";
      } else if (zeta_format == "csv") {
        out << "# schema: torusdet.zeta-csv/1\n"
            << zeta_csv_header() << "\n"
            << zeta_csv_row(r) << "\n";
      } else {
        write_text(out, r);
      }
      if (r.status != Status::ok) err << "torusdet: " << r.error << "\n";
      return exit_for(r.status);
    }

    if (validate->parsed()) {
      const auto opts = validate_budget.options(validate_tol);
      const auto outcome = run_validation(opts, seed);
      if (validate_format == "json")
        out << validation_json(outcome, opts, seed).dump(2) << "\n";
      else
        write_validation_text(out, outcome, opts, seed);
      return outcome.exit_code();
    }

    if (scan->parsed()) {
      auto axis = [](const std::vector<double>& v, const char* name) {
        if (v.size() != 3 || v[2] != static_cast<int>(v[2]))
          throw std::invalid_argument(std::string(name) +
                                      " expects start,stop,steps with integer steps");
        return ScanAxis{v[0], v[1], static_cast<int>(v[2])};
      };
      try {
        grid.tau1 = axis(r1, "--tau1-range");
        grid.tau2 = axis(r2, "--tau2-range");
        grid.v0 = axis(r3, "--v0-range");
        grid.validate();
      } catch (const std::invalid_argument& e) {
        err << "torusdet: " << e.what() << "\n";
        return kExitUsage;
      }
      std::ofstream file(scan_out, std::ios::binary | std::ios::trunc);
      if (!file) {
        err << "torusdet: cannot write " << scan_out << "\n";
        return kExitUsage;
      }
      const auto records = run_scan(grid, scan_tol,
                                    scan_budget.options(scan_tol * Defaults::internal_ratio),
                                    threads);
      if (grid.format == "json") {
        nlohmann::ordered_json j;
        j["schema"] = kScanSchema;
        j["tool_version"] = kToolVersion;
        j["records"] = nlohmann::ordered_json::array();
        for (const auto& r : records) j["records"].push_back(to_json(r));
        file << j.dump(2) << "\n";
      } else {
        file << kCsvSchemaLine << "\n" << csv_header() << "\n";
        for (const auto& r : records) file << csv_row(r) << "\n";
      }
      file.close();
      if (!file) {
        err << "torusdet: write to " << scan_out << " failed\n";
        return kExitUsage;
      }
      std::size_t failed = 0;
      for (const auto& r : records) failed += r.status != Status::ok;
      out << "scan: " << records.size() << " records, " << failed << " failed, written to "
          << scan_out << "\n";
      return kExitOk;
    }
  } catch (const DomainError& e) {
    err << "torusdet: domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const BudgetExceeded& e) {
    err << "torusdet: budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  }
  return kExitUsage;
}

}  // namespace torusdet::cli
