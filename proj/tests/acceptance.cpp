// Acceptance criteria, one PASS/FAIL line each.
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "random_specs.hpp"
#include "oracles.hpp"
#include "records.hpp"
#include "torusdet/heat_kernel.hpp"
#include "torusdet/special_functions.hpp"
#include "torusdet/torus_spectrum.hpp"
#include "torusdet/zeta_engine.hpp"

using namespace torusdet;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Verdict within(const char* what, double residual, double tol) {
  return {std::isfinite(residual) && residual <= tol,
          fmt((std::string(what) + " = %.3e (tol %.1e)").c_str(), residual, tol)};
}

Verdict c01_zeta1() {
  double worst = 0.0;
  for (double v0 : {0.5, 1.0, std::numbers::e, 10.0}) {
    const double lv = std::log(v0);
    const double ulps = std::fabs(zeta1_prime0(make_operator(0.0, 1.0, v0)) + lv) /
                        (DBL_EPSILON * std::max(1.0, std::fabs(lv)));
    worst = std::max(worst, ulps);
  }
  return within("max |zeta1 + ln V0| in eps units", worst, 1.0);
}

Verdict c02_gram() {
  double worst = 0.0;
  for (const auto& spec : testing::random_specs(100, 1001)) {
    const double t2sq = spec.tau2() * spec.tau2();
    worst = std::max(worst, std::fabs(gram_matrix(spec).determinant() - t2sq) / t2sq);
  }
  return within("max relative |det - tau2^2|", worst, 1e-14);
}

Verdict c03_quadratic_form() {
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<int> idx(-25, 25);
  double worst = 0.0;
  for (const auto& spec : testing::random_specs(1000, 1002)) {
    const ModeIndex mode{idx(rng), idx(rng)};
    const double expanded = testing::quadratic_form_expanded(spec, mode);
    const double scale = std::max(1.0, testing::modulus_form_complex(spec, mode) +
                                           2.0 * std::fabs(static_cast<double>(mode.m) *
                                                           static_cast<double>(mode.n) *
                                                           spec.tau1()));
    worst = std::max(worst, std::fabs(quadratic_form(spec, mode) - expanded) / scale);
  }
  return within("max relative form mismatch", worst, 1e-14);
}

Verdict c04_poisson() {
  double worst = 0.0;
  for (double t : {0.2, 1.0, 5.0})
    for (double v : {0.0, 0.25, 0.5, 0.9}) {
      const auto N = static_cast<std::size_t>(
          std::ceil(std::sqrt(40.0 / (std::numbers::pi * std::min(t, 1.0 / t))))) + 2;
      const auto p = poisson_lhs_rhs(t, v, N);
      worst = std::max(worst, std::fabs(p.lhs - p.rhs));
    }
  return within("max |lhs - rhs|", worst, 1e-11);
}

Verdict c05_bessel_identity() {
  double worst = 0.0;
  for (double nu : {-0.5, 0.5, 1.0})
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        worst = std::max(worst, check_k_integral_identity(nu, 0.25 * std::pow(16.0, i / 4.0),
                                                          0.25 * std::pow(16.0, j / 4.0)));
  return within("max identity residual", worst, 1e-8);
}

Verdict c06_route_agreement() {
  EvalOptions opts;
  opts.tol = 1e-9;
  double mellin = 0.0, subtraction = 0.0;
  for (const auto& spec : testing::random_specs(10, 1006))
    for (double s : {1.5, 2.0, 3.0}) {
      const auto d = zeta_direct(spec, s, opts).value;
      mellin = std::max(mellin, std::abs(d - zeta_mellin(spec, s, opts).value));
      subtraction = std::max(subtraction, std::abs(d - zeta_subtraction(spec, s, opts).value));
    }
  return {mellin <= 1e-7 && subtraction <= 1e-7,
          fmt("max |direct - mellin| = %.3e, max |direct - subtraction| = %.3e (tol 1e-7)",
              mellin, subtraction)};
}

Verdict c07_oracle_fd() {
  double worst = 0.0;
  for (auto [a, b, c] : {std::tuple{0.0, 1.0, 1.0}, {0.3, 1.0, 1.0}, {0.5, 1.2, 0.8},
                         {-0.25, 0.8, 2.0}, {0.1, 2.0, 0.5}}) {
    const auto spec = make_operator(a, b, c);
    worst = std::max(worst, std::fabs(zeta_prime0_oracle(spec).value -
                                      zeta_prime0_finite_difference(spec).value));
  }
  return within("max |oracle - finite difference|", worst, 1e-6);
}

Verdict c08_paper_closed() {
  double worst = 0.0;
  for (const auto& spec : testing::random_specs(10, 1008))
    worst = std::max(worst, std::fabs(psi_paper(spec).total - psi_closed_form(spec).total));
  return within("max |psi_paper - psi_closed_form|", worst, 1e-10);
}

Verdict c09_corrected() {
  double worst = 0.0;
  for (auto [a, b, c] : {std::tuple{0.0, 1.0, 1.0}, {0.3, 0.8, 0.5}, {0.5, 2.0, 4.0},
                         {0.0, 2.0, 0.5}, {0.3, 1.0, 4.0}}) {
    const auto spec = make_operator(a, b, c);
    worst = std::max(worst,
                     std::fabs(psi_corrected(spec).value - zeta_prime0_oracle(spec).value));
  }
  return within("max |psi_corrected - oracle|", worst, 1e-5);
}

Verdict c10_symmetry() {
  // Reflection: excess of |f(tau1) - f(-tau1)| over the combined error bars.
  double excess = 0.0;
  auto account = [&](double a, double b, double bars) {
    excess = std::max(excess, std::fabs(a - b) - bars);
  };
  for (double c : {0.2, 0.35, 0.5}) {
    const auto p = make_operator(c, 1.1, 1.3);
    const auto m = make_operator(-c, 1.1, 1.3);
    const auto pp = psi_paper(p), pm = psi_paper(m);
    account(pp.total, pm.total, pp.abs_error() + pm.abs_error());
    const auto cp = psi_closed_form(p), cm = psi_closed_form(m);
    account(cp.total, cm.total, cp.abs_error() + cm.abs_error());
    const auto kp = psi_corrected(p), km = psi_corrected(m);
    account(kp.value, km.value, kp.abs_error + km.abs_error);
    const auto op = zeta_prime0_oracle(p), om = zeta_prime0_oracle(m);
    account(op.value, om.value, op.abs_error + om.abs_error);
    for (auto route : {zeta_direct, zeta_mellin, zeta_subtraction}) {
      const auto zp = route(p, 2.0, {}), zm = route(m, 2.0, {});
      account(zp.value.real(), zm.value.real(), zp.abs_error + zm.abs_error);
    }
  }
  double shift = 0.0;
  for (double c : {0.3, -0.2, 0.45})
    shift = std::max(shift, std::fabs(zeta_prime0_oracle(make_operator(c, 1.0, 1.0)).value -
                                      zeta_prime0_oracle(make_operator(c + 1.0, 1.0, 1.0)).value));
  return {excess <= 0.0 && shift <= 1e-6,
          fmt("reflection excess over error bars = %.3e, oracle T-shift = %.3e (tol 1e-6)",
              std::max(excess, 0.0), shift)};
}

Verdict c11_discrepancy() {
  const auto rep = compare_routes(make_operator(0.5, 1.0, 1.0));
  const auto record = cli::det_record(0.5, 1.0, 1.0, "all", 1e-8, {});
  const auto back = cli::record_from_json(nlohmann::json::parse(cli::to_json(record).dump()));
  const bool serialized = cli::same_record(back, record) && record.residuals.has_value();
  const bool bars = rep.paper.ok && rep.oracle.ok && rep.paper.psi_error <= 1e-5 &&
                    rep.oracle.psi_error <= 1e-5;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "residual_paper_vs_oracle = %.12f (+- %.1e paper, +- %.1e oracle), serialized %s",
                rep.residual_paper_vs_oracle, rep.paper.psi_error, rep.oracle.psi_error,
                serialized ? "yes" : "no");
  return {bars && serialized, buf};
}

Verdict c12_large_v0() {
  const auto spec = make_operator(0.0, 1.0, 100.0);
  const auto psi = psi_paper(spec);
  const double det = std::exp(-psi.total);
  const double rel = std::fabs(det / 100.0 - 1.0);
  const double tails = *std::max_element(psi.series_tail_bounds.begin(),
                                         psi.series_tail_bounds.end());
  return {rel <= 1e-8 && tails < 1e-9,
          fmt("|det/V0 - 1| = %.3e (tol 1e-8), max tail bound = %.3e (tol 1e-9)", rel, tails)};
}

Verdict c13_cli() {
  auto invoke = [](const std::vector<std::string>& args, int& code) {
    std::ostringstream out, err;
    code = cli::run(args, out, err);
    return out.str();
  };
  int c1 = -1, c2 = -1;
  const auto first = invoke({"validate"}, c1);
  const auto second = invoke({"validate"}, c2);
  const bool identical = first == second;

  bool round_trip = true;
  for (const char* route : {"all", "paper", "corrected", "oracle"}) {
    const auto rec = cli::det_record(0.2, 1.4, 0.9, route, 1e-8, {});
    round_trip = round_trip &&
                 cli::same_record(cli::record_from_json(nlohmann::json::parse(
                                      cli::to_json(rec).dump())),
                                  rec) &&
                 cli::same_record(cli::record_from_csv_row(cli::csv_row(rec)), rec);
  }
  const auto failed = cli::det_record(0.0, 1.0, 1.0, "all", 1e-8, {1e-10, 10, 1'000'000});
  round_trip = round_trip &&
               cli::same_record(cli::record_from_json(nlohmann::json::parse(
                                    cli::to_json(failed).dump())),
                                failed) &&
               cli::same_record(cli::record_from_csv_row(cli::csv_row(failed)), failed);

  std::string detail = "validate exit " + std::to_string(c1) + "/" + std::to_string(c2) +
                       ", byte-identical " + (identical ? "yes" : "no") +
                       ", round-trip " + (round_trip ? "yes" : "no");
  return {c1 == 0 && c2 == 0 && identical && round_trip, detail};
}

struct Criterion {
  const char* title;
  std::function<Verdict()> check;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"zeta1 closed form", c01_zeta1},
      {"Gram determinant", c02_gram},
      {"quadratic form consistency", c03_quadratic_form},
      {"1-D Poisson identity", c04_poisson},
      {"Bessel integral identity", c05_bessel_identity},
      {"zeta route agreement", c06_route_agreement},
      {"oracle vs finite differences", c07_oracle_fd},
      {"paper series vs closed form", c08_paper_closed},
      {"corrected route vs oracle", c09_corrected},
      {"symmetry suite", c10_symmetry},
      {"discrepancy report", c11_discrepancy},
      {"large V0 limit", c12_large_v0},
      {"CLI determinism and schema", c13_cli},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::strtoul(argv[++i], nullptr, 10);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 2;
    }
  }
  if (only > criteria().size()) {
    std::fprintf(stderr, "no criterion %zu\n", only);
    return 2;
  }
  int failures = 0;
  for (std::size_t k = 1; k <= criteria().size(); ++k) {
    if (only && k != only) continue;
    const auto& c = criteria()[k - 1];
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s AC-%02zu %s: %s\n", v.pass ? "PASS" : "FAIL", k, c.title,
                v.detail.c_str());
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
