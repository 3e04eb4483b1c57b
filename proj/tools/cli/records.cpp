#include "records.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace torusdet::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// JSON has no NaN / Inf; those are written as strings.
ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double get_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return std::strtod(j.get<std::string>().c_str(), nullptr);
  throw std::invalid_argument("expected a number");
}

bool same(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool same(const RouteRecord& a, const RouteRecord& b) {
  return a.route == b.route && same(a.psi, b.psi) &&
         same(a.psi_error, b.psi_error) && same(a.det, b.det) && a.ok == b.ok &&
         a.error == b.error;
}

bool same(const PaperParts& a, const PaperParts& b) {
  return same(a.psi1, b.psi1) && same(a.psi2, b.psi2) && same(a.psi3, b.psi3) &&
         same(a.psi4, b.psi4) && same(a.tail_psi2, b.tail_psi2) &&
         same(a.tail_psi3, b.tail_psi3) && same(a.tail_psi4, b.tail_psi4) &&
         a.terms_used == b.terms_used && a.underflow == b.underflow &&
         same(a.det_factored, b.det_factored);
}

bool same(const Residuals& a, const Residuals& b) {
  return same(a.paper_vs_oracle, b.paper_vs_oracle) &&
         same(a.corrected_vs_oracle, b.corrected_vs_oracle) &&
         same(a.paper_vs_closed, b.paper_vs_closed);
}

bool same(const ZetaRecord& a, const ZetaRecord& b) {
  return same(a.s_re, b.s_re) && same(a.s_im, b.s_im) &&
         same(a.value_re, b.value_re) && same(a.value_im, b.value_im) &&
         same(a.abs_error, b.abs_error) && a.route == b.route;
}

bool same(const InputEcho& a, const InputEcho& b) {
  return same(a.tau1, b.tau1) && same(a.tau2, b.tau2) && same(a.v0, b.v0) &&
         a.route == b.route && same(a.tol, b.tol) &&
         same(a.internal_tol, b.internal_tol) &&
         a.max_evaluations == b.max_evaluations && a.max_terms == b.max_terms &&
         a.tool_version == b.tool_version;
}

template <class T>
bool same_opt(const std::optional<T>& a, const std::optional<T>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same(*a, *b);
}

double parse_field(const std::string& s) {
  if (s.empty()) return kNaN;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw std::invalid_argument("bad numeric field: " + s);
  return v;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const char* kRouteOrder[] = {"paper", "closed", "corrected", "oracle"};

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string to_string(Status status) {
  switch (status) {
    case Status::ok: return "ok";
    case Status::domain_error: return "domain_error";
    case Status::budget_exceeded: return "budget_exceeded";
  }
  return "ok";
}

Status parse_status(const std::string& name) {
  if (name == "ok") return Status::ok;
  if (name == "domain_error") return Status::domain_error;
  if (name == "budget_exceeded") return Status::budget_exceeded;
  throw std::invalid_argument("unknown status: " + name);
}

bool same_record(const RunRecord& a, const RunRecord& b) {
  if (a.schema != b.schema || !same(a.input, b.input) || a.status != b.status ||
      a.error != b.error || a.routes.size() != b.routes.size())
    return false;
  for (std::size_t i = 0; i < a.routes.size(); ++i)
    if (!same(a.routes[i], b.routes[i])) return false;
  if (a.wall_time_s.has_value() != b.wall_time_s.has_value()) return false;
  if (a.wall_time_s && !same(*a.wall_time_s, *b.wall_time_s)) return false;
  return same_opt(a.paper_parts, b.paper_parts) &&
         same_opt(a.residuals, b.residuals) && same_opt(a.zeta, b.zeta);
}

ordered_json to_json(const RunRecord& r) {
  ordered_json j;
  j["schema"] = r.schema;
  j["tool_version"] = r.input.tool_version;
  ordered_json in;
  in["tau1"] = num(r.input.tau1);
  in["tau2"] = num(r.input.tau2);
  in["v0"] = num(r.input.v0);
  in["route"] = r.input.route;
  in["tol"] = num(r.input.tol);
  in["internal_tol"] = num(r.input.internal_tol);
  in["max_evaluations"] = r.input.max_evaluations;
  in["max_terms"] = r.input.max_terms;
  j["input"] = in;
  j["status"] = to_string(r.status);
  j["error"] = r.error;
  if (!r.routes.empty()) {
    ordered_json routes = ordered_json::array();
    for (const auto& rr : r.routes) {
      ordered_json o;
      o["route"] = rr.route;
      o["psi"] = num(rr.psi);
      o["psi_error"] = num(rr.psi_error);
      o["det"] = num(rr.det);
      o["ok"] = rr.ok;
      o["error"] = rr.error;
      routes.push_back(o);
    }
    j["routes"] = routes;
  }
  if (r.paper_parts) {
    const auto& p = *r.paper_parts;
    ordered_json o;
    o["psi1"] = num(p.psi1);
    o["psi2"] = num(p.psi2);
    o["psi3"] = num(p.psi3);
    o["psi4"] = num(p.psi4);
    o["tail_psi2"] = num(p.tail_psi2);
    o["tail_psi3"] = num(p.tail_psi3);
    o["tail_psi4"] = num(p.tail_psi4);
    o["terms_used"] = p.terms_used;
    o["underflow"] = p.underflow;
    o["det_factored"] = num(p.det_factored);
    j["paper_parts"] = o;
  }
  if (r.residuals) {
    ordered_json o;
    o["paper_vs_oracle"] = num(r.residuals->paper_vs_oracle);
    o["corrected_vs_oracle"] = num(r.residuals->corrected_vs_oracle);
    o["paper_vs_closed"] = num(r.residuals->paper_vs_closed);
    j["residuals"] = o;
  }
  if (r.zeta) {
    const auto& z = *r.zeta;
    ordered_json o;
    o["s_re"] = num(z.s_re);
    o["s_im"] = num(z.s_im);
    o["value_re"] = num(z.value_re);
    o["value_im"] = num(z.value_im);
    o["abs_error"] = num(z.abs_error);
    o["route"] = z.route;
    j["zeta"] = o;
  }
  if (r.wall_time_s) j["wall_time_s"] = num(*r.wall_time_s);
  return j;
}

RunRecord record_from_json(const json& j) {
  RunRecord r;
  r.schema = j.at("schema").get<std::string>();
  r.input.tool_version = j.at("tool_version").get<std::string>();
  const auto& in = j.at("input");
  r.input.tau1 = get_num(in.at("tau1"));
  r.input.tau2 = get_num(in.at("tau2"));
  r.input.v0 = get_num(in.at("v0"));
  r.input.route = in.at("route").get<std::string>();
  r.input.tol = get_num(in.at("tol"));
  r.input.internal_tol = get_num(in.at("internal_tol"));
  r.input.max_evaluations = in.at("max_evaluations").get<std::size_t>();
  r.input.max_terms = in.at("max_terms").get<std::size_t>();
  r.status = parse_status(j.at("status").get<std::string>());
  r.error = j.at("error").get<std::string>();
  if (j.contains("routes")) {
    for (const auto& o : j["routes"]) {
      RouteRecord rr;
      rr.route = o.at("route").get<std::string>();
      rr.psi = get_num(o.at("psi"));
      rr.psi_error = get_num(o.at("psi_error"));
      rr.det = get_num(o.at("det"));
      rr.ok = o.at("ok").get<bool>();
      rr.error = o.at("error").get<std::string>();
      r.routes.push_back(rr);
    }
  }
  if (j.contains("paper_parts")) {
    const auto& o = j["paper_parts"];
    PaperParts p;
    p.psi1 = get_num(o.at("psi1"));
    p.psi2 = get_num(o.at("psi2"));
    p.psi3 = get_num(o.at("psi3"));
    p.psi4 = get_num(o.at("psi4"));
    p.tail_psi2 = get_num(o.at("tail_psi2"));
    p.tail_psi3 = get_num(o.at("tail_psi3"));
    p.tail_psi4 = get_num(o.at("tail_psi4"));
    p.terms_used = o.at("terms_used").get<std::size_t>();
    p.underflow = o.at("underflow").get<bool>();
    p.det_factored = get_num(o.at("det_factored"));
    r.paper_parts = p;
  }
  if (j.contains("residuals")) {
    const auto& o = j["residuals"];
    r.residuals = Residuals{get_num(o.at("paper_vs_oracle")),
                            get_num(o.at("corrected_vs_oracle")),
                            get_num(o.at("paper_vs_closed"))};
  }
  if (j.contains("zeta")) {
    const auto& o = j["zeta"];
    ZetaRecord z;
    z.s_re = get_num(o.at("s_re"));
    z.s_im = get_num(o.at("s_im"));
    z.value_re = get_num(o.at("value_re"));
    z.value_im = get_num(o.at("value_im"));
    z.abs_error = get_num(o.at("abs_error"));
    z.route = o.at("route").get<std::string>();
    r.zeta = z;
  }
  if (j.contains("wall_time_s")) r.wall_time_s = get_num(j["wall_time_s"]);
  return r;
}

// Column layout, version 1:
//   input (9) | status, error | per route psi, psi_error, det, ok, error (4x5)
//   | paper parts (10) | residuals (3)
std::string csv_header() {
  std::string h =
      "tau1,tau2,v0,route,tol,internal_tol,max_evaluations,max_terms,"
      "tool_version,status,error";
  for (const char* name : kRouteOrder) {
    const std::string p = name;
    h += "," + p + "_psi," + p + "_psi_error," + p + "_det," + p + "_ok," + p +
         "_error";
  }
  h +=
      ",psi1,psi2,psi3,psi4,tail_psi2,tail_psi3,tail_psi4,terms_used,underflow,"
      "det_factored,residual_paper_vs_oracle,residual_corrected_vs_oracle,"
      "residual_paper_vs_closed";
  return h;
}

std::string csv_row(const RunRecord& r) {
  std::ostringstream out;
  const auto& in = r.input;
  out << format_double(in.tau1) << ',' << format_double(in.tau2) << ','
      << format_double(in.v0) << ',' << csv_escape(in.route) << ','
      << format_double(in.tol) << ',' << format_double(in.internal_tol) << ','
      << in.max_evaluations << ',' << in.max_terms << ','
      << csv_escape(in.tool_version) << ',' << to_string(r.status) << ','
      << csv_escape(r.error);
  for (const char* name : kRouteOrder) {
    const RouteRecord* found = nullptr;
    for (const auto& rr : r.routes)
      if (rr.route == name) found = &rr;
    if (found) {
      out << ',' << format_double(found->psi) << ','
          << format_double(found->psi_error) << ',' << format_double(found->det)
          << ',' << (found->ok ? 1 : 0) << ',' << csv_escape(found->error);
    } else {
      out << ",,,,,";
    }
  }
  if (r.paper_parts) {
    const auto& p = *r.paper_parts;
    out << ',' << format_double(p.psi1) << ',' << format_double(p.psi2) << ','
        << format_double(p.psi3) << ',' << format_double(p.psi4) << ','
        << format_double(p.tail_psi2) << ',' << format_double(p.tail_psi3)
        << ',' << format_double(p.tail_psi4) << ',' << p.terms_used << ','
        << (p.underflow ? 1 : 0) << ',' << format_double(p.det_factored);
  } else {
    out << ",,,,,,,,,,";
  }
  if (r.residuals) {
    out << ',' << format_double(r.residuals->paper_vs_oracle) << ','
        << format_double(r.residuals->corrected_vs_oracle) << ','
        << format_double(r.residuals->paper_vs_closed);
  } else {
    out << ",,,";
  }
  return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

RunRecord record_from_csv_row(const std::string& line) {
  const auto f = split_csv_line(line);
  constexpr std::size_t kColumns = 11 + 4 * 5 + 10 + 3;
  if (f.size() != kColumns)
    throw std::invalid_argument("csv row has " + std::to_string(f.size()) +
                                " fields, expected " + std::to_string(kColumns));
  RunRecord r;
  r.schema = kDetSchema;
  std::size_t k = 0;
  r.input.tau1 = parse_field(f[k++]);
  r.input.tau2 = parse_field(f[k++]);
  r.input.v0 = parse_field(f[k++]);
  r.input.route = f[k++];
  r.input.tol = parse_field(f[k++]);
  r.input.internal_tol = parse_field(f[k++]);
  r.input.max_evaluations = std::stoull(f[k++]);
  r.input.max_terms = std::stoull(f[k++]);
  r.input.tool_version = f[k++];
  r.status = parse_status(f[k++]);
  r.error = f[k++];
  for (const char* name : kRouteOrder) {
    if (f[k + 3].empty()) {
      k += 5;
      continue;
    }
    RouteRecord rr;
    rr.route = name;
    rr.psi = parse_field(f[k++]);
    rr.psi_error = parse_field(f[k++]);
    rr.det = parse_field(f[k++]);
    rr.ok = f[k++] == "1";
    rr.error = f[k++];
    r.routes.push_back(rr);
  }
  if (!f[k + 7].empty()) {
    PaperParts p;
    p.psi1 = parse_field(f[k]);
    p.psi2 = parse_field(f[k + 1]);
    p.psi3 = parse_field(f[k + 2]);
    p.psi4 = parse_field(f[k + 3]);
    p.tail_psi2 = parse_field(f[k + 4]);
    p.tail_psi3 = parse_field(f[k + 5]);
    p.tail_psi4 = parse_field(f[k + 6]);
    p.terms_used = std::stoull(f[k + 7]);
    p.underflow = f[k + 8] == "1";
    p.det_factored = parse_field(f[k + 9]);
    r.paper_parts = p;
  }
  k += 10;
  if (!f[k].empty())
    r.residuals = Residuals{parse_field(f[k]), parse_field(f[k + 1]),
                            parse_field(f[k + 2])};
  return r;
}

void write_text(std::ostream& out, const RunRecord& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "torusdet %s  tau = %s + %s i  V0 = %s\n",
                r.input.tool_version.c_str(), format_double(r.input.tau1).c_str(),
                format_double(r.input.tau2).c_str(),
                format_double(r.input.v0).c_str());
  out << buf;
  out << "status: " << to_string(r.status);
  if (!r.error.empty()) out << " (" << r.error << ")";
  out << "\n";
  if (r.zeta) {
    const auto& z = *r.zeta;
    out << "route:     " << z.route << "\n"
        << "s:         " << format_double(z.s_re) << " + " << format_double(z.s_im)
        << " i\n"
        << "value:     " << format_double(z.value_re) << " + "
        << format_double(z.value_im) << " i\n"
        << "abs_error: " << format_double(z.abs_error) << "\n";
  }
  if (!r.routes.empty()) {
    std::snprintf(buf, sizeof buf, "%-10s %-24s %-24s %-24s %s\n", "route",
                  "psi", "psi_error", "det", "ok");
    out << buf;
    for (const auto& rr : r.routes) {
      std::snprintf(buf, sizeof buf, "%-10s %-24s %-24s %-24s %s\n",
                    rr.route.c_str(), format_double(rr.psi).c_str(),
                    format_double(rr.psi_error).c_str(),
                    format_double(rr.det).c_str(), rr.ok ? "yes" : "no");
      out << buf;
      if (!rr.ok) out << "  " << rr.error << "\n";
    }
  }
  if (r.paper_parts) {
    const auto& p = *r.paper_parts;
    out << "paper sectors: psi1 " << format_double(p.psi1) << "  psi2 "
        << format_double(p.psi2) << "  psi3 " << format_double(p.psi3)
        << "  psi4 " << format_double(p.psi4) << "\n"
        << "tail bounds:   " << format_double(p.tail_psi2) << "  "
        << format_double(p.tail_psi3) << "  " << format_double(p.tail_psi4)
        << "  terms " << p.terms_used << (p.underflow ? "  (underflow)" : "")
        << "\n"
        << "det factored:  " << format_double(p.det_factored) << "\n";
  }
  if (r.residuals) {
    out << "paper - oracle:     " << format_double(r.residuals->paper_vs_oracle)
        << "\n"
        << "corrected - oracle: "
        << format_double(r.residuals->corrected_vs_oracle) << "\n"
        << "paper - closed:     " << format_double(r.residuals->paper_vs_closed)
        << "\n";
  }
  if (r.wall_time_s) out << "wall time: " << format_double(*r.wall_time_s) << " s\n";
}

}  // namespace torusdet::cli
