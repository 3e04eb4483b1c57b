#pragma once

// Serializable run records for the torusdet tool. JSON is canonical; CSV
// carries the same determinant fields in a fixed, versioned column order.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "torusdet/zeta_engine.hpp"

namespace torusdet::cli {

inline constexpr const char* kToolVersion = TORUSDET_VERSION;
inline constexpr const char* kDetSchema = "torusdet.det/1";
inline constexpr const char* kZetaSchema = "torusdet.zeta/1";
inline constexpr const char* kScanSchema = "torusdet.scan/1";
inline constexpr const char* kCsvSchemaLine = "# schema: torusdet.det-csv/1";

enum class Status { ok, domain_error, budget_exceeded };
std::string to_string(Status status);
Status parse_status(const std::string& name);

struct InputEcho {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double v0 = 0.0;
  std::string route;
  double tol = 0.0;           // user-facing tolerance
  double internal_tol = 0.0;  // quadrature / series tolerance actually used
  std::size_t max_evaluations = 0;
  std::size_t max_terms = 0;
  std::string tool_version = kToolVersion;

  friend bool operator==(const InputEcho&, const InputEcho&) = default;
};

struct RouteRecord {
  std::string route;
  double psi = 0.0;
  double psi_error = 0.0;
  double det = 0.0;
  bool ok = false;
  std::string error;
};

struct PaperParts {
  double psi1 = 0.0;
  double psi2 = 0.0;
  double psi3 = 0.0;
  double psi4 = 0.0;
  double tail_psi2 = 0.0;
  double tail_psi3 = 0.0;
  double tail_psi4 = 0.0;
  std::size_t terms_used = 0;
  bool underflow = false;
  double det_factored = 0.0;
};

struct Residuals {
  double paper_vs_oracle = 0.0;
  double corrected_vs_oracle = 0.0;
  double paper_vs_closed = 0.0;
};

struct ZetaRecord {
  double s_re = 0.0;
  double s_im = 0.0;
  double value_re = 0.0;
  double value_im = 0.0;
  double abs_error = 0.0;
  std::string route;
};

/// One evaluation: input echo, outputs, status, optional wall time.
struct RunRecord {
  std::string schema;
  InputEcho input;
  Status status = Status::ok;
  std::string error;
  std::vector<RouteRecord> routes;
  std::optional<PaperParts> paper_parts;
  std::optional<Residuals> residuals;
  std::optional<ZetaRecord> zeta;
  std::optional<double> wall_time_s;
};

/// Field-by-field equality where two NaNs compare equal.
bool same_record(const RunRecord& a, const RunRecord& b);

nlohmann::ordered_json to_json(const RunRecord& record);
RunRecord record_from_json(const nlohmann::json& j);

/// Fixed determinant CSV layout (all four routes, NaN when absent).
std::string csv_header();
std::string csv_row(const RunRecord& record);
RunRecord record_from_csv_row(const std::string& line);
std::vector<std::string> split_csv_line(const std::string& line);

/// %.17g, or "nan" / "inf" / "-inf".
std::string format_double(double value);

void write_text(std::ostream& out, const RunRecord& record);

}  // namespace torusdet::cli
