#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "torusdet/options.hpp"

namespace torusdet::cli {

enum class CheckKind { adjudicated, report };

struct CheckRow {
  std::string name;
  CheckKind kind = CheckKind::adjudicated;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string note;
};

struct ValidationOutcome {
  std::vector<CheckRow> rows;
  bool budget_failure = false;
  std::string budget_message;

  bool all_adjudicated_pass() const;
  int exit_code() const;
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;

ValidationOutcome run_validation(const EvalOptions& opts, std::uint64_t seed);

void write_validation_text(std::ostream& out, const ValidationOutcome& outcome,
                           const EvalOptions& opts, std::uint64_t seed);
nlohmann::ordered_json validation_json(const ValidationOutcome& outcome,
                                       const EvalOptions& opts,
                                       std::uint64_t seed);

}  // namespace torusdet::cli
