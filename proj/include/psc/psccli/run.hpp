#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "psc/psccli/problem.hpp"

namespace psc {

inline constexpr const char* kReportVersion = "1.0";

struct RunOptions {
  std::optional<int> degree;  // overrides the problem file
  bool timings = false;       // wall-clock times make reports nondeterministic
};

/// Commands: check-psc, cohomology, condition2, reduce, compare. Throws
/// ProblemError when the problem lacks what the command needs.
nlohmann::ordered_json run(const std::string& command, const ProblemSpec& spec, const RunOptions& options = {});

bool is_command(const std::string& command);

std::string render_text(const nlohmann::ordered_json& report);

}  // namespace psc
