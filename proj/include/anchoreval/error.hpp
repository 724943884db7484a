#pragma once

#include <stdexcept>
#include <string>

namespace anchoreval {

enum class Errc {
  usage,
  io_error,
  malformed_record,
  duplicate_key,
  orientation_conflict,
  unknown_verdict_level,
  unknown_model,
  mixed_judges,
  incomplete_grid,
  too_few_models,
  subset_too_small,
  roster_mismatch,
  invalid_spec,
  invalid_rate,
  no_qualifying_distribution,
  insufficient_pilot_data,
  disconnected_graph,
  non_convergence,
};

const char* errc_name(Errc c);

// Process exit codes: 2 usage, 3 data, 4 numerical.
int exit_code_for(Errc c);

class ToolError : public std::runtime_error {
 public:
  ToolError(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw ToolError(code, std::string(errc_name(code)) + ": " + what);
}

}  // namespace anchoreval
