#include "anchoreval/error.hpp"

namespace anchoreval {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::usage: return "Usage";
    case Errc::io_error: return "IoError";
    case Errc::malformed_record: return "MalformedRecord";
    case Errc::duplicate_key: return "DuplicateKey";
    case Errc::orientation_conflict: return "OrientationConflict";
    case Errc::unknown_verdict_level: return "UnknownVerdictLevel";
    case Errc::unknown_model: return "UnknownModel";
    case Errc::mixed_judges: return "MixedJudges";
    case Errc::incomplete_grid: return "IncompleteGrid";
    case Errc::too_few_models: return "TooFewModels";
    case Errc::subset_too_small: return "SubsetTooSmall";
    case Errc::roster_mismatch: return "RosterMismatch";
    case Errc::invalid_spec: return "InvalidSpec";
    case Errc::invalid_rate: return "InvalidRate";
    case Errc::no_qualifying_distribution: return "NoQualifyingDistribution";
    case Errc::insufficient_pilot_data: return "InsufficientPilotData";
    case Errc::disconnected_graph: return "DisconnectedGraph";
    case Errc::non_convergence: return "NonConvergence";
  }
  return "Error";
}

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::usage:
    case Errc::invalid_spec:
    case Errc::invalid_rate:
      return 2;
    case Errc::disconnected_graph:
    case Errc::non_convergence:
      return 4;
    default:
      return 3;
  }
}

}  // namespace anchoreval
