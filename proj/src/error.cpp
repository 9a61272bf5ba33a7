#include "symstable/error.hpp"

namespace symstable {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::precondition: return "PreconditionViolation";
    case Errc::domain: return "DomainError";
    case Errc::invalid_arguments: return "InvalidArguments";
    case Errc::degenerate_sample: return "DegenerateSample";
    case Errc::data_source_too_small: return "DataSourceTooSmall";
    case Errc::precision_gap_too_narrow: return "PrecisionGapTooNarrow";
    case Errc::sample_too_small: return "SampleTooSmall";
    case Errc::level_not_reached: return "LevelNotReached";
    case Errc::sample_too_small_for_any_ci: return "SampleTooSmallForAnyCI";
  }
  return "Unknown";
}

bool is_infeasibility(Errc code) noexcept {
  return code == Errc::sample_too_small || code == Errc::level_not_reached ||
         code == Errc::sample_too_small_for_any_ci;
}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace symstable
