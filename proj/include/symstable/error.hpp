#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symstable {

/// Failure categories surfaced by the library. The first group are contract
/// violations (bad inputs); the second group are computational infeasibility
/// for otherwise valid inputs.
enum class Errc {
  precondition,
  domain,
  invalid_arguments,
  degenerate_sample,
  data_source_too_small,
  precision_gap_too_narrow,

  sample_too_small,
  level_not_reached,
  sample_too_small_for_any_ci,
};

std::string_view errc_name(Errc code) noexcept;

/// True for errors that mean "valid request, but no answer exists at this n".
bool is_infeasibility(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

inline void require(bool condition, const char* what) {
  if (!condition) fail(Errc::precondition, what);
}

}  // namespace symstable
