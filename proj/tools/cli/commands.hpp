#pragma once

// Subcommand implementations for the otfsop CLI. Each returns one of the
// documented exit codes:
//   0  success
//   1  validation failure
//   2  config / usage error
//   3  precondition violation (e.g. moments that do not exist for the
//      configured antenna count or Nakagami shape)

#include <cstdint>
#include <optional>
#include <string>

namespace otfsop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitPrecondition = 3;

struct RunOverrides {
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
};

int cmd_op_curve(const std::string& config_path, const std::string& out_path,
                 const RunOverrides& overrides);

// link_sel is "1", "2" or "both".
int cmd_pdf_fit(const std::string& config_path, const std::string& out_path,
                const std::string& link_sel, const RunOverrides& overrides);

int cmd_validate(std::optional<std::uint64_t> seed, bool inject_failure);

}  // namespace otfsop::cli
