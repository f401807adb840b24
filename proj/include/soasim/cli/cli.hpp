#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "soasim/scenario/config.hpp"
#include "soasim/scenario/sweep.hpp"

namespace soasim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

enum class Command : std::uint8_t { Run, Sweep };

struct CliConfig {
    Command command{Command::Run};
    /// Single-run settings for `run`; timing base for `sweep`.
    scenario::ScenarioConfig scenario;
    scenario::SweepGrid grid;
    std::string out;
    std::string trace_path;
    unsigned jobs{0};
};

struct ParseOutcome {
    std::optional<CliConfig> config;
    /// Meaningful when `config` is empty (help or usage error).
    int exit_code{kExitOk};
};

/// Parses argv. Help text goes to `out`, usage errors to `err`.
ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// `sweep.csv` contents for the successful results, sorted.
[[nodiscard]] std::string sweep_csv(std::vector<scenario::SweepResult> results);

/// Writes sweep.csv and one `<mode>_S=<s>_C=<c>.csv` per series into `dir`.
/// Returns the paths written. Throws IoError; writes nothing when there are
/// no successful results.
std::vector<std::filesystem::path> emit_csv(const std::vector<scenario::SweepResult>& results,
                                            const std::filesystem::path& dir);

/// Whole program: parse, run, write. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace soasim::cli
