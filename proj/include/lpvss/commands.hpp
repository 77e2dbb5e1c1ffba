#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lpvss {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;        ///< success or inapplicable
inline constexpr int kExitInternal = 1;  ///< unexpected failure
inline constexpr int kExitInput = 2;     ///< parse/validation failure
inline constexpr int kExitCheck = 3;     ///< an acceptance-style verdict failed

/// Flag values common to the subcommands; unset optionals fall back to the
/// config file and then to documented defaults. The resolved values are
/// recorded in the run manifest.
struct CommandArgs {
  std::string model_path;
  std::string config_path;
  std::string data_path;  ///< signals CSV input (filter)
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> horizon;
  std::optional<int> trials;
  std::vector<int> taus;
  std::optional<double> p_min;
};

int cmd_simulate(const CommandArgs& args);
int cmd_filter(const CommandArgs& args);
int cmd_boundcheck(const CommandArgs& args);
int cmd_gaindecay(const CommandArgs& args);
int cmd_example1(const CommandArgs& args);

}  // namespace lpvss
