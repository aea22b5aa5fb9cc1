#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace roughlab::cli {

inline const std::vector<std::string> kCommands = {
    "pvar", "area", "integrate", "lacunary", "probe", "constants"};

struct Options {
  std::string command;
  std::filesystem::path spec_file;
  std::filesystem::path out_dir = ".";
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
};

/// Runs one experiment spec and returns the files written. Library errors
/// propagate; field errors are ValidationError naming the JSON field.
std::vector<std::filesystem::path> run(const Options& opt);

/// run() with errors mapped to exit codes: 2 validation, 3 size limit,
/// 1 anything else. Diagnostics go to `err`.
int run_main(const Options& opt, std::ostream& err);

}  // namespace roughlab::cli
