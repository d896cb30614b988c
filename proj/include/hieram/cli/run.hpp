#pragma once

#include <exception>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hieram/cli/config.hpp"

namespace hieram::cli {

inline constexpr std::string_view kVersion = "1.0.0";

inline const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names = {"spectrum", "dos",   "dimension",
                                                   "walk",     "hypothesis", "green",
                                                   "moments",  "localize",   "bound"};
    return names;
}

// Every energy of the grid hit the pole guard.
class PoleOnlyGrid : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct RunOptions
{
    std::filesystem::path out_dir = "hieram-out";
    std::size_t threads = 1;
};

struct RunResult
{
    std::vector<std::filesystem::path> files; // manifest first
};

RunResult run(const std::string& subcommand, const ExperimentConfig& cfg, const RunOptions& opts);

struct ErrorReport
{
    int exit_code = 1;
    std::string kind;
    std::string message;

    // {"error": {"kind": ..., "message": ..., "exit_code": ...}}
    std::string to_json() const;
};

ErrorReport classify_error(std::exception_ptr e);

} // namespace hieram::cli
