#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hieram/coupling.hpp"
#include "hieram/diagnostics.hpp"
#include "hieram/disorder.hpp"
#include "hieram/hierarchy.hpp"

namespace hieram::cli {

class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class Format
{
    Csv,
    Json,
};

// Subcommand knobs. Every field has a resolved value after parsing so the
// manifest reproduces the run on its own.
struct RunParams
{
    int rank = 0;                 // spectrum, dos, green, bound; default: depth
    int r_max = 60;               // dos, walk, hypothesis, dimension atoms
    int fit_min_rank = 5;         // dimension
    int fit_max_rank = 20;
    double u_exponent = 2.0;      // hypothesis, bound
    double am_s = 0.5;            // hypothesis
    std::optional<double> threshold; // bound; default (u_r N_r)^2
    Site site = 0;                // green, moments, localize
    std::optional<Site> target;   // green; default: last site of Q_r(site)
    double energy_re = 0.5;       // green
    double energy_im = 0.1;
    std::size_t index = 0;        // green: realization index
    bool restricted = true;       // spectrum: also P_R Delta P_R
    bool dense = true;            // spectrum: dense oracle rows
    double mid_fraction = 0.5;    // localize
    std::size_t dense_cap = kDefaultDenseCap;
};

struct ExperimentConfig
{
    HierarchySpec hierarchy = HierarchySpec::homogeneous(2, 1);
    CouplingSequence coupling = CouplingSequence(Geometric{4.0});
    DistributionSpec disorder = DistributionSpec(UniformDist{});
    EnergyGrid grid;
    std::vector<int> ranks;
    std::size_t realizations = 1;
    std::uint64_t seed = 0;
    Format format = Format::Csv;
    RunParams params;
};

struct Overrides
{
    std::optional<std::uint64_t> seed;
    std::optional<Format> format;
};

// Accepts a config document or a manifest written by a previous run.
ExperimentConfig parse_config(const nlohmann::json& doc, const Overrides& overrides = {});
ExperimentConfig load_config(const std::string& path, const Overrides& overrides = {});

nlohmann::json to_json(const ExperimentConfig& cfg);

Format parse_format(const std::string& s);
std::string to_string(Format f);

} // namespace hieram::cli
