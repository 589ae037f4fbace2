#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace liouville
{
inline constexpr char const* artifact_version = "0.1.0";

//! Plain table written as CSV; cells are preformatted.
struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(Table const& t);

struct ExperimentReport
{
    std::string name;
    Config parameters;  //!< fully resolved, without the worker count
    std::map<std::string, double> metrics;
    bool pass = false;
    double runtime_seconds = 0;
    std::uint64_t seed = 0;
    std::string version = artifact_version;
    std::string rng;
    Table samples;
};

/*!
 * Keys are sorted. With include_runtime = false the output depends only on
 * the resolved parameters.
 */
nlohmann::json to_json(ExperimentReport const& r, bool include_runtime = true);

//! lemma21, lemma22a, lemma22b, dynkin, blowup, criteria-sweep
std::vector<std::string> const& experiment_names();

//! Defaults of a named experiment; throws UnknownExperiment.
Config experiment_defaults(std::string const& name);

/*!
 * Run a named experiment with cfg layered over its defaults.
 *
 * Monte Carlo experiments spread paths over `workers` threads; results do
 * not depend on the worker count.
 */
ExperimentReport run_experiment(std::string const& name,
                                Config const& cfg,
                                int workers = 1);

}  // namespace liouville
