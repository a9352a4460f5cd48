#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "npicover/covering.hpp"
#include "npicover/dynamics.hpp"
#include "npicover/experiment.hpp"
#include "npicover/network.hpp"
#include "npicover/npi.hpp"

// JSON and CSV formats. Node and cluster indices are 0-based everywhere.
//
//   network.json   {"n":N, "edges":[[i,j,w],...], "gamma":[...], "beta":[...]}
//   clusters.json  {"clusters":[[node,...],...], "cost_c1":[...], "cost_c2":[...]}
//   strategy       sorted array of cluster indices, or a greedy result
//                  {"selected":[...], "trace":[...], "bound_ratio":...}
//   trajectory     CSV "t,x_0,...,x_{n-1}", 17 significant digits
//   sweep.csv      "threshold,seed,method,clusters,nodes,cost,bound_ratio,regen"
namespace npicover::io {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

std::string network_to_json(const Network& net);
// Parses and validates.
Network network_from_json(std::string_view text);

std::string clusters_to_json(const ClusterSet& cs);
// Parses and checks member indices against n.
ClusterSet clusters_from_json(std::string_view text, NodeId n);

std::string strategy_to_json(const Strategy& s);
// Accepts a bare index array or an object with a "selected" array.
Strategy strategy_from_json(std::string_view text);

std::string greedy_result_to_json(const GreedyResult& g);
std::string steady_state_to_json(const SteadyState& s);

void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
std::string trajectory_to_csv(const Trajectory& traj);

// Config documents carry "schema": 1; unknown keys are rejected with a
// ConfigError naming the key. Omitted keys keep their defaults.
ExperimentConfig config_from_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& config);

std::string sweep_to_csv(const SweepReport& report);
std::string sweep_summary_json(const SweepReport& report);

// {"threshold", "strategy", "certified", "free": steady, "npi": steady, ...}
std::string comparison_steady_json(const ComparisonBundle& bundle);

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

}  // namespace npicover::io
