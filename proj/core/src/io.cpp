#include "npicover/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace npicover::io {

using nlohmann::json;

namespace {

json parse(std::string_view text, ErrorCode code) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(code, std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T get(const json& j, const char* key, ErrorCode code) {
  if (!j.contains(key)) {
    throw Error(code, std::string("missing field \"") + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(code, std::string("field \"") + key + "\": " + e.what());
  }
}

void only_keys(const json& j, std::initializer_list<std::string_view> allowed,
               const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) {
      throw Error(ErrorCode::kConfig,
                  "unknown field \"" + key + "\" in " + where);
    }
  }
}

Range range_from(const json& j, const char* key) {
  const auto v = get<std::vector<double>>(j, key, ErrorCode::kConfig);
  if (v.size() != 2) {
    throw Error(ErrorCode::kConfig, std::string(key) + " must be [lo, hi]");
  }
  return Range{v[0], v[1]};
}

json steady_json(const SteadyState& s) {
  return json{{"kind", s.kind == SteadyKind::kEndemic ? "endemic" : "disease_free"},
              {"x_star", s.x_star},
              {"residual", s.residual},
              {"iterations", s.iterations},
              {"r0", s.r0},
              {"near_critical", s.near_critical}};
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string network_to_json(const Network& net) {
  json edges = json::array();
  for (const Edge& e : net.edges()) edges.push_back({e.u, e.v, e.weight});
  json j{{"n", net.n()}, {"edges", edges}, {"gamma", net.gamma()},
         {"beta", net.beta()}};
  return j.dump() + "\n";
}

Network network_from_json(std::string_view text) {
  constexpr auto code = ErrorCode::kInvalidParams;
  const json j = parse(text, code);
  const auto n = get<NodeId>(j, "n", code);
  std::vector<Edge> edges;
  for (const auto& e : get<json>(j, "edges", code)) {
    if (!e.is_array() || e.size() != 3) {
      throw Error(code, "edges must be [i, j, weight] triples");
    }
    edges.push_back({e[0].get<NodeId>(), e[1].get<NodeId>(), e[2].get<double>()});
  }
  Network net(n, std::move(edges), get<std::vector<double>>(j, "gamma", code),
              get<std::vector<double>>(j, "beta", code));
  require_valid(net);
  return net;
}

std::string clusters_to_json(const ClusterSet& cs) {
  json j{{"clusters", cs.members}, {"cost_c1", cs.cost_c1}, {"cost_c2", cs.cost_c2}};
  return j.dump() + "\n";
}

ClusterSet clusters_from_json(std::string_view text, NodeId n) {
  constexpr auto code = ErrorCode::kInvalidParams;
  const json j = parse(text, code);
  ClusterSet cs(get<std::vector<std::vector<NodeId>>>(j, "clusters", code),
                get<std::vector<double>>(j, "cost_c1", code),
                get<std::vector<double>>(j, "cost_c2", code));
  require_valid(cs, n);
  return cs;
}

std::string strategy_to_json(const Strategy& s) {
  return json(s.ids()).dump() + "\n";
}

Strategy strategy_from_json(std::string_view text) {
  constexpr auto code = ErrorCode::kInvalidParams;
  const json j = parse(text, code);
  if (j.is_array()) return Strategy(j.get<std::vector<ClusterId>>());
  return Strategy(get<std::vector<ClusterId>>(j, "selected", code));
}

std::string greedy_result_to_json(const GreedyResult& g) {
  json trace = json::array();
  for (const GreedyStep& step : g.trace) {
    trace.push_back({{"cluster", step.cluster},
                     {"jbar_after", step.jbar_after},
                     {"cost_after", step.cost_after}});
  }
  json j{{"selected", g.strategy.ids()},
         {"trace", trace},
         {"bound_ratio", g.bound_ratio},
         {"degenerate_bound", g.degenerate_bound},
         {"jbar_initial", g.jbar_initial},
         {"jbar_final", g.jbar_final},
         {"cost", g.cost}};
  return j.dump(2) + "\n";
}

std::string steady_state_to_json(const SteadyState& s) {
  return steady_json(s).dump(2) + "\n";
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  out << "t";
  for (std::size_t i = 0; i < n; ++i) out << ",x_" << i;
  out << "\n";
  char buf[32];
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", traj.times[k]);
    out << buf;
    for (double v : traj.states[k]) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << "\n";
  }
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream ss;
  write_trajectory_csv(traj, ss);
  return ss.str();
}

ExperimentConfig config_from_json(std::string_view text) {
  constexpr auto code = ErrorCode::kConfig;
  const json j = parse(text, code);
  only_keys(j, {"schema", "network", "clusters", "npi", "cost", "thresholds",
                "seeds", "dynamics", "max_regen"},
            "config");
  if (!j.contains("schema") || j["schema"] != 1) {
    throw Error(code, "config must declare \"schema\": 1");
  }
  ExperimentConfig c;
  if (j.contains("network")) {
    const json& nj = j["network"];
    only_keys(nj, {"n", "k", "p", "gamma_range", "beta_range", "weight_range"},
              "network");
    if (nj.contains("n")) c.network.n = get<NodeId>(nj, "n", code);
    if (nj.contains("k")) c.network.k = get<int>(nj, "k", code);
    if (nj.contains("p")) c.network.p = get<double>(nj, "p", code);
    if (nj.contains("gamma_range")) c.network.gamma = range_from(nj, "gamma_range");
    if (nj.contains("beta_range")) c.network.beta = range_from(nj, "beta_range");
    if (nj.contains("weight_range")) c.network.weight = range_from(nj, "weight_range");
  }
  if (j.contains("clusters")) {
    const json& cj = j["clusters"];
    only_keys(cj, {"count", "size_range", "cost_choices"}, "clusters");
    if (cj.contains("count")) c.clusters.count = get<ClusterId>(cj, "count", code);
    if (cj.contains("size_range")) {
      const auto v = get<std::vector<NodeId>>(cj, "size_range", code);
      if (v.size() != 2) throw Error(code, "size_range must be [min, max]");
      c.clusters.size_range = {v[0], v[1]};
    }
    if (cj.contains("cost_choices")) {
      c.clusters.cost_choices = get<std::vector<double>>(cj, "cost_choices", code);
    }
  }
  if (j.contains("npi")) {
    const json& pj = j["npi"];
    only_keys(pj, {"theta1", "theta2", "relaxed"}, "npi");
    if (pj.contains("theta1")) c.npi.theta1 = get<double>(pj, "theta1", code);
    if (pj.contains("theta2")) c.npi.theta2 = get<double>(pj, "theta2", code);
    if (pj.contains("relaxed")) c.npi.relaxed = get<bool>(pj, "relaxed", code);
  }
  if (j.contains("cost")) {
    const json& cj = j["cost"];
    only_keys(cj, {"alpha", "c0"}, "cost");
    if (cj.contains("alpha")) {
      const auto a = get<std::vector<double>>(cj, "alpha", code);
      if (a.size() != 3) throw Error(code, "cost.alpha must have 3 entries");
      c.cost.alpha = {a[0], a[1], a[2]};
    }
    if (cj.contains("c0")) c.cost.c0 = get<double>(cj, "c0", code);
  }
  if (j.contains("thresholds")) {
    c.thresholds = get<std::vector<double>>(j, "thresholds", code);
  }
  if (j.contains("seeds")) c.seeds = get<std::vector<std::uint64_t>>(j, "seeds", code);
  if (j.contains("dynamics")) {
    const json& dj = j["dynamics"];
    only_keys(dj, {"dt", "t_end", "tol", "max_iter", "sample_stride"}, "dynamics");
    if (dj.contains("dt")) c.dynamics.dt = get<double>(dj, "dt", code);
    if (dj.contains("t_end")) c.dynamics.t_end = get<double>(dj, "t_end", code);
    if (dj.contains("tol")) c.dynamics.tol = get<double>(dj, "tol", code);
    if (dj.contains("max_iter")) c.dynamics.max_iter = get<long>(dj, "max_iter", code);
    if (dj.contains("sample_stride")) {
      c.dynamics.sample_stride = get<long>(dj, "sample_stride", code);
    }
  }
  if (j.contains("max_regen")) c.max_regen = get<int>(j, "max_regen", code);
  if (auto err = validate(c)) throw *err;
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j{
      {"schema", 1},
      {"network",
       {{"n", c.network.n},
        {"k", c.network.k},
        {"p", c.network.p},
        {"gamma_range", {c.network.gamma.lo, c.network.gamma.hi}},
        {"beta_range", {c.network.beta.lo, c.network.beta.hi}},
        {"weight_range", {c.network.weight.lo, c.network.weight.hi}}}},
      {"clusters",
       {{"count", c.clusters.count},
        {"size_range", {c.clusters.size_range.first, c.clusters.size_range.second}},
        {"cost_choices", c.clusters.cost_choices}}},
      {"npi",
       {{"theta1", c.npi.theta1}, {"theta2", c.npi.theta2}, {"relaxed", c.npi.relaxed}}},
      {"cost", {{"alpha", c.cost.alpha}, {"c0", c.cost.c0}}},
      {"thresholds", c.thresholds},
      {"seeds", c.seeds},
      {"dynamics",
       {{"dt", c.dynamics.dt},
        {"t_end", c.dynamics.t_end},
        {"tol", c.dynamics.tol},
        {"max_iter", c.dynamics.max_iter},
        {"sample_stride", c.dynamics.sample_stride}}},
      {"max_regen", c.max_regen}};
  return j.dump(2) + "\n";
}

std::string sweep_to_csv(const SweepReport& report) {
  std::string out = "threshold,seed,method,clusters,nodes,cost,bound_ratio,regen\n";
  for (const SweepRow& r : report.rows) {
    out += format_double(r.threshold) + "," + std::to_string(r.seed) + "," +
           std::string(to_string(r.method)) + "," + std::to_string(r.clusters) +
           "," + std::to_string(r.nodes) + "," + format_double(r.cost) + "," +
           (r.bound_ratio ? format_double(*r.bound_ratio) : std::string()) + "," +
           std::to_string(r.regen) + "\n";
  }
  return out;
}

std::string sweep_summary_json(const SweepReport& report) {
  json rows = json::array();
  for (const SweepRow& r : report.rows) {
    json row{{"threshold", r.threshold},
             {"seed", r.seed},
             {"method", to_string(r.method)},
             {"selected", r.strategy.ids()},
             {"clusters", r.clusters},
             {"nodes", r.nodes},
             {"cost", r.cost},
             {"jbar", r.jbar},
             {"max_excess", r.max_excess},
             {"regen", r.regen}};
    if (r.bound_ratio) row["bound_ratio"] = *r.bound_ratio;
    rows.push_back(std::move(row));
  }
  // Mean greedy/baseline cost ratio per threshold.
  json per_threshold = json::array();
  const auto ratios = report.cost_ratios();
  std::size_t cell = 0;
  for (std::size_t k = 0; k < report.rows.size();) {
    const double t = report.rows[k].threshold;
    double sum = 0.0;
    std::size_t count = 0;
    while (k < report.rows.size() && report.rows[k].threshold == t) {
      if (report.rows[k].method == Method::kGreedy && cell < ratios.size()) {
        sum += ratios[cell++];
        ++count;
      }
      ++k;
    }
    per_threshold.push_back({{"threshold", t},
                             {"cells", count},
                             {"mean_cost_ratio", count ? sum / count : 0.0}});
  }
  json j{{"rows", rows},
         {"per_threshold", per_threshold},
         {"mean_cost_ratio", report.mean_cost_ratio()},
         {"greedy_never_worse", report.greedy_never_worse()}};
  return j.dump(2) + "\n";
}

std::string comparison_steady_json(const ComparisonBundle& b) {
  json j{{"threshold", b.threshold},
         {"strategy", b.strategy.ids()},
         {"selected_nodes",
          selected_nodes(b.instance.clusters, b.strategy, b.instance.network.n())
              .count()},
         {"certified", b.certified},
         {"degenerate", b.degenerate},
         {"terminal_max_npi", b.terminal_max_npi},
         {"clamp_count", {{"free", b.free_run.clamp_count}, {"npi", b.npi_run.clamp_count}}},
         {"free", steady_json(b.steady_free)},
         {"npi", steady_json(b.steady_npi)}};
  return j.dump(2) + "\n";
}

}  // namespace npicover::io
