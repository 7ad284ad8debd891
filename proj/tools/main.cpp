#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cgraph/bcc.hpp"
#include "cgraph/connectivity.hpp"
#include "cgraph/gen_io.hpp"
#include "cgraph/graph.hpp"
#include "cgraph/lelists.hpp"
#include "cgraph/oracles.hpp"
#include "cgraph/parallel.hpp"
#include "cgraph/rng.hpp"
#include "cgraph/scc.hpp"
#include "cgraph/timer.hpp"
#include "cgraph/types.hpp"

namespace {

using cgraph::Graph;
using cgraph::VertexId;
using json = nlohmann::json;

constexpr const char* kSchema = "cgraph-report-v1";

// --- shared option plumbing ---------------------------------------------------

struct CommonOpts {
  int threads = 0;  // 0 = unset: CONCUR_GRAPH_THREADS, then machine width
  std::string engine = "par";
};

struct AlgoOpts {
  std::uint64_t tau = 512;
  bool no_vgc = false;
  std::string densify = "auto";
  std::uint64_t theta = 20;
  std::uint32_t lambda = 1024;
  std::uint32_t sigma = 50;
  std::uint32_t kappa = 128;
  double alpha = 0.5;
  double beta = 1.5;
  double growth = 1.2;
  std::string pivot = "maxdeg";
  std::uint64_t seed = 1;
  bool compare_rounds = false;
  bool symmetrize_input = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--threads", c.threads,
                  "worker threads (default: CONCUR_GRAPH_THREADS, then machine width)");
  cmd->add_option("--engine", c.engine, "par (parallel) or seq (sequential reference)")
      ->check(CLI::IsMember({"par", "seq"}));
}

void add_algo_flags(CLI::App* cmd, AlgoOpts& o) {
  cmd->add_option("--tau", o.tau, "local-search budget per frontier vertex");
  cmd->add_flag("--no-vgc", o.no_vgc, "disable local search (plain frontier rounds)");
  cmd->add_option("--densify", o.densify, "frontier representation: auto, dense, sparse")
      ->check(CLI::IsMember({"auto", "dense", "sparse"}));
  cmd->add_option("--theta", o.theta, "dense-round threshold divisor");
  cmd->add_option("--lambda", o.lambda, "first frontier-bag chunk size");
  cmd->add_option("--sigma", o.sigma, "bag samples that trigger chunk growth");
  cmd->add_option("--kappa", o.kappa, "bag probes before forced growth");
  cmd->add_option("--alpha", o.alpha, "bag target load factor at growth");
  cmd->add_option("--seed", o.seed, "seed for randomized schedules");
  cmd->add_flag("--symmetrize", o.symmetrize_input, "symmetrize the graph after loading");
}

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("CONCUR_GRAPH_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<int>(v);
  }
  return cgraph::max_workers();
}

cgraph::VgcParams make_vgc(const AlgoOpts& o) {
  cgraph::VgcParams vgc;
  vgc.tau = o.tau;
  vgc.enabled = !o.no_vgc;
  vgc.theta = o.theta;
  if (o.densify == "dense") {
    vgc.densify = cgraph::DensifyMode::kForceDense;
  } else if (o.densify == "sparse") {
    vgc.densify = cgraph::DensifyMode::kForceSparse;
  } else {
    vgc.densify = cgraph::DensifyMode::kAuto;
  }
  vgc.bag.lambda = o.lambda;
  vgc.bag.sigma = o.sigma;
  vgc.bag.kappa = o.kappa;
  vgc.bag.alpha = o.alpha;
  return vgc;
}

json params_json(const AlgoOpts& o, const CommonOpts& c, int threads) {
  return json{{"tau", o.tau},       {"vgc", !o.no_vgc},   {"densify", o.densify},
              {"theta", o.theta},   {"lambda", o.lambda}, {"sigma", o.sigma},
              {"kappa", o.kappa},   {"alpha", o.alpha},   {"beta", o.beta},
              {"growth", o.growth}, {"pivot", o.pivot},   {"seed", o.seed},
              {"threads", threads}, {"engine", c.engine}};
}

json graph_json(const Graph& g, const std::string& path) {
  return json{{"path", path}, {"n", g.n}, {"m", g.m}, {"symmetric", g.symmetric()}};
}

Graph load_input(const std::string& path, const AlgoOpts& o) {
  Graph g = cgraph::load_graph(path);
  if (o.symmetrize_input) g = cgraph::symmetrize(g);
  return g;
}

void print_report(const json& report) { std::cout << report.dump(2) << "\n"; }

// --- result digests -------------------------------------------------------------

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

// Digest of a partition that ignores the label alphabet: every class is
// renamed to its smallest member before folding, so two runs agree exactly
// when they split the vertices the same way.
template <class Label>
std::uint64_t partition_hash(const std::vector<Label>& label) {
  std::unordered_map<std::uint64_t, std::uint64_t> rep;
  for (std::size_t v = 0; v < label.size(); ++v) {
    rep.try_emplace(static_cast<std::uint64_t>(label[v]), v);
  }
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::size_t v = 0; v < label.size(); ++v) {
    h = cgraph::mix64(h ^ rep[static_cast<std::uint64_t>(label[v])]);
  }
  return h;
}

std::vector<std::vector<VertexId>> bcc_vertex_sets(const cgraph::BcLabeling& labeling) {
  std::unordered_map<VertexId, std::vector<VertexId>> groups;
  for (VertexId v = 0; v < labeling.label.size(); ++v) {
    if (labeling.label[v] != cgraph::kNoVertex) groups[labeling.label[v]].push_back(v);
  }
  std::vector<std::vector<VertexId>> sets;
  sets.reserve(groups.size());
  for (auto& [id, members] : groups) {
    members.push_back(labeling.head[id]);
    std::sort(members.begin(), members.end());
    sets.push_back(std::move(members));
  }
  std::sort(sets.begin(), sets.end());
  return sets;
}

std::uint64_t sets_hash(const std::vector<std::vector<VertexId>>& sets) {
  std::uint64_t h = 0x452821e638d01377ULL;
  for (const auto& s : sets) {
    h = cgraph::mix64(h ^ 0x9e3779b97f4a7c15ULL);
    for (const VertexId v : s) h = cgraph::mix64(h ^ (static_cast<std::uint64_t>(v) + 1));
  }
  return h;
}

std::uint64_t lists_hash(const cgraph::LeLists& lists) {
  std::uint64_t h = 0x13198a2e03707344ULL;
  const std::size_t n = lists.offsets.size() - 1;
  for (std::size_t v = 0; v < n; ++v) {
    h = cgraph::mix64(h ^ (0xa4093822299f31d0ULL + v));
    for (const cgraph::LeListEntry& e : lists.list(static_cast<VertexId>(v))) {
      h = cgraph::mix64(h ^ ((static_cast<std::uint64_t>(e.source) << 32) | e.distance));
    }
  }
  return h;
}

// --- gen / convert --------------------------------------------------------------

std::pair<std::uint64_t, std::uint64_t> parse_pair(const std::string& text, char sep,
                                                   const char* what) {
  const std::size_t at = text.find(sep);
  if (at == std::string::npos || at == 0 || at + 1 == text.size()) {
    throw std::invalid_argument(std::string("expected <a>") + sep + "<b> for " + what + ": " +
                                text);
  }
  return {std::stoull(text.substr(0, at)), std::stoull(text.substr(at + 1))};
}

struct GenOpts {
  std::string lattice;
  std::string random_spec;
  std::string scheme = "oriented";
  bool no_wrap = false;
  double p_forward = -1.0;
  double p_backward = -1.0;
  std::uint64_t seed = 1;
  bool sym = false;
  std::string out;
};

int run_gen(const GenOpts& o) {
  if (o.lattice.empty() == o.random_spec.empty()) {
    throw std::invalid_argument("gen: give exactly one of --lattice or --random");
  }
  Graph g;
  json params;
  if (!o.lattice.empty()) {
    const auto [rows, cols] = parse_pair(o.lattice, 'x', "--lattice");
    cgraph::LatticeSpec spec;
    spec.rows = static_cast<VertexId>(rows);
    spec.cols = static_cast<VertexId>(cols);
    spec.wrap = !o.no_wrap;
    spec.scheme = o.scheme == "sampled" ? cgraph::LatticeScheme::kSampled
                                        : cgraph::LatticeScheme::kOriented;
    spec.p_forward = o.p_forward;
    spec.p_backward = o.p_backward;
    spec.seed = o.seed;
    g = cgraph::gen_lattice(spec);
    params = json{{"kind", "lattice"},        {"rows", rows},
                  {"cols", cols},             {"wrap", spec.wrap},
                  {"scheme", o.scheme},       {"p_forward", o.p_forward},
                  {"p_backward", o.p_backward}, {"seed", o.seed},
                  {"symmetrized", o.sym}};
  } else {
    const auto [n, m] = parse_pair(o.random_spec, ',', "--random");
    g = cgraph::gen_random_digraph(static_cast<VertexId>(n), m, o.seed);
    params = json{{"kind", "random"}, {"n", n}, {"m", m}, {"seed", o.seed},
                  {"symmetrized", o.sym}};
  }
  if (o.sym) g = cgraph::symmetrize(g);
  cgraph::write_graph(g, o.out);
  print_report(json{{"schema", kSchema},
                    {"algorithm", "gen"},
                    {"engine", "par"},
                    {"graph", graph_json(g, o.out)},
                    {"params", params},
                    {"result", json{{"path", o.out}}},
                    {"details", json::object()},
                    {"timing", json::object()}});
  return 0;
}

int run_convert(const std::string& in, const std::string& out, bool sym) {
  Graph g = cgraph::load_graph(in);
  if (sym) g = cgraph::symmetrize(g);
  cgraph::write_graph(g, out);
  print_report(json{{"schema", kSchema},
                    {"algorithm", "convert"},
                    {"engine", "par"},
                    {"graph", graph_json(g, in)},
                    {"params", json{{"symmetrized", sym}}},
                    {"result", json{{"path", out}}},
                    {"details", json::object()},
                    {"timing", json::object()}});
  return 0;
}

// --- algorithm subcommands --------------------------------------------------------

json scc_rounds_json(const cgraph::SccStats& s) {
  return json{{"first_fwd_rounds", s.first_fwd_rounds},
              {"first_bwd_rounds", s.first_bwd_rounds},
              {"multi_rounds", s.multi_rounds}};
}

int run_scc_cmd(const std::string& path, const AlgoOpts& o, const CommonOpts& c, int threads) {
  Graph g = load_input(path, o);
  json report{{"schema", kSchema},        {"algorithm", "scc"},
              {"engine", c.engine},       {"graph", graph_json(g, path)},
              {"params", params_json(o, c, threads)}};
  cgraph::Timer total;
  if (c.engine == "seq") {
    const cgraph::SeqScc r = cgraph::tarjan_scc(g);
    report["result"] = json{{"num_sccs", r.num_sccs},
                            {"largest_scc", r.largest},
                            {"partition_hash", hex64(partition_hash(r.label))}};
    report["details"] = json::object();
    report["timing"] = json{{"total_s", total.elapsed_s()}};
  } else {
    cgraph::SccParams params;
    params.vgc = make_vgc(o);
    params.beta = o.beta;
    params.pivot = o.pivot == "random" ? cgraph::PivotRule::kRandom
                                       : cgraph::PivotRule::kMaxDegree;
    params.seed = o.seed;
    const cgraph::SccResult r = cgraph::run_scc(g, params);
    const double total_s = total.elapsed_s();
    report["result"] = json{{"num_sccs", r.stats.num_sccs},
                            {"largest_scc", r.stats.largest_scc},
                            {"partition_hash", hex64(partition_hash(r.labels.label))}};
    json details{{"trimmed", r.stats.trimmed},
                 {"first_scc_size", r.stats.first_scc_size},
                 {"batches", r.stats.batches},
                 {"resize_retries", r.stats.resize_retries},
                 {"rounds", scc_rounds_json(r.stats)}};
    if (o.compare_rounds) {
      cgraph::SccParams plain = params;
      plain.vgc.enabled = false;
      const cgraph::SccResult p = cgraph::run_scc(g, plain);
      details["compare_rounds"] =
          json{{"vgc", scc_rounds_json(r.stats)}, {"plain", scc_rounds_json(p.stats)}};
    }
    report["details"] = details;
    report["timing"] = json{{"total_s", total_s},
                            {"trim_s", r.stats.phases.trim_s},
                            {"first_scc_s", r.stats.phases.first_scc_s},
                            {"multi_search_s", r.stats.phases.multi_search_s},
                            {"table_resize_s", r.stats.phases.table_resize_s},
                            {"labeling_s", r.stats.phases.labeling_s}};
  }
  print_report(report);
  return 0;
}

int run_cc_cmd(const std::string& path, const AlgoOpts& o, const CommonOpts& c, int threads) {
  Graph g = load_input(path, o);
  json report{{"schema", kSchema},        {"algorithm", "cc"},
              {"engine", c.engine},       {"graph", graph_json(g, path)},
              {"params", params_json(o, c, threads)}};
  cgraph::Timer total;
  if (c.engine == "seq") {
    const cgraph::SeqCc r = cgraph::seq_components(g);
    report["result"] = json{{"num_components", r.num_components},
                            {"partition_hash", hex64(partition_hash(r.label))}};
    report["details"] = json::object();
    report["timing"] = json{{"total_s", total.elapsed_s()}};
  } else {
    cgraph::LddParams params;
    params.vgc = make_vgc(o);
    params.growth = o.growth;
    params.seed = o.seed;
    const cgraph::CcResult r = cgraph::run_cc(g, params);
    const double total_s = total.elapsed_s();
    report["result"] = json{{"num_components", r.stats.num_components},
                            {"partition_hash", hex64(partition_hash(r.label))}};
    json details{{"ldd_rounds", r.stats.ldd_rounds}, {"merge_edges", r.stats.merge_edges}};
    if (o.compare_rounds) {
      cgraph::LddParams plain = params;
      plain.vgc.enabled = false;
      const cgraph::CcResult p = cgraph::run_cc(g, plain);
      details["compare_rounds"] = json{{"vgc", json{{"ldd_rounds", r.stats.ldd_rounds}}},
                                       {"plain", json{{"ldd_rounds", p.stats.ldd_rounds}}}};
    }
    report["details"] = details;
    report["timing"] = json{{"total_s", total_s},
                            {"ldd_s", r.stats.ldd_s},
                            {"union_s", r.stats.union_s},
                            {"finish_s", r.stats.finish_s}};
  }
  print_report(report);
  return 0;
}

int run_bcc_cmd(const std::string& path, const AlgoOpts& o, const CommonOpts& c, int threads) {
  Graph g = load_input(path, o);
  json report{{"schema", kSchema},        {"algorithm", "bcc"},
              {"engine", c.engine},       {"graph", graph_json(g, path)},
              {"params", params_json(o, c, threads)}};
  cgraph::Timer total;
  if (c.engine == "seq") {
    const cgraph::SeqBcc r = cgraph::hopcroft_tarjan_bcc(g);
    report["result"] = json{{"num_bccs", r.components.size()},
                            {"articulation_points", r.articulation.size()},
                            {"bridges", r.bridges.size()},
                            {"bcc_hash", hex64(sets_hash(r.components))}};
    report["details"] = json::object();
    report["timing"] = json{{"total_s", total.elapsed_s()}};
  } else {
    cgraph::LddParams params;
    params.vgc = make_vgc(o);
    params.growth = o.growth;
    params.seed = o.seed;
    const cgraph::BccResult r = cgraph::run_bcc(g, params);
    const std::vector<VertexId> points = cgraph::articulation_points(r.labeling);
    const std::vector<cgraph::Edge> bridge_edges = cgraph::bridges(r.labeling, r.forest);
    const double total_s = total.elapsed_s();
    report["result"] = json{{"num_bccs", r.stats.num_bccs},
                            {"articulation_points", points.size()},
                            {"bridges", bridge_edges.size()},
                            {"bcc_hash", hex64(sets_hash(bcc_vertex_sets(r.labeling)))}};
    report["details"] = json{{"tree_edges", r.stats.tree_edges},
                             {"back_edges", r.stats.back_edges},
                             {"cross_edges", r.stats.cross_edges},
                             {"critical_edges", r.stats.critical_edges},
                             {"components", r.forest.num_components}};
    report["timing"] = json{{"total_s", total_s},
                            {"forest_s", r.stats.phases.forest_s},
                            {"tour_s", r.stats.phases.tour_s},
                            {"low_high_s", r.stats.phases.low_high_s},
                            {"final_cc_s", r.stats.phases.final_cc_s}};
  }
  print_report(report);
  return 0;
}

// --- elimination lists ------------------------------------------------------------

std::vector<VertexId> make_priority(VertexId n, std::uint64_t seed) {
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  cgraph::SplitMix64 rng(cgraph::mix64(seed) ^ 0x0d95a8f2cf7428a1ULL);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.next_below(i)]);
  }
  return order;
}

cgraph::LeLists flatten_lists(const std::vector<std::vector<cgraph::LeListEntry>>& lists) {
  cgraph::LeLists out;
  out.offsets.assign(lists.size() + 1, 0);
  for (std::size_t v = 0; v < lists.size(); ++v) {
    out.offsets[v + 1] = out.offsets[v] + lists[v].size();
  }
  out.entries.reserve(out.offsets.back());
  for (const auto& list : lists) {
    out.entries.insert(out.entries.end(), list.begin(), list.end());
  }
  return out;
}

void write_lists_text(const cgraph::LeLists& lists, std::ostream& out) {
  const std::size_t n = lists.offsets.size() - 1;
  for (std::size_t v = 0; v < n; ++v) {
    out << v << ":";
    for (const cgraph::LeListEntry& e : lists.list(static_cast<VertexId>(v))) {
      out << " (" << e.source << "," << e.distance << ")";
    }
    out << "\n";
  }
}

void write_lists_binary(const cgraph::LeLists& lists, std::ostream& out) {
  const char magic[4] = {'L', 'E', 'L', '1'};
  out.write(magic, 4);
  const std::uint64_t n = lists.offsets.size() - 1;
  const std::uint64_t total = lists.entries.size();
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&total), sizeof total);
  out.write(reinterpret_cast<const char*>(lists.offsets.data()),
            static_cast<std::streamsize>(lists.offsets.size() * sizeof(std::uint64_t)));
  for (const cgraph::LeListEntry& e : lists.entries) {
    out.write(reinterpret_cast<const char*>(&e.source), sizeof e.source);
    out.write(reinterpret_cast<const char*>(&e.distance), sizeof e.distance);
  }
}

bool binary_lists_path(const std::string& path) {
  const std::size_t dot = path.rfind('.');
  if (dot == std::string::npos) return false;
  const std::string ext = path.substr(dot);
  return ext == ".lbin";
}

int run_lelists_cmd(const std::string& path, const AlgoOpts& o, const CommonOpts& c,
                    int threads, std::uint64_t priority_seed, const std::string& out_path) {
  Graph g = load_input(path, o);
  json params = params_json(o, c, threads);
  params["priority_seed"] = priority_seed;
  json report{{"schema", kSchema},  {"algorithm", "lelists"},
              {"engine", c.engine}, {"graph", graph_json(g, path)},
              {"params", params}};
  const std::vector<VertexId> priority = make_priority(g.n, priority_seed);

  cgraph::Timer total;
  cgraph::LeLists lists;
  json details = json::object();
  if (c.engine == "seq") {
    lists = flatten_lists(cgraph::cohen_lelists(g, priority));
  } else {
    cgraph::LeListsParams lp;
    lp.beta = o.beta;
    lp.bag.lambda = o.lambda;
    lp.bag.sigma = o.sigma;
    lp.bag.kappa = o.kappa;
    lp.bag.alpha = o.alpha;
    lists = cgraph::run_lelists(g, priority, lp);
    details = json{{"batches", lists.stats.batches},
                   {"rounds", lists.stats.rounds},
                   {"candidates", lists.stats.candidates},
                   {"resize_retries", lists.stats.resize_retries}};
  }
  const double total_s = total.elapsed_s();

  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    if (binary_lists_path(out_path)) {
      write_lists_binary(lists, out);
    } else {
      write_lists_text(lists, out);
    }
  }

  const std::uint64_t entries = lists.entries.size();
  json result{{"entries", entries},
              {"mean_length", g.n == 0 ? 0.0 : static_cast<double>(entries) / g.n},
              {"lists_hash", hex64(lists_hash(lists))}};
  if (!out_path.empty()) result["output"] = out_path;
  report["result"] = result;
  report["details"] = details;
  if (c.engine == "seq") {
    report["timing"] = json{{"total_s", total_s}};
  } else {
    report["timing"] = json{{"total_s", total_s},
                            {"search_s", lists.stats.search_s},
                            {"filter_s", lists.stats.filter_s},
                            {"table_resize_s", lists.stats.table_resize_s}};
  }
  print_report(report);
  return 0;
}

// --- bench -------------------------------------------------------------------------

int run_bench_cmd(const std::string& path, const AlgoOpts& o, const CommonOpts& c, int threads,
                  const std::string& algo, std::vector<std::uint64_t> taus,
                  std::uint32_t repeat, bool stream) {
  if (taus.empty()) taus = {1, 4, 16, 64, 256, 512};
  if (repeat == 0) repeat = 1;
  Graph g = load_input(path, o);
  json runs = json::array();
  double tau1_wall = 0.0;
  for (const std::uint64_t tau : taus) {
    AlgoOpts run_opts = o;
    run_opts.tau = tau;
    run_opts.no_vgc = tau <= 1;
    std::vector<double> walls;
    json rounds;
    for (std::uint32_t r = 0; r < repeat; ++r) {
      cgraph::Timer t;
      if (algo == "cc") {
        cgraph::LddParams params;
        params.vgc = make_vgc(run_opts);
        params.growth = run_opts.growth;
        params.seed = run_opts.seed;
        const cgraph::CcResult res = cgraph::run_cc(g, params);
        walls.push_back(t.elapsed_s());
        rounds = json{{"ldd_rounds", res.stats.ldd_rounds}};
      } else {
        cgraph::SccParams params;
        params.vgc = make_vgc(run_opts);
        params.beta = run_opts.beta;
        params.pivot = run_opts.pivot == "random" ? cgraph::PivotRule::kRandom
                                                  : cgraph::PivotRule::kMaxDegree;
        params.seed = run_opts.seed;
        const cgraph::SccResult res = cgraph::run_scc(g, params);
        walls.push_back(t.elapsed_s());
        rounds = scc_rounds_json(res.stats);
      }
    }
    std::sort(walls.begin(), walls.end());
    const double median = walls[walls.size() / 2];
    if (tau == 1) tau1_wall = median;
    json entry{{"tau", tau}, {"wall_s", median}, {"repeat", repeat}, {"rounds", rounds}};
    if (stream) {
      std::cout << entry.dump() << "\n" << std::flush;
    }
    runs.push_back(std::move(entry));
  }
  if (!stream) {
    if (tau1_wall > 0.0) {
      for (json& entry : runs) {
        entry["relative_to_tau1"] = entry["wall_s"].get<double>() / tau1_wall;
      }
    }
    print_report(json{{"schema", kSchema},
                      {"algorithm", "bench"},
                      {"engine", "par"},
                      {"graph", graph_json(g, path)},
                      {"params", params_json(o, c, threads)},
                      {"result", json{{"algo", algo}, {"runs", runs}}},
                      {"details", json::object()},
                      {"timing", json::object()}});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parallel graph connectivity toolkit"};
  app.require_subcommand(1);

  GenOpts gen_opts;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic graph");
  gen_cmd->add_option("--lattice", gen_opts.lattice, "rows x cols grid, e.g. 500x500");
  gen_cmd->add_option("--random", gen_opts.random_spec, "uniform digraph as n,m");
  gen_cmd->add_option("--scheme", gen_opts.scheme, "lattice edge scheme")
      ->check(CLI::IsMember({"oriented", "sampled"}));
  gen_cmd->add_flag("--no-wrap", gen_opts.no_wrap, "open grid borders (no torus wrap)");
  gen_cmd->add_option("--pf", gen_opts.p_forward, "forward edge probability");
  gen_cmd->add_option("--pb", gen_opts.p_backward, "backward edge probability (sampled)");
  gen_cmd->add_option("--seed", gen_opts.seed, "generation seed");
  gen_cmd->add_flag("--sym", gen_opts.sym, "symmetrize before writing");
  gen_cmd->add_option("-o,--out", gen_opts.out, "output path (.bin/.cgr binary, else text)")
      ->required();

  std::string convert_in;
  std::string convert_out;
  bool convert_sym = false;
  CLI::App* convert_cmd = app.add_subcommand("convert", "re-encode a graph file");
  convert_cmd->add_option("input", convert_in, "graph file")->required();
  convert_cmd->add_option("-o,--out", convert_out, "output path")->required();
  convert_cmd->add_flag("--sym", convert_sym, "symmetrize while converting");

  struct SubCmd {
    CLI::App* cmd = nullptr;
    std::string input;
    AlgoOpts algo;
    CommonOpts common;
  };

  SubCmd scc_sub;
  scc_sub.cmd = app.add_subcommand("scc", "strongly connected components");
  scc_sub.cmd->add_option("input", scc_sub.input, "graph file")->required();
  add_common_flags(scc_sub.cmd, scc_sub.common);
  add_algo_flags(scc_sub.cmd, scc_sub.algo);
  scc_sub.cmd->add_option("--beta", scc_sub.algo.beta, "batch growth factor");
  scc_sub.cmd->add_option("--pivot", scc_sub.algo.pivot, "first-search pivot rule")
      ->check(CLI::IsMember({"maxdeg", "random"}));
  scc_sub.cmd->add_flag("--compare-rounds", scc_sub.algo.compare_rounds,
                        "also run without local search and report both round counts");

  SubCmd cc_sub;
  cc_sub.cmd = app.add_subcommand("cc", "connected components");
  cc_sub.cmd->add_option("input", cc_sub.input, "graph file")->required();
  add_common_flags(cc_sub.cmd, cc_sub.common);
  add_algo_flags(cc_sub.cmd, cc_sub.algo);
  cc_sub.cmd->add_option("--growth", cc_sub.algo.growth, "cluster-schedule growth factor");
  cc_sub.cmd->add_flag("--compare-rounds", cc_sub.algo.compare_rounds,
                       "also run without local search and report both round counts");

  SubCmd bcc_sub;
  bcc_sub.cmd = app.add_subcommand("bcc", "biconnected components");
  bcc_sub.cmd->add_option("input", bcc_sub.input, "graph file")->required();
  add_common_flags(bcc_sub.cmd, bcc_sub.common);
  add_algo_flags(bcc_sub.cmd, bcc_sub.algo);
  bcc_sub.cmd->add_option("--growth", bcc_sub.algo.growth, "cluster-schedule growth factor");

  SubCmd lel_sub;
  std::uint64_t priority_seed = 1;
  std::string lel_out;
  lel_sub.cmd = app.add_subcommand("lelists", "elimination lists");
  lel_sub.cmd->add_option("input", lel_sub.input, "graph file")->required();
  add_common_flags(lel_sub.cmd, lel_sub.common);
  add_algo_flags(lel_sub.cmd, lel_sub.algo);
  lel_sub.cmd->add_option("--beta", lel_sub.algo.beta, "batch growth factor");
  lel_sub.cmd->add_option("--priority-seed", priority_seed, "seed of the priority permutation");
  lel_sub.cmd->add_option("-o,--out", lel_out, "write lists (.lbin binary, else text)");

  SubCmd bench_sub;
  std::string bench_algo = "scc";
  std::vector<std::uint64_t> bench_taus;
  std::uint32_t bench_repeat = 1;
  bool bench_stream = false;
  bench_sub.cmd = app.add_subcommand("bench", "budget sweep over one algorithm");
  bench_sub.cmd->add_option("input", bench_sub.input, "graph file")->required();
  add_common_flags(bench_sub.cmd, bench_sub.common);
  add_algo_flags(bench_sub.cmd, bench_sub.algo);
  bench_sub.cmd->add_option("--algo", bench_algo, "algorithm to sweep")
      ->check(CLI::IsMember({"scc", "cc"}));
  bench_sub.cmd->add_option("--taus", bench_taus, "budget values to sweep")->delimiter(',');
  bench_sub.cmd->add_option("--repeat", bench_repeat, "runs per value (median reported)");
  bench_sub.cmd->add_flag("--stream", bench_stream, "line-delimited record per run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) return run_gen(gen_opts);
    if (*convert_cmd) return run_convert(convert_in, convert_out, convert_sym);

    SubCmd* active = nullptr;
    if (*scc_sub.cmd) active = &scc_sub;
    if (*cc_sub.cmd) active = &cc_sub;
    if (*bcc_sub.cmd) active = &bcc_sub;
    if (*lel_sub.cmd) active = &lel_sub;
    if (*bench_sub.cmd) active = &bench_sub;
    if (active == nullptr) throw std::logic_error("no subcommand dispatched");

    const int threads = active->common.engine == "seq" ? 1 : resolve_threads(active->common.threads);
    cgraph::set_num_workers(threads);

    if (active == &scc_sub) return run_scc_cmd(active->input, active->algo, active->common, threads);
    if (active == &cc_sub) return run_cc_cmd(active->input, active->algo, active->common, threads);
    if (active == &bcc_sub) return run_bcc_cmd(active->input, active->algo, active->common, threads);
    if (active == &lel_sub) {
      return run_lelists_cmd(active->input, active->algo, active->common, threads, priority_seed,
                             lel_out);
    }
    return run_bench_cmd(active->input, active->algo, active->common, threads, bench_algo,
                         bench_taus, bench_repeat, bench_stream);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
