// Acceptance run: one PASS/FAIL line per criterion. Tolerances and sample
// sizes are fixed below.
//
//   acceptance [--cli path/to/tbnet]
//
// With --cli, the performance criterion times the CLI's bench subcommand;
// without it, the same pipeline is timed in-process.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbnet/tbnet.hpp"
#include "tbnet/testkit/generator.hpp"
#include "tbnet/testkit/isomorphism.hpp"
#include "tbnet/testkit/oracles.hpp"

using namespace tbnet;
using namespace tbnet::testkit;

namespace {

constexpr double kFixtureBudgetMs = 1000.0;
constexpr std::size_t kSaturationSamples = 1000;
constexpr std::size_t kEquivalenceSamples = 300;
constexpr std::size_t kEquivalenceMaxVertices = 14;
constexpr std::size_t kPathCoverMaxVertices = 12;
constexpr double kEquivalenceBudgetMs = 5 * 60 * 1000.0;
constexpr std::size_t kTemporalSamples = 200;
constexpr std::size_t kTemporalMaxVertices = 16;
constexpr std::size_t kCompletionSamples = 1000;
constexpr std::size_t kRoundTripSamples = 2000;
constexpr double kLargeBudgetMs = 10000.0;
constexpr double kMaxTimeRatio = 50.0;
constexpr std::size_t kSmallBench = 2500;  // leaves = reticulations: |V| = 9999
constexpr std::size_t kLargeBench = 25000;  // |V| = 99999

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << ". " << what << " -- " << detail << std::endl;
  if (!ok) ++failures;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

PhyloNetwork fixture(const std::string& name) {
  std::ifstream in(std::string(TBNET_DATA_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_edgelist(ss.str());
}

VertexId named(const PhyloNetwork& net, const char* name) { return net.find(name).value(); }

/// Seeded networks by increasing seed, with leaves and reticulations cycling
/// through their ranges; shapes outside the vertex bound are skipped.
std::vector<PhyloNetwork> sample(std::size_t count, std::size_t max_leaves, std::size_t max_retics,
                                 std::size_t max_vertices, bool temporal, std::uint64_t seed0) {
  std::vector<PhyloNetwork> out;
  for (std::uint64_t s = seed0; out.size() < count; ++s) {
    const std::size_t leaves = 1 + s % max_leaves;
    const std::size_t retics = (s / max_leaves) % (max_retics + 1);
    if (leaves == 1 && retics > 0 && retics < 3) continue;
    if (2 * leaves + 2 * retics - 1 > max_vertices) continue;
    try {
      out.push_back(generate({leaves, retics, s, temporal, 5000}));
    } catch (const GenerationError&) {
      // shape with no temporal network within the rejection budget
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void one_leaf_reproduction() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto net = fixture("one_leaf.edges");
  const auto d = deviation_indices(net);
  const auto pp = vertex_disjoint_paths(net);
  const auto tree = spanning_tree_from(net, pp);
  const Edge ac{named(net, "a"), named(net, "c")};
  const bool adds_ac = std::binary_search(tree.edges.begin(), tree.edges.end(), ac);
  std::size_t path_edges = 0;
  for (const auto& p : pp.paths) path_edges += p.size() - 1;
  const std::size_t l_oracle = oracle_min_spanning_tree_extra_leaves(net);
  const std::size_t t_oracle = oracle_min_attachments(net);
  const std::size_t attached = tree_based_completion(net).attached_to.size();
  const double ms = ms_since(t0);

  const bool ok = d.u_gn == 2 && d.x_size == 1 && d.p == 1 && d.l == 1 && d.t == 1 && l_oracle == 1 &&
                  t_oracle == 1 && attached == 1 && pp.size() == 2 && is_path_partition(net, pp) && adds_ac &&
                  tree.edges.size() == path_edges + 1 && tree.leaves_outside(net).size() == 1 &&
                  ms < kFixtureBudgetMs;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "u_gn=%zu |X|=%zu p=%zu l=%zu(oracle %zu) t=%zu(oracle %zu, attached %zu) paths=%zu "
                "edge(a,c)=%s extra leaves=%zu, %.1f ms",
                d.u_gn, d.x_size, d.p, d.l, l_oracle, d.t, t_oracle, attached, pp.size(), adds_ac ? "yes" : "no",
                tree.leaves_outside(net).size(), ms);
  report(1, ok, "one-leaf fixture: u(G_N)=2, p=l=t=1, two paths, spanning tree via (a,c)", buf);
}

void linked_counterexample() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto net = fixture("linked_not_tree_based.edges");
  const bool tb = is_tree_based(net).tree_based;
  const std::size_t paths = vertex_disjoint_paths(net).size();
  const std::size_t paths_oracle = oracle_min_path_partition(net);
  const std::size_t anti = max_antichain(net).antichain.size();
  const std::size_t anti_oracle = oracle_max_antichain(net);
  const bool prop = has_antichain_to_leaf_property(net, PropertyMode::Exhaustive).holds;
  const double ms = ms_since(t0);
  const bool ok = !tb && paths == 4 && paths_oracle == 4 && anti == 3 && anti_oracle == 3 && prop &&
                  ms < kFixtureBudgetMs;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "tree-based=%s min paths=%zu(oracle %zu) max antichain=%zu(oracle %zu) property=%s, %.1f ms",
                tb ? "yes" : "no", paths, paths_oracle, anti, anti_oracle, prop ? "holds" : "fails", ms);
  report(2, ok, "antichain-to-leaf counterexample: not tree-based, 4 paths, antichain 3, property holds", buf);
}

void saturation_equivalence() {
  std::size_t disagreements = 0, saturated = 0;
  const auto nets = sample(kSaturationSamples, 6, 4, SIZE_MAX, false, 0);
  for (const auto& net : nets) {
    const bool sat = reticulation_saturating(net).saturating;
    saturated += sat;
    if (sat == find_rr_path(net).has_value()) ++disagreements;
  }
  report(3, disagreements == 0 && nets.size() >= kSaturationSamples,
         "reticulation-saturating matching of Z_N <=> no maximal rr path",
         std::to_string(nets.size()) + " networks (<=6 leaves, <=4 reticulations), " + std::to_string(saturated) +
             " saturated, " + std::to_string(disagreements) + " disagreements");
}

void characterisation_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto nets = sample(kEquivalenceSamples, 5, 4, kEquivalenceMaxVertices, false, 10000);
  std::size_t disagreements = 0, path_cover_checked = 0, negatives = 0, witness_failures = 0;
  for (const auto& net : nets) {
    const bool by_trees = oracle_tree_based(net);
    const bool by_paths = check_path_partition_characterisation(net);
    const bool by_matching = max_matching(build_gn(net)).size() == net.vertex_count() - net.leaf_count();
    const auto decided = is_tree_based(net);
    bool agree = by_trees == by_paths && by_paths == by_matching && by_matching == decided.tree_based;
    if (net.vertex_count() <= kPathCoverMaxVertices) {
      ++path_cover_checked;
      agree = agree && (!oracle_path_cover_violation(net).has_value() == by_trees);
    }
    if (!decided.tree_based) {
      ++negatives;
      const auto& f = std::get<FailureCertificate>(decided.certificate);
      if (!(std::set<VertexId>(f.u1.begin(), f.u1.end()).size() > std::set<VertexId>(f.u2.begin(), f.u2.end()).size() &&
            oracle_traversal_conditions(net, f.u1, f.u2)))
        ++witness_failures;
    }
    disagreements += !agree;
  }
  const double ms = ms_since(t0);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%zu networks (|V|<=%zu, %zu not tree-based), path-cover check on %zu with |V|<=%zu, "
                "%zu disagreements, %zu bad (U1,U2) witnesses, %.0f ms (budget %.0f s)",
                nets.size(), kEquivalenceMaxVertices, negatives, path_cover_checked, kPathCoverMaxVertices,
                disagreements, witness_failures, ms, kEquivalenceBudgetMs / 1000.0);
  report(4, disagreements == 0 && witness_failures == 0 && ms < kEquivalenceBudgetMs && path_cover_checked > 0,
         "spanning-tree / path-partition / G_N matching / path-cover characterisations agree", buf);
}

void index_equality() {
  // In bounds for every oracle: |V| <= 16 and at most 3 reticulations.
  const auto nets = sample(600, 6, 3, 16, false, 20000);
  std::size_t disagreements = 0, positive = 0;
  for (const auto& net : nets) {
    const auto fast = deviation_indices(net);
    const std::size_t l = oracle_min_spanning_tree_extra_leaves(net);
    const std::size_t p = oracle_min_path_partition(net) - net.leaf_count();
    const std::size_t t = oracle_min_attachments(net);
    const std::size_t fast_p = fast.u_gn - net.leaf_count();
    disagreements += !(l == p && p == t && t == fast_p && fast.l == l && fast.t == t);
    positive += fast_p > 0;
  }
  report(5, disagreements == 0, "oracle l = oracle p = oracle t = u(G_N) - |X|",
         std::to_string(nets.size()) + " networks (|V|<=16, <=3 reticulations, " + std::to_string(positive) +
             " with positive index), " + std::to_string(disagreements) + " disagreements");
}

void temporal_equivalence() {
  const auto nets = sample(kTemporalSamples, 5, 5, kTemporalMaxVertices, true, 30000);
  std::size_t disagreements = 0, negatives = 0, bad_witness = 0;
  for (const auto& net : nets) {
    const bool tb = is_tree_based(net).tree_based;
    const bool prop = has_antichain_to_leaf_property(net, PropertyMode::Exhaustive).holds;
    disagreements += tb != prop;
    if (!tb) {
      ++negatives;
      const Antichain u = temporal_violating_antichain(net);
      if (!is_antichain(net, u.vertices) || antichain_to_leaf(net, u).linked ||
          oracle_disjoint_paths_to_leaves(net, u.vertices))
        ++bad_witness;
    }
  }
  report(6, disagreements == 0 && bad_witness == 0 && negatives > 0 && nets.size() >= kTemporalSamples,
         "temporal networks: tree-based <=> antichain-to-leaf property; constructed antichain violates it",
         std::to_string(nets.size()) + " temporal networks (|V|<=16, " + std::to_string(negatives) +
             " not tree-based), " + std::to_string(disagreements) + " disagreements, " +
             std::to_string(bad_witness) + " bad violating antichains");
}

void completion_soundness() {
  const auto nets = sample(kCompletionSamples, 12, 12, SIZE_MAX, false, 40000);
  std::size_t failures_here = 0, oracle_checked = 0, attached_total = 0;
  for (const auto& net : nets) {
    const auto before = deviation_indices(net);
    const auto c = tree_based_completion(net);
    const auto after = deviation_indices(c.network);
    bool ok = is_tree_based(c.network).tree_based && c.attached_to.size() == before.t &&
              after.l + after.p + after.t == 0;
    if (net.vertex_count() <= 16 && net.reticulation_count() <= 3) {
      ++oracle_checked;
      ok = ok && c.attached_to.size() == oracle_min_attachments(net);
    }
    attached_total += c.attached_to.size();
    failures_here += !ok;
  }
  report(7, failures_here == 0, "completion is tree-based, attaches exactly t(N) leaves, indices then zero",
         std::to_string(nets.size()) + " networks (" + std::to_string(oracle_checked) +
             " also against the attachment oracle, " + std::to_string(attached_total) + " leaves attached), " +
             std::to_string(failures_here) + " failures");
}

struct BenchRun {
  std::size_t vertices = 0;
  double ms = 0;
};

std::vector<BenchRun> bench_in_process() {
  std::vector<BenchRun> out;
  for (std::size_t k : {kSmallBench, kLargeBench}) {
    const auto net = generate({k, k, 1});
    std::vector<double> times;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      const GnAnalysis a = analyse_gn(net);
      (void)deviation_from(net, a);
      (void)spanning_tree_from(net, a.partition);
      (void)tree_based_completion(net);
      times.push_back(ms_since(t0));
    }
    std::sort(times.begin(), times.end());
    out.push_back({net.vertex_count(), times[1]});
  }
  return out;
}

std::vector<BenchRun> bench_cli(const std::string& cli) {
  const std::string cmd = "\"" + cli + "\" bench --json --repeat 3 --seed 1 --leaves " + std::to_string(kSmallBench) +
                          " " + std::to_string(kLargeBench) + " --retics " + std::to_string(kSmallBench) + " " +
                          std::to_string(kLargeBench);
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot run " + cmd);
  std::string text;
  char buf[4096];
  while (std::size_t got = fread(buf, 1, sizeof buf, pipe)) text.append(buf, got);
  if (pclose(pipe) != 0) throw std::runtime_error("bench exited with an error");
  const auto report_json = nlohmann::json::parse(text);
  std::vector<BenchRun> out;
  for (const auto& run : report_json.at("result").at("runs"))
    out.push_back({run.at("vertices").get<std::size_t>(), run.at("pipeline_ms_median").get<double>()});
  return out;
}

void performance(const std::string& cli) {
  std::vector<BenchRun> runs;
  std::string source = cli.empty() ? "in-process" : "tbnet bench";
  try {
    runs = cli.empty() ? bench_in_process() : bench_cli(cli);
  } catch (const std::exception& e) {
    report(8, false, "indices pipeline scales subquadratically", e.what());
    return;
  }
  const bool shape = runs.size() == 2;
  const double ratio = shape && runs[0].ms > 0 ? runs[1].ms / runs[0].ms : 0;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s: |V|=%zu %.1f ms, |V|=%zu %.1f ms, ratio %.1fx (limits %.0f ms, %.0fx)",
                source.c_str(), shape ? runs[0].vertices : 0, shape ? runs[0].ms : 0,
                shape ? runs[1].vertices : 0, shape ? runs[1].ms : 0, ratio, kLargeBudgetMs, kMaxTimeRatio);
  report(8, shape && runs[1].ms < kLargeBudgetMs && ratio < kMaxTimeRatio,
         "indices pipeline at 10^5 vertices under budget, growth subquadratic", buf);
}

void round_trips() {
  const auto nets = sample(kRoundTripSamples, 20, 20, SIZE_MAX, false, 50000);
  std::size_t enewick_bad = 0, edgelist_bad = 0;
  for (const auto& net : nets) {
    const std::string text = serialize_enewick(net);
    const auto back = parse_enewick(text);
    enewick_bad += !isomorphic(net, back);
    edgelist_bad += !isomorphic(net, parse_edgelist(serialize_edgelist(net)));
  }
  report(9, enewick_bad == 0 && edgelist_bad == 0, "eNewick and edge-list round-trips are isomorphism-exact",
         std::to_string(nets.size()) + " networks (<=20 leaves, <=20 reticulations), " +
             std::to_string(enewick_bad) + " eNewick and " + std::to_string(edgelist_bad) + " edge-list failures");
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--cli" && i + 1 < argc) cli = argv[++i];

  const std::vector<std::function<void()>> criteria = {
      one_leaf_reproduction, linked_counterexample, saturation_equivalence, characterisation_suite,
      index_equality,        temporal_equivalence,  completion_soundness,   [&] { performance(cli); },
      round_trips};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, "criterion raised", e.what());
    }
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
