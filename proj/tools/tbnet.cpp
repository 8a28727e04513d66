// tbnet: command-line front end.
//
// Exit codes: 0 success / positive answer, 1 negative answer (not
// tree-based, property fails, set not linked, not temporal), 2 input error.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tbnet/tbnet.hpp"
#include "tbnet/testkit/generator.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace tbnet;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

enum class Format { Auto, Enewick, Edgelist };

Format infer_format(const std::string& path, Format requested) {
  if (requested != Format::Auto) return requested;
  const std::string ext = std::filesystem::path(path).extension().string();
  if (ext == ".edges" || ext == ".el" || ext == ".txt") return Format::Edgelist;
  return Format::Enewick;
}

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << contents;
}

struct Options {
  std::string input = "-";
  Format format = Format::Auto;
  bool json_out = false;
  std::string dot_path;
  std::string out_path;
};

struct Loaded {
  PhyloNetwork net;
  std::string digest;
  std::vector<std::string> names;
};

Loaded load(const Options& o) {
  const std::string text = read_input(o.input);
  const Format f = infer_format(o.input, o.format);
  try {
    PhyloNetwork net = f == Format::Edgelist ? parse_edgelist(text) : parse_enewick(text);
    auto names = display_names(net);
    return {std::move(net), fnv1a64(text), std::move(names)};
  } catch (const ParseError& e) {
    throw InputError(o.input + ":" + e.what());
  } catch (const ValidationError& e) {
    throw InputError(o.input + ": invalid network: " + e.report().summary());
  }
}

/// Collects the payload and prints either JSON or a short text summary.
class Report {
 public:
  Report(std::string command, const Options& o) : command_(std::move(command)), opts_(o) {}

  json& result() { return result_; }
  void line(const std::string& s) { text_ += s + "\n"; }
  void set_digest(std::string d) { digest_ = std::move(d); }

  void emit(double elapsed_ms) const {
    if (opts_.json_out) {
      json env;
      env["tool"] = "tbnet";
      env["version"] = kVersion;
      env["command"] = command_;
      env["input_digest"] = digest_;
      env["timing_ms"] = elapsed_ms;
      env["result"] = result_;
      std::cout << env.dump(2) << "\n";
    } else {
      std::cout << text_;
    }
  }

 private:
  std::string command_;
  const Options& opts_;
  std::string digest_;
  json result_ = json::object();
  std::string text_;
};

json names_of(const Loaded& in, const std::vector<VertexId>& vs) {
  json a = json::array();
  for (VertexId v : vs) a.push_back(in.names[static_cast<std::size_t>(v)]);
  return a;
}

json edges_of(const std::vector<std::string>& names, const std::vector<Edge>& es) {
  json a = json::array();
  for (const Edge& e : es)
    a.push_back({names[static_cast<std::size_t>(e.tail)], names[static_cast<std::size_t>(e.head)]});
  return a;
}

std::string join(const json& names, const char* sep = " ") {
  std::string s;
  for (const auto& n : names) {
    if (!s.empty()) s += sep;
    s += n.get<std::string>();
  }
  return s;
}

json network_summary(const PhyloNetwork& net) {
  return {{"vertices", net.vertex_count()},
          {"edges", net.edge_count()},
          {"leaves", net.leaf_count()},
          {"reticulations", net.reticulation_count()}};
}

void maybe_dot(const Options& o, const PhyloNetwork& net, const DotOverlay& overlay) {
  if (!o.dot_path.empty()) write_file(o.dot_path, export_dot(net, overlay));
}

// ---------------------------------------------------------------------------

int cmd_check(const Options& o, Report& rep) {
  const Loaded in = load(o);
  rep.set_digest(in.digest);
  const TreeBasedResult r = is_tree_based(in.net);
  json& res = rep.result();
  res["network"] = network_summary(in.net);
  res["tree_based"] = r.tree_based;
  DotOverlay overlay;
  if (const auto* base = std::get_if<BaseTreeCertificate>(&r.certificate)) {
    res["certificate"] = {{"type", "base_tree"}, {"edges", edges_of(in.names, base->tree.edges)}};
    overlay.base_tree = base->tree.edges;
    rep.line("tree-based: yes");
    rep.line("base tree edges: " + std::to_string(base->tree.edges.size()));
  } else {
    const auto& f = std::get<FailureCertificate>(r.certificate);
    res["certificate"] = {{"type", "rr_path"},
                          {"reticulations", names_of(in, f.path.reticulations)},
                          {"tree_vertices", names_of(in, f.path.tree_vertices)},
                          {"q", in.names[static_cast<std::size_t>(f.q)]},
                          {"q_prime", in.names[static_cast<std::size_t>(f.q_prime)]},
                          {"u1", names_of(in, f.u1)},
                          {"u2", names_of(in, f.u2)}};
    overlay.marked = f.u1;
    overlay.marked_secondary = f.u2;
    rep.line("tree-based: no");
    rep.line("rr path reticulations: " + join(res["certificate"]["reticulations"]));
    rep.line("U1: " + join(res["certificate"]["u1"]) + "  U2: " + join(res["certificate"]["u2"]));
  }
  maybe_dot(o, in.net, overlay);
  return r.tree_based ? kExitOk : kExitNegative;
}

int cmd_indices(const Options& o, Report& rep) {
  const Loaded in = load(o);
  rep.set_digest(in.digest);
  const DeviationReport d = deviation_indices(in.net);
  rep.result() = {{"l", d.l}, {"p", d.p}, {"t", d.t}, {"u_gn", d.u_gn}, {"x_size", d.x_size}, {"d", d.d}};
  rep.line("l=" + std::to_string(d.l) + " p=" + std::to_string(d.p) + " t=" + std::to_string(d.t) +
           " u_gn=" + std::to_string(d.u_gn) + " x_size=" + std::to_string(d.x_size) + " d=" + std::to_string(d.d));
  return kExitOk;
}

int cmd_paths(const Options& o, Report& rep) {
  const Loaded in = load(o);
  rep.set_digest(in.digest);
  const PathPartition pp = vertex_disjoint_paths(in.net);
  json paths = json::array();
  for (const auto& p : pp.paths) {
    paths.push_back(names_of(in, p));
    rep.line(join(paths.back()));
  }
  rep.result() = {{"count", pp.size()}, {"paths", paths}};
  DotOverlay overlay;
  overlay.paths = pp.paths;
  maybe_dot(o, in.net, overlay);
  return kExitOk;
}

int cmd_spanning_tree(const Options& o, Report& rep) {
  const Loaded in = load(o);
  rep.set_digest(in.digest);
  const SpanningTree tree = rooted_spanning_tree(in.net);
  const auto outside = tree.leaves_outside(in.net);
  rep.result() = {{"edges", edges_of(in.names, tree.edges)},
                  {"leaves_outside_x", names_of(in, outside)},
                  {"l", outside.size()}};
  for (const Edge& e : tree.edges)
    rep.line(in.names[static_cast<std::size_t>(e.tail)] + " " + in.names[static_cast<std::size_t>(e.head)]);
  rep.line("leaves outside X: " + std::to_string(outside.size()));
  DotOverlay overlay;
  overlay.base_tree = tree.edges;
  overlay.marked = outside;
  maybe_dot(o, in.net, overlay);
  return kExitOk;
}

int cmd_complete(const Options& o, Report& rep) {
  const Loaded in = load(o);
  rep.set_digest(in.digest);
  const Completion c = tree_based_completion(in.net);
  const TreeBasedResult check = is_tree_based(c.network);
  if (!check.tree_based) throw std::logic_error("completed network is not tree-based");
  const std::string text = serialize_enewick(c.network);
  const auto out_names = display_names(c.network);
  json leaves = json::array();
  for (VertexId v : c.new_leaves) leaves.push_back(out_names[static_cast<std::size_t>(v)]);
  rep.result() = {{"attachments", c.attached_to.size()},
                  {"attached_edges", edges_of(in.names, c.attached_to)},
                  {"new_leaves", leaves},
                  {"enewick", text},
                  {"tree_based", true}};
  if (!o.out_path.empty()) write_file(o.out_path, text + "\n");
  rep.line(text);
  rep.line("attachments: " + std::to_string(c.attached_to.size()));

  DotOverlay overlay;
  overlay.base_tree = std::get<BaseTreeCertificate>(check.certificate).tree.edges;
  for (VertexId leaf : c.new_leaves) overlay.attached.push_back({c.network.parents(leaf)[0], leaf});
  maybe_dot(o, c.network, overlay);
  return kExitOk;
}

struct AntichainOptions {
  std::string set;
  bool max = false;
  bool check_property = false;
  std::string mode = "auto";
  std::size_t bound = 18;
};

std::vector<VertexId> parse_vertex_set(const Loaded& in, const std::string& spec) {
  std::vector<VertexId> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    auto it = std::find(in.names.begin(), in.names.end(), tok);
    if (it == in.names.end()) throw InputError("unknown vertex '" + tok + "'");
    out.push_back(static_cast<VertexId>(it - in.names.begin()));
  }
  if (out.empty()) throw InputError("--set needs at least one vertex");
  return out;
}

int cmd_antichain(const Options& o, const AntichainOptions& a, Report& rep) {
  const Loaded in = load(o);
  rep.set_digest(in.digest);
  json& res = rep.result();
  DotOverlay overlay;
  int code = kExitOk;

  if (!a.set.empty()) {
    auto members = parse_vertex_set(in, a.set);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (!is_antichain(in.net, members)) throw InputError("the given vertices do not form an antichain");
    const Antichain ac{members};
    const LeafLinkage link = antichain_to_leaf(in.net, ac);
    res["mode"] = "set";
    res["antichain"] = names_of(in, members);
    res["linked"] = link.linked;
    json paths = json::array();
    if (link.witness)
      for (const auto& p : link.witness->paths) {
        paths.push_back(names_of(in, p));
        overlay.paths.push_back(p);
      }
    res["paths"] = paths;
    overlay.marked = members;
    rep.line(std::string("linked to leaves: ") + (link.linked ? "yes" : "no"));
    for (const auto& p : paths) rep.line("  " + join(p));
    code = link.linked ? kExitOk : kExitNegative;
  } else if (a.max) {
    const MaxAntichain m = max_antichain(in.net);
    json chains = json::array();
    for (const auto& c : m.chains) chains.push_back(names_of(in, c));
    res["mode"] = "max";
    res["size"] = m.antichain.size();
    res["antichain"] = names_of(in, m.antichain.vertices);
    res["chains"] = chains;
    overlay.marked = m.antichain.vertices;
    rep.line("maximum antichain (" + std::to_string(m.antichain.size()) + "): " + join(res["antichain"]));
  } else {
    PropertyMode mode = PropertyMode::Exhaustive;
    if (a.mode == "temporal" || (a.mode == "auto" && is_temporal(in.net).temporal)) mode = PropertyMode::TemporalShortcut;
    AntichainPropertyResult r;
    try {
      r = has_antichain_to_leaf_property(in.net, mode, a.bound);
    } catch (const SizeLimitError& e) {
      throw InputError(e.what());
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    res["mode"] = "property";
    res["method"] = mode == PropertyMode::Exhaustive ? "exhaustive" : "temporal";
    res["holds"] = r.holds;
    res["antichains_checked"] = r.antichains_checked;
    res["violating"] = r.violating ? names_of(in, r.violating->vertices) : json(nullptr);
    if (r.violating) overlay.marked = r.violating->vertices;
    rep.line(std::string("antichain-to-leaf property: ") + (r.holds ? "holds" : "fails"));
    if (r.violating) rep.line("violating antichain: " + join(res["violating"]));
    code = r.holds ? kExitOk : kExitNegative;
  }
  maybe_dot(o, in.net, overlay);
  return code;
}

int cmd_temporal(const Options& o, Report& rep) {
  const Loaded in = load(o);
  rep.set_digest(in.digest);
  const TemporalResult t = is_temporal(in.net);
  json& res = rep.result();
  res["temporal"] = t.temporal;
  if (t.map) {
    json ranks = json::object();
    for (std::size_t v = 0; v < in.names.size(); ++v) ranks[in.names[v]] = t.map->rank[v];
    res["ranks"] = ranks;
  } else {
    res["ranks"] = nullptr;
  }
  rep.line(std::string("temporal: ") + (t.temporal ? "yes" : "no"));
  if (t.map)
    for (std::size_t v = 0; v < in.names.size(); ++v) rep.line("  " + in.names[v] + " " + std::to_string(t.map->rank[v]));
  return t.temporal ? kExitOk : kExitNegative;
}

struct GenOptions {
  std::size_t leaves = 3;
  std::size_t retics = 1;
  std::uint64_t seed = 0;
  bool temporal = false;
  std::string out_format = "enewick";
};

int cmd_gen(const Options& o, const GenOptions& g, Report& rep) {
  testkit::GenSpec spec;
  spec.num_leaves = g.leaves;
  spec.num_reticulations = g.retics;
  spec.seed = g.seed;
  spec.temporal_only = g.temporal;
  PhyloNetwork net = [&] {
    try {
      return testkit::generate(spec);
    } catch (const testkit::GenerationError& e) {
      throw InputError(e.what());
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }();
  const std::string text = g.out_format == "edgelist" ? serialize_edgelist(net) : serialize_enewick(net) + "\n";
  rep.set_digest(fnv1a64(text));
  rep.result() = {{"network", network_summary(net)}, {"format", g.out_format}, {"text", text}};
  if (!o.out_path.empty()) {
    write_file(o.out_path, text);
  } else if (!o.json_out) {
    std::cout << text;
  }
  return kExitOk;
}

struct BenchOptions {
  std::vector<std::size_t> leaves{2500, 25000};
  std::vector<std::size_t> retics{2500, 25000};
  std::uint64_t seed = 1;
  int repeat = 3;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_bench(const BenchOptions& b, Report& rep) {
  if (b.leaves.size() != b.retics.size()) throw InputError("--leaves and --retics need the same number of values");
  if (b.repeat < 1) throw InputError("--repeat must be positive");
  json runs = json::array();
  std::string digest_src;
  for (std::size_t i = 0; i < b.leaves.size(); ++i) {
    testkit::GenSpec spec;
    spec.num_leaves = b.leaves[i];
    spec.num_reticulations = b.retics[i];
    spec.seed = b.seed;
    auto t0 = std::chrono::steady_clock::now();
    PhyloNetwork net = testkit::generate(spec);
    const double gen_ms = ms_since(t0);

    std::vector<double> totals;
    DeviationReport d;
    std::size_t tree_leaves_outside = 0, attachments = 0;
    for (int rpt = 0; rpt < b.repeat; ++rpt) {
      t0 = std::chrono::steady_clock::now();
      const GnAnalysis a = analyse_gn(net);
      d = deviation_from(net, a);
      const SpanningTree tree = spanning_tree_from(net, a.partition);
      tree_leaves_outside = tree.leaves_outside(net).size();
      attachments = tree_based_completion(net).attached_to.size();
      totals.push_back(ms_since(t0));
    }
    std::sort(totals.begin(), totals.end());
    const double median = totals[totals.size() / 2];
    runs.push_back({{"leaves", b.leaves[i]},
                    {"reticulations", b.retics[i]},
                    {"vertices", net.vertex_count()},
                    {"edges", net.edge_count()},
                    {"generate_ms", gen_ms},
                    {"pipeline_ms_median", median},
                    {"pipeline_ms_min", totals.front()},
                    {"p", d.p},
                    {"u_gn", d.u_gn},
                    {"spanning_tree_extra_leaves", tree_leaves_outside},
                    {"attachments", attachments}});
    digest_src += std::to_string(b.leaves[i]) + "/" + std::to_string(b.retics[i]) + ";";
    char line[200];
    std::snprintf(line, sizeof line, "|V|=%zu  median %.1f ms  (min %.1f ms, generate %.1f ms)  p=%zu",
                  net.vertex_count(), median, totals.front(), gen_ms, d.p);
    rep.line(line);
  }
  rep.set_digest(fnv1a64(digest_src + std::to_string(b.seed)));
  rep.result() = {{"seed", b.seed}, {"repeat", b.repeat}, {"runs", runs}};
  return kExitOk;
}

void add_input_options(CLI::App* sub, Options& o, bool with_dot = true, bool with_out = false) {
  sub->add_option("input", o.input, "Network file ('-' for stdin)")->required();
  sub->add_option("--format", o.format, "Input format (default: from extension; .edges is an edge list)")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"enewick", Format::Enewick}, {"edgelist", Format::Edgelist}}));
  sub->add_flag("--json", o.json_out, "Print a JSON report");
  if (with_dot) sub->add_option("--dot", o.dot_path, "Write a DOT drawing to this path");
  if (with_out) sub->add_option("--out", o.out_path, "Write the resulting network to this path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree-based phylogenetic network analysis"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Options opts;
  AntichainOptions ac;
  GenOptions gen;
  BenchOptions bench;

  auto* check = app.add_subcommand("check", "Decide tree-basedness with a certificate");
  add_input_options(check, opts);
  auto* indices = app.add_subcommand("indices", "Deviation indices l, p, t");
  add_input_options(indices, opts, false);
  auto* paths = app.add_subcommand("paths", "Minimum vertex-disjoint path partition");
  add_input_options(paths, opts);
  auto* span = app.add_subcommand("spanning-tree", "Rooted spanning tree with fewest leaves outside X");
  add_input_options(span, opts);
  auto* complete = app.add_subcommand("complete", "Attach the fewest leaves that make the network tree-based");
  add_input_options(complete, opts, true, true);

  auto* anti = app.add_subcommand("antichain", "Antichain queries");
  add_input_options(anti, opts);
  auto* set_opt = anti->add_option("--set", ac.set, "Comma-separated vertex names; test linkage to leaves");
  auto* max_opt = anti->add_flag("--max", ac.max, "Maximum antichain and a matching chain partition");
  auto* prop_opt = anti->add_flag("--check-property", ac.check_property, "Antichain-to-leaf property");
  set_opt->excludes(max_opt)->excludes(prop_opt);
  max_opt->excludes(prop_opt);
  anti->add_option("--mode", ac.mode, "Property check method")
      ->check(CLI::IsMember({"auto", "exhaustive", "temporal"}));
  anti->add_option("--bound", ac.bound, "Vertex bound for the exhaustive check");

  auto* temporal = app.add_subcommand("temporal", "Temporal map, if one exists");
  add_input_options(temporal, opts, false);

  auto* g = app.add_subcommand("gen", "Generate a random network");
  g->add_option("--leaves", gen.leaves, "Number of leaves")->check(CLI::PositiveNumber);
  g->add_option("--retics", gen.retics, "Number of reticulations");
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_flag("--temporal", gen.temporal, "Only temporal networks (rejection sampling)");
  g->add_option("--out", opts.out_path, "Write the network to this path instead of stdout");
  g->add_option("--format", gen.out_format, "Output format")->check(CLI::IsMember({"enewick", "edgelist"}));
  g->add_flag("--json", opts.json_out, "Print a JSON report");

  auto* b = app.add_subcommand("bench", "Time the indices pipeline on generated networks");
  b->add_option("--leaves", bench.leaves, "Leaf counts, one per run");
  b->add_option("--retics", bench.retics, "Reticulation counts, one per run");
  b->add_option("--seed", bench.seed, "Random seed");
  b->add_option("--repeat", bench.repeat, "Timed repetitions per size");
  b->add_flag("--json", opts.json_out, "Print a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  if (anti->parsed() && ac.set.empty() && !ac.max && !ac.check_property) {
    std::cerr << "error: antichain needs one of --set, --max, --check-property\n";
    return kExitInput;
  }

  auto* sub = app.get_subcommands().front();
  Report rep(sub->get_name(), opts);
  const auto t0 = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (sub == check) code = cmd_check(opts, rep);
    else if (sub == indices) code = cmd_indices(opts, rep);
    else if (sub == paths) code = cmd_paths(opts, rep);
    else if (sub == span) code = cmd_spanning_tree(opts, rep);
    else if (sub == complete) code = cmd_complete(opts, rep);
    else if (sub == anti) code = cmd_antichain(opts, ac, rep);
    else if (sub == temporal) code = cmd_temporal(opts, rep);
    else if (sub == g) code = cmd_gen(opts, gen, rep);
    else if (sub == b) code = cmd_bench(bench, rep);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  rep.emit(ms_since(t0));
  return code;
}
