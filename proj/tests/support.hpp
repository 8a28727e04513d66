#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "tbnet/tbnet.hpp"
#include "tbnet/testkit/generator.hpp"

namespace tbtest {

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(TBNET_DATA_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline tbnet::PhyloNetwork fixture(const std::string& name) {
  const std::string text = read_fixture(name);
  return name.ends_with(".edges") ? tbnet::parse_edgelist(text) : tbnet::parse_enewick(text);
}

inline tbnet::VertexId id(const tbnet::PhyloNetwork& net, std::string_view name) {
  auto v = net.find(name);
  if (!v) throw std::out_of_range("no vertex named " + std::string(name));
  return *v;
}

inline std::vector<tbnet::VertexId> ids(const tbnet::PhyloNetwork& net, std::initializer_list<std::string_view> names) {
  std::vector<tbnet::VertexId> out;
  for (auto n : names) out.push_back(id(net, n));
  return out;
}

inline std::vector<std::string> names(const tbnet::PhyloNetwork& net, const std::vector<tbnet::VertexId>& vs) {
  std::vector<std::string> out;
  for (auto v : vs) out.emplace_back(net.name(v));
  return out;
}

/// Seeded networks of varied shape. Leaves 1..max_leaves, reticulations
/// 0..max_retics; one-leaf shapes that cannot exist are skipped.
inline std::vector<tbnet::PhyloNetwork> sample(std::size_t count, std::size_t max_leaves, std::size_t max_retics,
                                               std::uint64_t seed0 = 0, std::size_t max_vertices = SIZE_MAX,
                                               bool temporal_only = false) {
  std::vector<tbnet::PhyloNetwork> out;
  for (std::uint64_t s = seed0; out.size() < count; ++s) {
    const std::size_t leaves = 1 + s % max_leaves;
    const std::size_t retics = (s / max_leaves) % (max_retics + 1);
    if (leaves == 1 && retics > 0 && retics < 3) continue;
    if (2 * leaves + 2 * retics - 1 > max_vertices) continue;
    try {
      out.push_back(tbnet::testkit::generate({leaves, retics, s, temporal_only, 5000}));
    } catch (const tbnet::testkit::GenerationError&) {
      // Some shapes have no temporal networks at all, e.g. two leaves with
      // one reticulation.
    }
  }
  return out;
}

}  // namespace tbtest
