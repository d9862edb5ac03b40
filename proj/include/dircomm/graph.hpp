#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "dircomm/error.hpp"
#include "dircomm/rng.hpp"

namespace dircomm {

using NodeId = std::uint32_t;
using Group = std::uint8_t;

inline constexpr Group other(Group g) { return static_cast<Group>(1 - g); }

struct Edge {
  NodeId source;
  NodeId target;
  auto operator<=>(const Edge&) const = default;
};

/// Block edge counts e_rs: edges from group r to group s. Real-valued counts
/// are allowed so mean-field predictions can use the same type.
template <class T>
struct BlockCounts {
  std::array<std::array<T, 2>, 2> e{};

  T& operator()(Group r, Group s) { return e[r][s]; }
  const T& operator()(Group r, Group s) const { return e[r][s]; }
  T total() const { return e[0][0] + e[0][1] + e[1][0] + e[1][1]; }
  /// Edges leaving group r.
  T out_of(Group r) const { return e[r][0] + e[r][1]; }
  /// Edges arriving at group s.
  T into(Group s) const { return e[0][s] + e[1][s]; }

  bool operator==(const BlockCounts&) const = default;
};

/// Directed simple graph on nodes 0..N-1 with fixed binary group labels.
///
/// In-neighbours of each node are stored in a vector (uniform sampling by
/// index); a single hash map from the (source, target) pair to the slot in that
/// vector gives O(1) expected membership tests and removals. Block edge counts
/// are maintained incrementally.
class LabeledDigraph {
 public:
  explicit LabeledDigraph(std::vector<Group> groups) : groups_(std::move(groups)) {
    require(groups_.size() >= 2, "graph needs at least 2 nodes");
    for (Group g : groups_) {
      require(g <= 1, "group labels must be 0 or 1");
      ++group_sizes_[g];
    }
    in_.resize(groups_.size());
  }

  std::size_t node_count() const { return groups_.size(); }
  Group group(NodeId i) const { return groups_.at(i); }
  std::span<const Group> groups() const { return groups_; }
  std::size_t group_size(Group g) const { return group_sizes_.at(g); }

  std::span<const NodeId> in_neighbors(NodeId i) const { return in_.at(i); }
  std::size_t in_degree(NodeId i) const { return in_.at(i).size(); }
  std::size_t edge_count() const { return slot_.size(); }
  const BlockCounts<std::size_t>& block_counts() const { return blocks_; }

  bool has_edge(NodeId source, NodeId target) const {
    return slot_.contains(key(source, target));
  }

  /// Adds source->target. Returns false if the edge already exists.
  bool add_edge(NodeId source, NodeId target) {
    check_node(source);
    check_node(target);
    require(source != target, "self-edges are not allowed");
    auto [it, inserted] = slot_.try_emplace(key(source, target), 0);
    if (!inserted) return false;
    auto& list = in_[target];
    it->second = static_cast<std::uint32_t>(list.size());
    list.push_back(source);
    ++blocks_(groups_[source], groups_[target]);
    return true;
  }

  /// Removes source->target. Returns false if the edge does not exist.
  bool remove_edge(NodeId source, NodeId target) {
    check_node(source);
    check_node(target);
    auto it = slot_.find(key(source, target));
    if (it == slot_.end()) return false;
    erase_slot(target, it->second);
    return true;
  }

  /// Removes the in-edge stored at `slot` of target's in-neighbour list and
  /// returns its source. The last entry moves into the freed slot.
  NodeId remove_in_edge_at(NodeId target, std::size_t slot) {
    check_node(target);
    require(slot < in_[target].size(), "in-edge slot out of range");
    return erase_slot(target, static_cast<std::uint32_t>(slot));
  }

  /// All edges sorted by (source, target).
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId t = 0; t < in_.size(); ++t)
      for (NodeId s : in_[t]) out.push_back({s, t});
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Throws if any structural invariant is broken. O(N + E).
  void check_invariants() const {
    BlockCounts<std::size_t> recount;
    std::size_t total = 0;
    for (NodeId t = 0; t < in_.size(); ++t) {
      const auto& list = in_[t];
      for (std::size_t k = 0; k < list.size(); ++k) {
        NodeId s = list[k];
        require(s != t, "invariant: self-edge present");
        auto it = slot_.find(key(s, t));
        require(it != slot_.end() && it->second == k, "invariant: slot index out of sync");
        ++recount(groups_[s], groups_[t]);
        ++total;
      }
    }
    require(total == slot_.size(), "invariant: duplicate or dangling edge entries");
    require(recount == blocks_, "invariant: block counts out of sync");
  }

 private:
  std::uint64_t key(NodeId source, NodeId target) const {
    return static_cast<std::uint64_t>(source) * groups_.size() + target;
  }

  void check_node(NodeId i) const {
    if (i >= groups_.size()) throw Error("node id " + std::to_string(i) + " out of range");
  }

  NodeId erase_slot(NodeId target, std::uint32_t slot) {
    auto& list = in_[target];
    NodeId source = list[slot];
    NodeId moved = list.back();
    list[slot] = moved;
    slot_[key(moved, target)] = slot;
    list.pop_back();
    slot_.erase(key(source, target));
    --blocks_(groups_[source], groups_[target]);
    return source;
  }

  std::vector<Group> groups_;
  std::array<std::size_t, 2> group_sizes_{};
  std::vector<std::vector<NodeId>> in_;
  std::unordered_map<std::uint64_t, std::uint32_t> slot_;
  BlockCounts<std::size_t> blocks_;
};

inline BlockCounts<std::size_t> block_edge_counts(const LabeledDigraph& g) { return g.block_counts(); }

/// Directed Erdos-Renyi graph: every ordered pair i != j carries an edge with
/// probability q; exactly n0 nodes get label 0, chosen uniformly at random.
template <std::uniform_random_bit_generator G>
LabeledDigraph new_erdos_renyi(std::size_t n0, std::size_t n1, double q, G& gen) {
  const std::size_t n = n0 + n1;
  require(n0 >= 1 && n1 >= 1, "both groups need at least one node");
  require(n >= 2, "graph needs at least 2 nodes");
  require(q > 0.0 && q < 1.0, "edge probability must lie in (0, 1)");
  const double lo = 2.0 / static_cast<double>(n);
  const double hi = 1.0 - lo;
  // The interval is empty for N <= 4; only enforce it when it exists.
  if (lo < hi) {
    require(q > lo && q < hi, "edge probability must satisfy 2/N < q < 1 - 2/N");
  }

  std::vector<NodeId> order(n);
  for (NodeId i = 0; i < n; ++i) order[i] = i;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t pick = k + uniform_below<std::size_t>(gen, n - k);
    std::swap(order[k], order[pick]);
  }
  std::vector<Group> groups(n, 1);
  for (std::size_t k = 0; k < n0; ++k) groups[order[k]] = 0;

  LabeledDigraph g(std::move(groups));
  for (NodeId t = 0; t < n; ++t)
    for (NodeId s = 0; s < n; ++s)
      if (s != t && bernoulli(gen, q)) g.add_edge(s, t);
  return g;
}

/// Uniform in-neighbour of i, or nullopt when i has no in-edges.
template <std::uniform_random_bit_generator G>
std::optional<NodeId> sample_in_edge(const LabeledDigraph& g, NodeId i, G& gen) {
  auto in = g.in_neighbors(i);
  if (in.empty()) return std::nullopt;
  return in[uniform_below<std::size_t>(gen, in.size())];
}

/// Uniform node j != i with no edge j->i, or nullopt when i is saturated.
/// Rejection sampling while in-degree <= N/2, complement enumeration above.
template <std::uniform_random_bit_generator G>
std::optional<NodeId> sample_non_in_edge(const LabeledDigraph& g, NodeId i, G& gen) {
  const std::size_t n = g.node_count();
  const std::size_t deg = g.in_degree(i);
  if (deg >= n - 1) return std::nullopt;

  NodeId j;
  if (2 * deg <= n) {
    do {
      j = uniform_below<NodeId>(gen, static_cast<NodeId>(n - 1));
      if (j >= i) ++j;
    } while (g.has_edge(j, i));
  } else {
    std::vector<NodeId> candidates;
    candidates.reserve(n - 1 - deg);
    for (NodeId k = 0; k < n; ++k)
      if (k != i && !g.has_edge(k, i)) candidates.push_back(k);
    j = candidates[uniform_below<std::size_t>(gen, candidates.size())];
  }
#ifdef DIRCOMM_INVARIANT_CHECKS
  require(j != i && !g.has_edge(j, i), "invariant: non-in-edge sample is an in-neighbour");
#endif
  return j;
}

// Edge-list snapshot: "# nodes=<N> groups=<g0,g1,...>" then "source target" lines.

inline void write_edge_list(std::ostream& os, const LabeledDigraph& g) {
  os << "# nodes=" << g.node_count() << " groups=";
  auto groups = g.groups();
  for (std::size_t i = 0; i < groups.size(); ++i) os << (i ? "," : "") << int(groups[i]);
  os << '\n';
  for (const Edge& e : g.edges()) os << e.source << ' ' << e.target << '\n';
}

inline LabeledDigraph read_edge_list(std::istream& is) {
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), "edge list: missing header");
  const std::string nodes_tag = "# nodes=";
  const std::string groups_tag = " groups=";
  auto gpos = line.find(groups_tag);
  require(line.rfind(nodes_tag, 0) == 0 && gpos != std::string::npos,
          "edge list: malformed header");
  std::size_t n = 0;
  try {
    n = std::stoul(line.substr(nodes_tag.size(), gpos - nodes_tag.size()));
  } catch (const std::exception&) {
    throw Error("edge list: malformed node count");
  }
  std::vector<Group> groups;
  std::stringstream labels(line.substr(gpos + groups_tag.size()));
  std::string tok;
  while (std::getline(labels, tok, ',')) {
    require(tok == "0" || tok == "1", "edge list: group labels must be 0 or 1");
    groups.push_back(static_cast<Group>(tok[0] - '0'));
  }
  require(groups.size() == n, "edge list: label count does not match nodes=");

  LabeledDigraph g(std::move(groups));
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    long long s = -1, t = -1;
    std::string rest;
    require(static_cast<bool>(ss >> s >> t) && !(ss >> rest),
            "edge list: bad line " + std::to_string(lineno));
    require(s >= 0 && t >= 0 && static_cast<std::size_t>(s) < n && static_cast<std::size_t>(t) < n,
            "edge list: node id out of range on line " + std::to_string(lineno));
    require(g.add_edge(static_cast<NodeId>(s), static_cast<NodeId>(t)),
            "edge list: duplicate edge on line " + std::to_string(lineno));
  }
  return g;
}

}  // namespace dircomm
