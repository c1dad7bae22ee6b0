#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace causalkit {

/// Directed acyclic graph over named variables. An edge (cause, effect) states
/// that `cause` directly influences `effect`. Instances are immutable once
/// built and are validated on construction: names are well formed and unique,
/// there are no self-loops or duplicate edges, and the graph is acyclic.
class CausalGraph {
 public:
  using NodeId = std::size_t;
  using Edge = std::pair<std::string, std::string>;

  CausalGraph() = default;

  /// Throws Error{Syntax} for malformed names, {InvalidArgument} for repeated
  /// node names, {UnknownNode} for dangling edge endpoints, {DuplicateEdge}
  /// and {Cycle} (self-loops included).
  static CausalGraph create(std::vector<std::string> nodes,
                            const std::vector<Edge>& edges);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& nodes() const noexcept { return names_; }
  /// Edges in insertion order.
  std::vector<Edge> edges() const;
  std::size_t edge_count() const noexcept { return edge_list_.size(); }

  bool contains(std::string_view name) const;
  /// Throws Error{UnknownNode}.
  NodeId id(std::string_view name) const;
  const std::string& name(NodeId id) const { return names_.at(id); }

  const std::vector<NodeId>& parents(NodeId v) const { return parents_.at(v); }
  const std::vector<NodeId>& children(NodeId v) const { return children_.at(v); }
  bool has_edge(NodeId cause, NodeId effect) const;

  /// Copy of this graph with every edge leaving `v` deleted.
  CausalGraph without_edges_out_of(NodeId v) const;

  /// Same node sequence and same edge set (edge order is irrelevant).
  friend bool operator==(const CausalGraph& a, const CausalGraph& b);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::pair<NodeId, NodeId>> edge_list_;
  std::vector<std::vector<NodeId>> parents_;
  std::vector<std::vector<NodeId>> children_;
};

/// True when `name` can be used as a node name: non-empty, no whitespace, and
/// none of "->", '#', ','.
bool is_valid_node_name(std::string_view name);

/// Parses the line-oriented edge-list format: `A -> B` declares an edge, a
/// bare name declares a node, `#` starts a comment, blank lines are skipped.
/// Nodes are declared in order of first appearance.
CausalGraph parse_graph(std::string_view text);

/// Inverse of parse_graph: every node as a bare line, then every edge.
std::string render_graph(const CausalGraph& g);

/// Kahn's algorithm; among ready nodes the earliest-declared goes first.
std::vector<std::string> topological_order(const CausalGraph& g);

/// Strict ancestors / descendants of `v` (v excluded), in declaration order.
std::vector<std::string> ancestors(const CausalGraph& g, std::string_view v);
std::vector<std::string> descendants(const CausalGraph& g, std::string_view v);

/// d-separation of x and y given z, decided by active-trail reachability.
/// Throws Error{UnknownNode} and Error{Overlap} (x or y in z, or x == y).
bool d_separated(const CausalGraph& g, std::string_view x, std::string_view y,
                 std::span<const std::string> z);

using Path = std::vector<std::string>;

inline constexpr std::size_t kMaxPathEnumerationNodes = 64;

/// All simple undirected paths from t to y whose first edge points into t,
/// sorted lexicographically by node-name sequence. Graphs larger than
/// kMaxPathEnumerationNodes are rejected with Error{GraphTooLarge}.
std::vector<Path> backdoor_paths(const CausalGraph& g, std::string_view t,
                                 std::string_view y);

/// Backdoor-adjusted identification result for the effect of T on Y.
struct Estimand {
  std::string treatment;
  std::string outcome;
  std::vector<std::string> adjustment_set;
  /// "If U→{T} and U→Y then P(Y|T,Z...,U) = P(Y|T,Z...)"
  std::string assumption_text;
};

std::string unconfoundedness_assumption(std::string_view treatment,
                                        std::string_view outcome,
                                        std::span<const std::string> adjustment);

/// Backdoor criterion: no member of z descends from t, and z d-separates t
/// from y once the edges leaving t are removed.
bool satisfies_backdoor(const CausalGraph& g, std::string_view t,
                        std::string_view y, std::span<const std::string> z);

struct IdentifyOptions {
  std::size_t max_adjustment_size = 8;
};

/// Smallest adjustment set satisfying the backdoor criterion. Candidates are
/// searched by increasing size; among equal sizes the lexicographically first
/// set of (sorted) names wins. Throws NoCausalPath when y does not descend from
/// t and NoValidAdjustmentSet when nothing up to max_adjustment_size works.
Estimand identify_backdoor(const CausalGraph& g, std::string_view t,
                           std::string_view y, const IdentifyOptions& options = {});

}  // namespace causalkit
