#include "causalkit/causal_graph.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <queue>
#include <set>

#include "causalkit/error.hpp"

namespace causalkit {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string ticked(std::string_view s) { return "'" + std::string(s) + "'"; }

std::vector<char> reach(const CausalGraph& g, CausalGraph::NodeId start, bool forward) {
  std::vector<char> seen(g.size(), 0);
  std::vector<CausalGraph::NodeId> stack{start};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto w : forward ? g.children(v) : g.parents(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

std::vector<std::string> names_of(const CausalGraph& g, const std::vector<char>& mask) {
  std::vector<std::string> out;
  for (CausalGraph::NodeId v = 0; v < g.size(); ++v) {
    if (mask[v]) out.push_back(g.name(v));
  }
  return out;
}

// Active-trail search (Koller & Friedman, "Reachable"). A trail may pass a
// non-collider only when it is unobserved, and a collider only when it or one
// of its descendants is observed.
bool d_separated_ids(const CausalGraph& g, CausalGraph::NodeId x, CausalGraph::NodeId y,
                     const std::vector<char>& observed) {
  const std::size_t n = g.size();

  std::vector<char> has_observed_descendant(observed);
  {
    std::vector<CausalGraph::NodeId> stack;
    for (CausalGraph::NodeId v = 0; v < n; ++v) {
      if (observed[v]) stack.push_back(v);
    }
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto p : g.parents(v)) {
        if (!has_observed_descendant[p]) {
          has_observed_descendant[p] = 1;
          stack.push_back(p);
        }
      }
    }
  }

  // up: arrived from a child; down: arrived from a parent.
  std::vector<char> visited_up(n, 0), visited_down(n, 0);
  std::vector<std::pair<CausalGraph::NodeId, bool>> frontier{{x, true}};
  while (!frontier.empty()) {
    const auto [v, up] = frontier.back();
    frontier.pop_back();
    auto& mark = up ? visited_up[v] : visited_down[v];
    if (mark) continue;
    mark = 1;
    if (v == y) return false;

    if (up) {
      if (observed[v]) continue;
      for (auto p : g.parents(v)) frontier.emplace_back(p, true);
      for (auto c : g.children(v)) frontier.emplace_back(c, false);
    } else {
      if (!observed[v]) {
        for (auto c : g.children(v)) frontier.emplace_back(c, false);
      }
      if (has_observed_descendant[v]) {
        for (auto p : g.parents(v)) frontier.emplace_back(p, true);
      }
    }
  }
  return true;
}

}  // namespace

bool is_valid_node_name(std::string_view name) {
  if (name.empty()) return false;
  if (name.find("->") != std::string_view::npos) return false;
  return std::none_of(name.begin(), name.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '#' || c == ',';
  });
}

CausalGraph CausalGraph::create(std::vector<std::string> nodes, const std::vector<Edge>& edges) {
  CausalGraph g;
  g.names_ = std::move(nodes);
  g.parents_.resize(g.names_.size());
  g.children_.resize(g.names_.size());
  for (NodeId v = 0; v < g.names_.size(); ++v) {
    const auto& name = g.names_[v];
    if (!is_valid_node_name(name)) fail(ErrorCode::Syntax, "invalid node name " + ticked(name));
    if (!g.index_.emplace(name, v).second) {
      fail(ErrorCode::InvalidArgument, "node " + ticked(name) + " declared twice");
    }
  }

  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& [cause, effect] : edges) {
    const NodeId a = g.id(cause);
    const NodeId b = g.id(effect);
    if (a == b) fail(ErrorCode::Cycle, "self-loop on " + ticked(cause));
    if (!seen.emplace(a, b).second) {
      fail(ErrorCode::DuplicateEdge, "duplicate edge " + cause + " -> " + effect);
    }
    g.edge_list_.emplace_back(a, b);
    g.children_[a].push_back(b);
    g.parents_[b].push_back(a);
  }
  for (auto& list : g.parents_) std::sort(list.begin(), list.end());
  for (auto& list : g.children_) std::sort(list.begin(), list.end());

  std::vector<std::size_t> indegree(g.size());
  for (NodeId v = 0; v < g.size(); ++v) indegree[v] = g.parents_[v].size();
  std::vector<NodeId> ready;
  for (NodeId v = 0; v < g.size(); ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::size_t emitted = 0;
  while (!ready.empty()) {
    const NodeId v = ready.back();
    ready.pop_back();
    ++emitted;
    for (auto c : g.children_[v]) {
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  if (emitted != g.size()) {
    for (NodeId v = 0; v < g.size(); ++v) {
      if (indegree[v] > 0) fail(ErrorCode::Cycle, "graph has a cycle through " + ticked(g.names_[v]));
    }
  }
  return g;
}

std::vector<CausalGraph::Edge> CausalGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_list_.size());
  for (const auto& [a, b] : edge_list_) out.emplace_back(names_[a], names_[b]);
  return out;
}

bool CausalGraph::contains(std::string_view name) const {
  return index_.find(std::string(name)) != index_.end();
}

CausalGraph::NodeId CausalGraph::id(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) fail(ErrorCode::UnknownNode, "unknown node " + ticked(name));
  return it->second;
}

bool CausalGraph::has_edge(NodeId cause, NodeId effect) const {
  const auto& kids = children_.at(cause);
  return std::binary_search(kids.begin(), kids.end(), effect);
}

CausalGraph CausalGraph::without_edges_out_of(NodeId v) const {
  CausalGraph g = *this;
  g.edge_list_.erase(std::remove_if(g.edge_list_.begin(), g.edge_list_.end(),
                                    [v](const auto& e) { return e.first == v; }),
                     g.edge_list_.end());
  for (auto c : g.children_[v]) {
    auto& ps = g.parents_[c];
    ps.erase(std::remove(ps.begin(), ps.end(), v), ps.end());
  }
  g.children_[v].clear();
  return g;
}

bool operator==(const CausalGraph& a, const CausalGraph& b) {
  if (a.names_ != b.names_) return false;
  auto sorted = [](std::vector<std::pair<CausalGraph::NodeId, CausalGraph::NodeId>> e) {
    std::sort(e.begin(), e.end());
    return e;
  };
  return sorted(a.edge_list_) == sorted(b.edge_list_);
}

CausalGraph parse_graph(std::string_view text) {
  std::vector<std::string> nodes;
  std::set<std::string, std::less<>> declared;
  std::vector<CausalGraph::Edge> edges;

  auto declare = [&](std::string_view name, std::size_t line_no) {
    if (!is_valid_node_name(name)) {
      fail(ErrorCode::Syntax, "line " + std::to_string(line_no) + ": invalid node name " + ticked(name));
    }
    if (declared.find(name) == declared.end()) {
      declared.emplace(name);
      nodes.emplace_back(name);
    }
  };

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto arrow = line.find("->");
    if (arrow == std::string_view::npos) {
      declare(line, line_no);
      continue;
    }
    const auto cause = trim(line.substr(0, arrow));
    const auto effect = trim(line.substr(arrow + 2));
    if (effect.find("->") != std::string_view::npos) {
      fail(ErrorCode::Syntax, "line " + std::to_string(line_no) + ": chained edges are not supported");
    }
    declare(cause, line_no);
    declare(effect, line_no);
    edges.emplace_back(std::string(cause), std::string(effect));
  }
  return CausalGraph::create(std::move(nodes), edges);
}

std::string render_graph(const CausalGraph& g) {
  std::string out;
  for (const auto& name : g.nodes()) out += name + "\n";
  for (const auto& [a, b] : g.edges()) out += a + " -> " + b + "\n";
  return out;
}

std::vector<std::string> topological_order(const CausalGraph& g) {
  std::vector<std::size_t> indegree(g.size());
  std::priority_queue<CausalGraph::NodeId, std::vector<CausalGraph::NodeId>, std::greater<>> ready;
  for (CausalGraph::NodeId v = 0; v < g.size(); ++v) {
    indegree[v] = g.parents(v).size();
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<std::string> order;
  order.reserve(g.size());
  while (!ready.empty()) {
    const auto v = ready.top();
    ready.pop();
    order.push_back(g.name(v));
    for (auto c : g.children(v)) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  return order;
}

std::vector<std::string> ancestors(const CausalGraph& g, std::string_view v) {
  return names_of(g, reach(g, g.id(v), false));
}

std::vector<std::string> descendants(const CausalGraph& g, std::string_view v) {
  return names_of(g, reach(g, g.id(v), true));
}

bool d_separated(const CausalGraph& g, std::string_view x, std::string_view y,
                 std::span<const std::string> z) {
  const auto xi = g.id(x);
  const auto yi = g.id(y);
  if (xi == yi) fail(ErrorCode::Overlap, "d-separation query needs two distinct nodes, got " + ticked(x) + " twice");
  std::vector<char> observed(g.size(), 0);
  for (const auto& name : z) {
    const auto zi = g.id(name);
    if (zi == xi || zi == yi) {
      fail(ErrorCode::Overlap, "conditioning set contains query node " + ticked(name));
    }
    observed[zi] = 1;
  }
  return d_separated_ids(g, xi, yi, observed);
}

std::vector<Path> backdoor_paths(const CausalGraph& g, std::string_view t, std::string_view y) {
  const auto ti = g.id(t);
  const auto yi = g.id(y);
  if (ti == yi) fail(ErrorCode::InvalidArgument, "treatment and outcome must differ");
  if (g.size() > kMaxPathEnumerationNodes) {
    fail(ErrorCode::GraphTooLarge, "path enumeration is limited to " +
                                       std::to_string(kMaxPathEnumerationNodes) + " nodes");
  }

  std::vector<std::vector<CausalGraph::NodeId>> neighbours(g.size());
  for (CausalGraph::NodeId v = 0; v < g.size(); ++v) {
    auto& nb = neighbours[v];
    nb = g.parents(v);
    nb.insert(nb.end(), g.children(v).begin(), g.children(v).end());
  }

  std::vector<Path> paths;
  std::vector<char> on_path(g.size(), 0);
  std::vector<CausalGraph::NodeId> current{ti};
  on_path[ti] = 1;

  std::function<void(CausalGraph::NodeId)> extend = [&](CausalGraph::NodeId v) {
    if (v == yi) {
      Path p;
      for (auto id : current) p.push_back(g.name(id));
      paths.push_back(std::move(p));
      return;
    }
    for (auto w : neighbours[v]) {
      if (on_path[w]) continue;
      on_path[w] = 1;
      current.push_back(w);
      extend(w);
      current.pop_back();
      on_path[w] = 0;
    }
  };

  for (auto p : g.parents(ti)) {
    on_path[p] = 1;
    current.push_back(p);
    extend(p);
    current.pop_back();
    on_path[p] = 0;
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

std::string unconfoundedness_assumption(std::string_view treatment, std::string_view outcome,
                                        std::span<const std::string> adjustment) {
  std::string given(treatment);
  for (const auto& z : adjustment) given += "," + z;
  const std::string y(outcome);
  return "If U→{" + std::string(treatment) + "} and U→" + y + " then P(" + y + "|" +
         given + ",U) = P(" + y + "|" + given + ")";
}

bool satisfies_backdoor(const CausalGraph& g, std::string_view t, std::string_view y,
                        std::span<const std::string> z) {
  const auto ti = g.id(t);
  const auto yi = g.id(y);
  const auto desc = reach(g, ti, true);
  std::vector<char> observed(g.size(), 0);
  for (const auto& name : z) {
    const auto zi = g.id(name);
    if (zi == ti || zi == yi || desc[zi]) return false;
    observed[zi] = 1;
  }
  return d_separated_ids(g.without_edges_out_of(ti), ti, yi, observed);
}

Estimand identify_backdoor(const CausalGraph& g, std::string_view t, std::string_view y,
                           const IdentifyOptions& options) {
  const auto ti = g.id(t);
  const auto yi = g.id(y);
  if (ti == yi) fail(ErrorCode::InvalidArgument, "treatment and outcome must differ");
  const auto desc = reach(g, ti, true);
  if (!desc[yi]) {
    fail(ErrorCode::NoCausalPath, "no directed path from " + ticked(t) + " to " + ticked(y));
  }

  std::vector<CausalGraph::NodeId> candidates;
  for (CausalGraph::NodeId v = 0; v < g.size(); ++v) {
    if (v != ti && v != yi && !desc[v]) candidates.push_back(v);
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](auto a, auto b) { return g.name(a) < g.name(b); });

  const CausalGraph backdoor_graph = g.without_edges_out_of(ti);
  const std::size_t max_size = std::min(options.max_adjustment_size, candidates.size());
  std::vector<char> observed(g.size(), 0);

  for (std::size_t k = 0; k <= max_size; ++k) {
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    for (;;) {
      std::fill(observed.begin(), observed.end(), 0);
      for (auto i : pick) observed[candidates[i]] = 1;
      if (d_separated_ids(backdoor_graph, ti, yi, observed)) {
        Estimand e;
        e.treatment = std::string(t);
        e.outcome = std::string(y);
        for (auto i : pick) e.adjustment_set.push_back(g.name(candidates[i]));
        e.assumption_text = unconfoundedness_assumption(t, y, e.adjustment_set);
        return e;
      }
      // next k-combination in lexicographic order
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == candidates.size() - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  fail(ErrorCode::NoValidAdjustmentSet,
       "no adjustment set of size <= " + std::to_string(options.max_adjustment_size) +
           " blocks every backdoor path from " + ticked(t) + " to " + ticked(y));
}

}  // namespace causalkit
