#pragma once

// Reference implementations used only by tests. None of them calls into the
// library routine it is used to check.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "causalkit/causal_graph.hpp"

namespace causalkit::testing {

/// Adjacency-matrix DAG with nodes named by index ("V0", "V1", ...).
struct SmallDag {
  std::size_t n = 0;
  std::vector<std::vector<char>> edge;  // edge[a][b]: a -> b

  CausalGraph to_graph() const;
  std::string name(std::size_t v) const { return "V" + std::to_string(v); }
};

/// Every labeled DAG on n nodes: each unordered pair is absent, a->b or b->a,
/// keeping only acyclic assignments.
std::vector<SmallDag> all_labeled_dags(std::size_t n);

/// Random DAG: random node order, each forward pair joined with probability p.
SmallDag random_dag(std::size_t n, double p, std::mt19937_64& rng);

/// Transitive closure by Floyd-Warshall: reach[a][b] iff a directed path a -> b.
std::vector<std::vector<char>> transitive_closure(const SmallDag& g);

/// d-separation via the moralized ancestral graph.
bool moral_d_separated(const SmallDag& g, std::size_t x, std::size_t y, const std::vector<char>& in_z);

/// Every simple undirected path from a to b (node index sequences).
std::vector<std::vector<std::size_t>> all_simple_paths(const SmallDag& g, std::size_t a, std::size_t b);

/// Path-blocking rule applied to one explicit path.
bool path_blocked(const SmallDag& g, const std::vector<std::size_t>& path, const std::vector<char>& in_z,
                  const std::vector<std::vector<char>>& closure);

/// Backdoor criterion decided by enumerating backdoor paths.
bool backdoor_by_paths(const SmallDag& g, std::size_t t, std::size_t y, const std::vector<char>& in_z);

/// Smallest size of a subset of non-descendants satisfying backdoor_by_paths,
/// or -1 when none exists.
int minimal_backdoor_size(const SmallDag& g, std::size_t t, std::size_t y);

/// Solves (X'X) b = X'y by Gauss-Jordan elimination with partial pivoting.
std::vector<double> normal_equations(const std::vector<std::vector<double>>& rows,
                                     const std::vector<double>& y);

/// Unpenalized logistic regression by iteratively reweighted least squares.
/// rows exclude the intercept column.
std::vector<double> irls_logistic(const std::vector<std::vector<double>>& rows,
                                  const std::vector<double>& y, int iterations = 50);

/// O(n * m) nearest neighbour by |q - p| with lowest-index ties.
std::vector<std::size_t> brute_nearest(const std::vector<double>& queries, const std::vector<double>& pool);

}  // namespace causalkit::testing
