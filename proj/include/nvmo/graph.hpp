#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nvmo {

using Edge = std::pair<int, int>;  // (j, i): node i receives from node j

/// Fixed communication topology. Nodes are indexed 1..n.
struct Digraph {
  int n = 0;
  std::vector<Edge> edges;

  Digraph() = default;
  Digraph(int node_count, std::vector<Edge> edge_list) : n(node_count), edges(std::move(edge_list)) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    validate();
  }

  void validate() const {
    if (n < 1) throw std::invalid_argument("Digraph: node count must be at least 1");
    for (const Edge& e : edges) {
      if (e.first < 1 || e.first > n || e.second < 1 || e.second > n) {
        throw std::invalid_argument("Digraph: edge endpoint out of range 1..n");
      }
      if (e.first == e.second) throw std::invalid_argument("Digraph: self-loops are not allowed");
    }
  }
};

struct Assumption1Flags {
  bool balanced = false;
  bool strongly_connected = false;
  bool ok() const { return balanced && strongly_connected; }
};

/// Nodes j with an edge (j, i), i.e. whose estimates camera i receives.
inline std::vector<int> neighbors(const Digraph& g, int i) {
  if (i < 1 || i > g.n) throw std::invalid_argument("neighbors: node id out of range");
  std::vector<int> out;
  for (const Edge& e : g.edges) {
    if (e.second == i) out.push_back(e.first);
  }
  return out;
}

inline Assumption1Flags validate_assumption1(const Digraph& g) {
  std::vector<int> in_deg(g.n + 1, 0), out_deg(g.n + 1, 0);
  std::vector<std::vector<int>> fwd(g.n + 1), bwd(g.n + 1);
  for (const Edge& e : g.edges) {
    out_deg[e.first]++;
    in_deg[e.second]++;
    fwd[e.first].push_back(e.second);
    bwd[e.second].push_back(e.first);
  }
  Assumption1Flags flags;
  flags.balanced = true;
  for (int v = 1; v <= g.n; ++v) {
    if (in_deg[v] != out_deg[v]) flags.balanced = false;
  }
  auto reaches_all = [&](const std::vector<std::vector<int>>& adj) {
    std::vector<bool> seen(g.n + 1, false);
    std::queue<int> q;
    q.push(1);
    seen[1] = true;
    int count = 1;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int u : adj[v]) {
        if (!seen[u]) {
          seen[u] = true;
          ++count;
          q.push(u);
        }
      }
    }
    return count == g.n;
  };
  flags.strongly_connected = reaches_all(fwd) && reaches_all(bwd);
  return flags;
}

/// Undirected edge set of G_u, canonically ordered pairs (a < b).
inline std::vector<Edge> undirected_edges(const Digraph& g) {
  std::set<Edge> s;
  for (const Edge& e : g.edges) {
    s.insert({std::min(e.first, e.second), std::max(e.first, e.second)});
  }
  return {s.begin(), s.end()};
}

inline bool undirected_connected(const Digraph& g) {
  std::vector<std::vector<int>> adj(g.n + 1);
  for (const Edge& e : undirected_edges(g)) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  std::vector<bool> seen(g.n + 1, false);
  std::queue<int> q;
  q.push(1);
  seen[1] = true;
  int count = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int u : adj[v]) {
      if (!seen[u]) {
        seen[u] = true;
        ++count;
        q.push(u);
      }
    }
  }
  return count == g.n;
}

/// One spanning tree of G_u evaluated from a given root: the per-edge load
/// is the sum of root-path lengths d(i) over all nodes i whose path uses the
/// edge, and d_tilde is the worst edge load.
struct TreeReport {
  int root = 0;
  std::vector<Edge> tree_edges;          // canonical (a < b), sorted
  int d_tilde = 0;
  std::map<Edge, int> per_edge_load;
};

struct WResult {
  int w = 0;
  TreeReport witness;
};

namespace detail {

inline TreeReport evaluate_tree(int n, const std::vector<Edge>& tree, int root) {
  std::vector<std::vector<int>> adj(n + 1);
  for (const Edge& e : tree) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  std::vector<int> depth(n + 1, -1), parent(n + 1, 0);
  std::queue<int> q;
  q.push(root);
  depth[root] = 0;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int u : adj[v]) {
      if (depth[u] < 0) {
        depth[u] = depth[v] + 1;
        parent[u] = v;
        q.push(u);
      }
    }
  }
  TreeReport rep;
  rep.root = root;
  rep.tree_edges = tree;
  std::sort(rep.tree_edges.begin(), rep.tree_edges.end());
  for (const Edge& e : rep.tree_edges) rep.per_edge_load[e] = 0;
  for (int i = 1; i <= n; ++i) {
    for (int v = i; v != root; v = parent[v]) {
      const Edge e{std::min(v, parent[v]), std::max(v, parent[v])};
      rep.per_edge_load[e] += depth[i];
    }
  }
  rep.d_tilde = 0;
  for (const auto& [e, load] : rep.per_edge_load) rep.d_tilde = std::max(rep.d_tilde, load);
  return rep;
}

// Enumerates every spanning tree exactly once by recursive growth over the
// edge list: each edge is either added (if it joins two components) or
// excluded, with a remaining-edge-count prune.
inline void for_each_spanning_tree(int n, const std::vector<Edge>& edges,
                                   const std::function<void(const std::vector<Edge>&)>& visit) {
  std::vector<int> comp(n + 1);
  std::iota(comp.begin(), comp.end(), 0);
  std::vector<Edge> chosen;
  std::function<int(int)> find = [&](int v) { return comp[v] == v ? v : comp[v] = find(comp[v]); };

  std::function<void(std::size_t)> rec = [&](std::size_t idx) {
    if (chosen.size() == static_cast<std::size_t>(n - 1)) {
      visit(chosen);
      return;
    }
    if (idx >= edges.size()) return;
    if (edges.size() - idx < static_cast<std::size_t>(n - 1) - chosen.size()) return;

    const auto [a, b] = edges[idx];
    const int ra = find(a), rb = find(b);
    if (ra != rb) {
      std::vector<int> saved = comp;  // union-find without rollback bookkeeping
      comp[ra] = rb;
      chosen.push_back(edges[idx]);
      rec(idx + 1);
      chosen.pop_back();
      comp = saved;
    }
    rec(idx + 1);
  };
  rec(0);
}

}  // namespace detail

/// Exact W by enumerating every root and every spanning tree of G_u.
/// W = min over roots of min over trees of max per-edge load. The witness is
/// deterministic: lowest lexicographic canonical edge set among minimizers,
/// then lowest root. A single node yields W = 0 (max over an empty edge set).
inline WResult compute_W(const Digraph& g) {
  if (g.n > 10) {
    throw std::domain_error("compute_W: enumeration limit (n > 10)");
  }
  if (!undirected_connected(g)) {
    throw std::domain_error("compute_W: undirected graph is disconnected");
  }
  const std::vector<Edge> edges = undirected_edges(g);
  WResult best;
  bool have = false;
  detail::for_each_spanning_tree(g.n, edges, [&](const std::vector<Edge>& tree) {
    for (int root = 1; root <= g.n; ++root) {
      TreeReport rep = detail::evaluate_tree(g.n, tree, root);
      const bool better =
          !have || rep.d_tilde < best.w ||
          (rep.d_tilde == best.w &&
           (rep.tree_edges < best.witness.tree_edges ||
            (rep.tree_edges == best.witness.tree_edges && rep.root < best.witness.root)));
      if (better) {
        best.w = rep.d_tilde;
        best.witness = std::move(rep);
        have = true;
      }
    }
  });
  if (!have) {
    throw std::logic_error("compute_W: no spanning tree found on a connected graph");
  }
  return best;
}

}  // namespace nvmo
