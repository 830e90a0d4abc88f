#pragma once

// Communication graph: parsing of the named families, connectivity and
// metric helpers, and the DFS fundamental-cycle basis used by the
// orientation census.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace holonomy {

struct Graph {
  int n = 0;
  // Port-ordered adjacency: the order is part of the network model (it
  // gives nodes a deterministic way to pick among otherwise identical
  // links). Never re-sorted after construction.
  std::vector<std::vector<int>> adj;

  bool has_edge(int u, int v) const {
    const auto& a = adj[u];
    return std::find(a.begin(), a.end(), v) != a.end();
  }

  int degree(int v) const { return static_cast<int>(adj[v].size()); }

  int max_degree() const {
    int d = 0;
    for (int v = 0; v < n; ++v) d = std::max(d, degree(v));
    return d;
  }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& a : adj) m += a.size();
    return m / 2;
  }

  // undirected edges with u <= v, in port discovery order
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> es;
    for (int u = 0; u < n; ++u)
      for (int v : adj[u])
        if (u <= v) es.emplace_back(u, v);
    return es;
  }

  bool connected() const {
    if (n == 0) return false;
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          ++cnt;
          q.push(v);
        }
    }
    return cnt == n;
  }

  std::vector<int> bfs_dist(int src) const {
    std::vector<int> dist(n, -1);
    std::queue<int> q;
    q.push(src);
    dist[src] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
    }
    return dist;
  }

  int diameter() const {
    int d = 0;
    for (int v = 0; v < n; ++v) {
      auto dist = bfs_dist(v);
      for (int x : dist) d = std::max(d, x);
    }
    return d;
  }

  // Relabel nodes by perm (new id of v is perm[v]) keeping each node's
  // port order aligned, so a permuted run replays as the permuted trace.
  Graph permuted(const std::vector<int>& perm) const {
    Graph g;
    g.n = n;
    g.adj.assign(n, {});
    for (int v = 0; v < n; ++v) {
      g.adj[perm[v]].reserve(adj[v].size());
      for (int w : adj[v]) g.adj[perm[v]].push_back(perm[w]);
    }
    return g;
  }
};

namespace detail {
inline void add_edge(Graph& g, int u, int v) {
  if (u == v) return;  // reflexive loops carry no link state of their own
  if (!g.has_edge(u, v)) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
}

inline void connect_components(Graph& g) {
  std::vector<int> comp(g.n, -1);
  int nc = 0;
  for (int v = 0; v < g.n; ++v) {
    if (comp[v] >= 0) continue;
    std::queue<int> q;
    q.push(v);
    comp[v] = nc;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int w : g.adj[u])
        if (comp[w] < 0) {
          comp[w] = nc;
          q.push(w);
        }
    }
    ++nc;
  }
  // deterministically chain component representatives
  std::vector<int> rep(nc, -1);
  for (int v = 0; v < g.n; ++v)
    if (rep[comp[v]] < 0) rep[comp[v]] = v;
  for (int c = 1; c < nc; ++c) add_edge(g, rep[0], rep[c]);
}
}  // namespace detail

// Families: ring:n, path:n, grid:AxB, complete:n, random:n,p,seed, and
// explicit `edges: u v; u v; ...` (any whitespace separates pairs).
inline Graph parse_graph(const std::string& spec) {
  Graph g;
  auto fail = [&](const std::string& why) {
    throw std::runtime_error("graph spec '" + spec + "': " + why);
  };
  auto head = spec.substr(0, spec.find(':'));
  std::string rest = spec.find(':') == std::string::npos ? "" : spec.substr(spec.find(':') + 1);
  auto want_n = [&](int min_n) {
    int n = 0;
    try {
      n = std::stoi(rest);
    } catch (...) {
      fail("bad node count");
    }
    if (n < min_n) fail("node count too small");
    return n;
  };
  if (head == "ring") {
    int n = want_n(3);
    g.n = n;
    g.adj.assign(n, {});
    for (int i = 0; i < n; ++i) detail::add_edge(g, i, (i + 1) % n);
  } else if (head == "path") {
    int n = want_n(1);
    g.n = n;
    g.adj.assign(n, {});
    for (int i = 0; i + 1 < n; ++i) detail::add_edge(g, i, i + 1);
  } else if (head == "complete") {
    int n = want_n(1);
    g.n = n;
    g.adj.assign(n, {});
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) detail::add_edge(g, i, j);
  } else if (head == "star") {
    int n = want_n(1);
    g.n = n;
    g.adj.assign(n, {});
    for (int i = 1; i < n; ++i) detail::add_edge(g, 0, i);
  } else if (head == "grid") {
    auto x = rest.find('x');
    if (x == std::string::npos) fail("grid wants AxB");
    int a = 0, b = 0;
    try {
      a = std::stoi(rest.substr(0, x));
      b = std::stoi(rest.substr(x + 1));
    } catch (...) {
      fail("bad grid dims");
    }
    if (a < 1 || b < 1) fail("bad grid dims");
    g.n = a * b;
    g.adj.assign(g.n, {});
    for (int r = 0; r < a; ++r)
      for (int c = 0; c < b; ++c) {
        int v = r * b + c;
        if (c + 1 < b) detail::add_edge(g, v, v + 1);
        if (r + 1 < a) detail::add_edge(g, v, v + b);
      }
  } else if (head == "random") {
    // random:n,p,seed=s   (seed= prefix optional)
    std::stringstream ss(rest);
    std::string tok;
    std::vector<std::string> toks;
    while (std::getline(ss, tok, ',')) toks.push_back(tok);
    if (toks.size() != 3) fail("random wants n,p,seed");
    int n = 0;
    double p = 0;
    std::uint64_t seed = 0;
    try {
      n = std::stoi(toks[0]);
      p = std::stod(toks[1]);
      auto s = toks[2];
      if (s.rfind("seed=", 0) == 0) s = s.substr(5);
      seed = std::stoull(s);
    } catch (...) {
      fail("bad random params");
    }
    if (n < 1 || p < 0.0 || p > 1.0) fail("bad random params");
    g.n = n;
    g.adj.assign(n, {});
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (unif(rng) < p) detail::add_edge(g, i, j);
    detail::connect_components(g);
  } else if (head == "edges") {
    std::stringstream ss(rest);
    std::vector<std::pair<int, int>> es;
    int u, v, maxid = -1;
    while (ss >> u >> v) {
      if (u < 0 || v < 0) fail("negative node id");
      es.emplace_back(u, v);
      maxid = std::max({maxid, u, v});
    }
    if (es.empty()) fail("no edges");
    g.n = maxid + 1;
    g.adj.assign(g.n, {});
    for (auto [a, b] : es) detail::add_edge(g, a, b);
    if (!g.connected()) fail("disconnected");
  } else {
    fail("unknown family");
  }
  if (!g.connected()) fail("disconnected");
  return g;
}

// Fundamental cycles from a DFS spanning tree: each non-tree edge closes
// exactly one cycle through tree paths.
struct FundamentalCycles {
  std::vector<int> parent;                     // DFS tree, -1 at root
  std::vector<std::vector<int>> cycles;        // node sequences, closed (front==back)
};

inline FundamentalCycles fundamental_cycles(const Graph& g) {
  FundamentalCycles fc;
  fc.parent.assign(g.n, -2);
  std::vector<int> depth(g.n, 0);
  std::vector<int> stack{0};
  fc.parent[0] = -1;
  std::vector<int> order;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (int v : g.adj[u])
      if (fc.parent[v] == -2) {
        fc.parent[v] = u;
        depth[v] = depth[u] + 1;
        stack.push_back(v);
      }
  }
  std::vector<std::pair<int, int>> nontree;
  for (int u = 0; u < g.n; ++u)
    for (int v : g.adj[u])
      if (u < v && fc.parent[u] != v && fc.parent[v] != u) nontree.emplace_back(u, v);
  for (auto [u, v] : nontree) {
    // path u..lca and v..lca
    std::vector<int> pu{u}, pv{v};
    int a = u, b = v;
    while (depth[a] > depth[b]) pu.push_back(a = fc.parent[a]);
    while (depth[b] > depth[a]) pv.push_back(b = fc.parent[b]);
    while (a != b) {
      pu.push_back(a = fc.parent[a]);
      pv.push_back(b = fc.parent[b]);
    }
    std::vector<int> cyc(pu);
    for (auto it = pv.rbegin() + 1; it != pv.rend(); ++it) cyc.push_back(*it);
    cyc.push_back(u);
    fc.cycles.push_back(std::move(cyc));
  }
  return fc;
}

}  // namespace holonomy
