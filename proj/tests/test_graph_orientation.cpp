#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "holonomy/orientation.hpp"

using namespace holonomy;

namespace {

NetworkConfiguration with_zetas(Graph g, const std::vector<int>& res) {
  NetworkConfiguration c = build_blank(std::move(g));
  for (int v = 0; v < c.n(); ++v) c.f[v].zeta.residue = static_cast<std::int8_t>(res[v]);
  return c;
}

// oracle: enumerate all simple cycles (canonical start = smallest node)
std::vector<std::vector<int>> all_simple_cycles(const Graph& g) {
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  std::vector<char> used(g.n, 0);
  std::function<void(int, int)> dfs = [&](int start, int u) {
    for (int w : g.adj[u]) {
      if (w == start && path.size() >= 3) {
        if (path[1] < path.back()) {  // kill reversed duplicates
          auto cyc = path;
          cyc.push_back(start);
          out.push_back(cyc);
        }
        continue;
      }
      if (w <= start || used[w]) continue;
      used[w] = 1;
      path.push_back(w);
      dfs(start, w);
      path.pop_back();
      used[w] = 0;
    }
  };
  for (int s = 0; s < g.n; ++s) {
    path = {s};
    std::fill(used.begin(), used.end(), 0);
    used[s] = 1;
    dfs(s, s);
  }
  return out;
}

bool brute_has_vortex(const NetworkConfiguration& c) {
  for (const auto& cyc : all_simple_cycles(c.g))
    if (rise_of(c, cyc) != 0) return true;
  return false;
}

std::vector<Graph> all_connected_graphs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<Graph> out;
  for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
    Graph g;
    g.n = n;
    g.adj.assign(n, {});
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if (mask & (1u << b)) detail::add_edge(g, pairs[b].first, pairs[b].second);
    if (g.connected()) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

TEST_CASE("graph families parse") {
  CHECK(parse_graph("ring:4").edge_count() == 4);
  CHECK(parse_graph("path:5").edge_count() == 4);
  CHECK(parse_graph("complete:5").edge_count() == 10);
  CHECK(parse_graph("grid:2x3").n == 6);
  CHECK(parse_graph("grid:2x3").edge_count() == 7);
  CHECK(parse_graph("star:5").max_degree() == 4);
  Graph r1 = parse_graph("random:10,0.4,seed=7");
  Graph r2 = parse_graph("random:10,0.4,seed=7");
  CHECK(r1.adj == r2.adj);
  CHECK(r1.connected());
  Graph e = parse_graph("edges: 0 1  1 2  2 0");
  CHECK(e.n == 3);
  CHECK(e.edge_count() == 3);
  CHECK_THROWS(parse_graph("edges: 0 1  2 3"));  // disconnected
  CHECK_THROWS(parse_graph("pentagon:5"));
}

TEST_CASE("dir formula") {
  auto c = with_zetas(parse_graph("path:2"), {0, 1});
  CHECK(dir_of(c, 0, 1) == +1);  // w over v
  CHECK(dir_of(c, 1, 0) == -1);
  auto c2 = with_zetas(parse_graph("path:2"), {1, 1});
  CHECK(dir_of(c2, 0, 1) == 0);
  auto c3 = with_zetas(parse_graph("path:2"), {1, -1});
  CHECK(dir_of(c3, 0, 1) == +1);  // (-1-1) mod 3 = 1
  auto c4 = with_zetas(parse_graph("path:3"), {0, 0, 0});
  CHECK_THROWS(dir_of(c4, 0, 2));  // not adjacent
}

TEST_CASE("rise along paths") {
  auto c = with_zetas(parse_graph("path:4"), {0, 1, -1, 0});
  CHECK(rise_of(c, {0}) == 0);
  CHECK(rise_of(c, {0, 1, 2, 3}) == 3);  // three +1 hops
  CHECK_THROWS(rise_of(c, {0, 2}));
  auto ring = with_zetas(parse_graph("ring:6"), {0, 1, -1, 0, 1, -1});
  CHECK(rise_of(ring, {0, 1, 2, 3, 4, 5, 0}) % 3 == 0);
}

TEST_CASE("cycle census") {
  auto tree = with_zetas(parse_graph("path:4"), {0, 1, 0, -1});
  auto cc = cycle_census(tree);
  CHECK(cc.cycles.empty());
  CHECK_FALSE(cc.has_vortex());
  auto tri = with_zetas(parse_graph("ring:3"), {0, 1, -1});
  auto cc2 = cycle_census(tri);
  REQUIRE(cc2.cycles.size() == 1);
  CHECK((cc2.cycles[0].rise == 3 || cc2.cycles[0].rise == -3));
  CHECK(cc2.has_vortex());
  auto flat3 = with_zetas(parse_graph("ring:3"), {0, 0, 0});
  CHECK_FALSE(cycle_census(flat3).has_vortex());
}

TEST_CASE("flatness and centering") {
  auto c = with_zetas(parse_graph("path:2"), {-1, 0});
  c.f[1].lead = 0;
  auto fr = is_flat(c);
  CHECK(fr.flat);
  CHECK(is_centered(c));

  // root with a down edge is rejected
  auto tri = with_zetas(parse_graph("ring:3"), {-1, 0, 1});
  tri.f[1].lead = 0;
  tri.f[1].backup = 1;
  tri.f[2].lead = 0;
  tri.f[2].backup = 2;
  CHECK_FALSE(is_flat(tri).flat);  // dir(0,2) = (1 - -1) mod 3 -> -1

  // no roots anywhere
  auto c3 = with_zetas(parse_graph("path:3"), {-1, 0, 1});
  c3.f[0].lead = 1;
  c3.f[1].lead = 2;
  c3.f[2].lead = 1;
  CHECK_FALSE(is_flat(c3).flat);
  CHECK(is_flat(c3).reason == "no roots");
}

TEST_CASE("find_center") {
  auto c = with_zetas(parse_graph("path:3"), {-1, 0, 1});
  c.f[1].lead = 0;
  c.f[2].lead = 1;
  auto ctr = find_center(c);
  REQUIRE(ctr.has_value());
  CHECK(*ctr == 0);

  auto flat0 = with_zetas(parse_graph("path:3"), {0, 0, 0});
  CHECK_FALSE(find_center(flat0).has_value());  // symmetric: every node qualifies

  auto two = with_zetas(parse_graph("path:5"), {-1, 0, 1, 0, -1});
  CHECK_FALSE(find_center(two).has_value());  // two separated minima
}

TEST_CASE("cycle rises are 0 mod 3 for every assignment, small exhaustive") {
  for (int n = 2; n <= 4; ++n) {
    for (const auto& g : all_connected_graphs(n)) {
      int total = 1;
      for (int i = 0; i < n; ++i) total *= 3;
      for (int code = 0; code < total; ++code) {
        std::vector<int> res(n);
        int x = code;
        for (int i = 0; i < n; ++i) {
          res[i] = x % 3 - 1;
          x /= 3;
        }
        auto c = with_zetas(g, res);
        for (const auto& e : cycle_census(c).cycles) CHECK(e.rise % 3 == 0);
        for (auto [u, v] : g.edges()) CHECK(c.dir(u, v) + c.dir(v, u) == 0);
      }
    }
  }
}

TEST_CASE("vortex detection matches all-cycle enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 3 + int(rng() % 4);  // 3..6
    Graph g = parse_graph("random:" + std::to_string(n) + ",0.6,seed=" +
                          std::to_string(rng() % 10000));
    std::vector<int> res(n);
    for (int i = 0; i < n; ++i) res[i] = int(rng() % 3) - 1;
    auto c = with_zetas(g, res);
    CHECK(cycle_census(c).has_vortex() == brute_has_vortex(c));
  }
}

TEST_CASE("flat centered yields short down-paths to the center") {
  // heights -1 0 1 2 1 0 around the ring (residue 2 reads -1)
  auto c = with_zetas(parse_graph("ring:6"), {-1, 0, 1, -1, 1, 0});
  c.f[1].lead = 0;
  c.f[2].lead = 1;
  c.f[3].lead = 2;
  c.f[4].lead = 5;
  c.f[5].lead = 0;
  auto fr = is_flat(c);
  REQUIRE(fr.flat);
  auto ctr = find_center(c);
  REQUIRE(ctr.has_value());
  int d = c.g.diameter();
  for (int v = 0; v < c.n(); ++v) {
    int x = v, hops = 0;
    while (x != *ctr && hops <= d + 1) {
      int next = -1;
      for (int w : c.g.adj[x])
        if (c.dir(x, w) == -1) {
          next = w;
          break;
        }
      REQUIRE(next >= 0);
      x = next;
      ++hops;
    }
    CHECK(x == *ctr);
    CHECK(hops <= d + 1);
  }
}
