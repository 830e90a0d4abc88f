#pragma once

// Orientation observables: dir/rise arithmetic, the fundamental-cycle
// census, flatness via potential relaxation, and the center predicate.

#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "holonomy/config.hpp"

namespace holonomy {

inline int dir_of(const NetworkConfiguration& c, int v, int w) {
  if (v != w && !c.g.has_edge(v, w))
    throw std::invalid_argument("dir: nodes not adjacent");
  return c.dir(v, w);
}

inline int rise_of(const NetworkConfiguration& c, const std::vector<int>& path) {
  int r = 0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!c.g.has_edge(path[i], path[i + 1]))
      throw std::invalid_argument("rise: broken path");
    r += c.dir(path[i], path[i + 1]);
  }
  return r;
}

struct CycleCensus {
  struct Entry {
    std::vector<int> cycle;  // closed node sequence
    int rise = 0;
  };
  std::vector<Entry> cycles;
  int balanced = 0;
  int vortices = 0;

  bool has_vortex() const { return vortices > 0; }
};

inline CycleCensus cycle_census(const NetworkConfiguration& c) {
  CycleCensus cc;
  auto fc = fundamental_cycles(c.g);
  for (auto& cyc : fc.cycles) {
    CycleCensus::Entry e;
    e.cycle = cyc;
    e.rise = rise_of(c, cyc);
    if (e.rise == 0)
      ++cc.balanced;
    else
      ++cc.vortices;
    cc.cycles.push_back(std::move(e));
  }
  return cc;
}

// Roots for the flatness predicate: isolated stubs (lead loops, no
// adjacent stub), whatever the backup pointer holds.
inline std::vector<int> root_set(const NetworkConfiguration& c) {
  std::vector<int> roots;
  for (int v = 0; v < c.n(); ++v)
    if (c.is_stub(v) && !c.has_adjacent_stub(v)) roots.push_back(v);
  return roots;
}

struct FlatReport {
  bool flat = false;
  std::string reason;
  std::vector<int> witness;          // offending cycle or edge
  std::vector<std::int64_t> height;  // potential when flat (kUndef elsewhere)
  std::vector<int> roots;
};

// Flatness by potential relaxation: label roots -1 and propagate
// h(w) = h(u) + dir(u,w); any inconsistency yields a witness, and
// success certifies every root-outgoing path has nonnegative rise.
inline FlatReport is_flat(const NetworkConfiguration& c) {
  FlatReport rep;
  rep.roots = root_set(c);
  rep.height.assign(c.n(), kUndef);
  if (rep.roots.empty()) {
    rep.reason = "no roots";
    return rep;
  }
  for (int r : rep.roots) {
    if (c.f[r].zeta.residue != -1) {
      rep.reason = "root zeta != -1";
      rep.witness = {r};
      return rep;
    }
    for (int w : c.g.adj[r])
      if (c.dir(r, w) != +1) {
        rep.reason = "root has a non-up edge";
        rep.witness = {r, w};
        return rep;
      }
  }
  std::queue<int> q;
  for (int r : rep.roots) {
    rep.height[r] = -1;
    q.push(r);
  }
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : c.g.adj[u]) {
      std::int64_t hw = rep.height[u] + c.dir(u, w);
      if (rep.height[w] == kUndef) {
        rep.height[w] = hw;
        q.push(w);
      } else if (rep.height[w] != hw) {
        // two root paths disagree: some cycle through u,w has nonzero rise
        rep.reason = "inconsistent potential";
        rep.witness = {u, w};
        return rep;
      }
    }
  }
  for (int v = 0; v < c.n(); ++v) {
    if (rep.height[v] == kUndef) {
      rep.reason = "unreachable node";  // cannot happen on connected graphs
      rep.witness = {v};
      return rep;
    }
    if (rep.height[v] < -1) {
      rep.reason = "path below root level";  // rise < 0 from a root
      rep.witness = {v};
      return rep;
    }
  }
  rep.flat = true;
  rep.reason = "flat";
  return rep;
}

// Unique node with no down edges, if any.
inline std::optional<int> find_center(const NetworkConfiguration& c) {
  std::optional<int> center;
  for (int v = 0; v < c.n(); ++v) {
    bool has_down = false;
    for (int w : c.g.adj[v])
      if (c.dir(v, w) == -1) {
        has_down = true;
        break;
      }
    if (!has_down) {
      if (center) return std::nullopt;  // not unique
      center = v;
    }
  }
  return center;
}

inline bool is_centered(const NetworkConfiguration& c) {
  return is_flat(c).flat && find_center(c).has_value();
}

}  // namespace holonomy
