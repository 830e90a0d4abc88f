#pragma once

// Omniscient height/senior/bound/rip tracking. Not node-visible state:
// the contract monitors and the reference fence read it; nothing here
// feeds back into shared fields.

#include <cstdint>
#include <set>
#include <vector>

#include "holonomy/classify.hpp"
#include "holonomy/config.hpp"

namespace holonomy {

inline int senior_of(const NetworkConfiguration& c, int v) {
  if (is_ground(c, v)) return v;
  if (classify(c, v) == ShellClass::Split) return c.f[v].backup;
  return c.f[v].lead;
}

struct HeightTracker {
  std::vector<std::int64_t> h;
  std::vector<char> undef_hold;  // sticky bottom until a non-lock field change
  // bound flags per directed edge, keyed (tail, head)
  std::set<std::pair<int, int>> bound;

  void reset(const NetworkConfiguration& c) {
    h.assign(c.n(), kUndef);
    undef_hold.assign(c.n(), 0);
    bound.clear();
    recompute(c);
  }

  bool defined(int v) const { return h[v] != kUndef; }

  bool is_rip(const NetworkConfiguration&, int v, int w) const {
    if (h[v] == kUndef || h[w] == kUndef) return false;
    std::int64_t d = h[v] - h[w];
    return d > 1 || d < -1;
  }

  std::vector<std::pair<int, int>> rips(const NetworkConfiguration& c) const {
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < c.n(); ++v)
      for (int w : c.g.adj[v])
        if (v < w && is_rip(c, v, w)) out.emplace_back(v, w);
    return out;
  }

  // Senior chain from v: node sequence following senior pointers until a
  // loop or a revisit.
  std::vector<int> senior_chain(const NetworkConfiguration& c, int v) const {
    std::vector<int> chain;
    std::vector<char> seen(c.n(), 0);
    int x = v;
    while (!seen[x]) {
      seen[x] = 1;
      chain.push_back(x);
      int nx = senior_of(c, x);
      if (nx == x) break;
      x = nx;
    }
    return chain;
  }

  // Senior-ancestor root, if the chain ends in an isolated stub.
  int senior_root(const NetworkConfiguration& c, int v) const {
    auto chain = senior_chain(c, v);
    int end = chain.back();
    if (senior_of(c, end) == end && is_root(c, end)) return end;
    return -1;
  }

  // Synchronous relaxation to a fixed point (or the n+2 cap on senior
  // cycles). Ground anchors pin heights; locks and held nodes stay
  // undefined; nodes whose senior is undefined retain previous values.
  void recompute(const NetworkConfiguration& c) {
    const int n = c.n();
    for (int v = 0; v < n; ++v)
      if (is_lock(c, v)) undef_hold[v] = 1;
    std::vector<std::int64_t> cur = h;
    for (int v = 0; v < n; ++v)
      if (undef_hold[v]) cur[v] = kUndef;
    for (int round = 0; round <= n + 1; ++round) {
      std::vector<std::int64_t> next = cur;
      bool changed = false;
      for (int v = 0; v < n; ++v) {
        if (undef_hold[v]) continue;
        std::int64_t want;
        if (is_ground(c, v)) {
          want = c.f[v].zeta.residue;
        } else {
          int w = senior_of(c, v);
          if (w == v || cur[w] == kUndef) continue;  // retain
          want = cur[w] + c.dir(w, v);
        }
        if (next[v] != want) {
          next[v] = want;
          changed = true;
        }
      }
      cur = next;
      if (!changed) break;
    }
    h = cur;
  }

  // --- event hooks -------------------------------------------------------

  void on_shared_change(const NetworkConfiguration& c, int v) {
    if (!is_lock(c, v)) undef_hold[v] = 0;
  }

  void on_crash(const NetworkConfiguration& c, int v) {
    undef_hold[v] = 1;
    h[v] = kUndef;
    for (int w : c.g.adj[v]) bound.erase({v, w});
  }

  // x (or a descendant wave) flipped its fence bit on: every in-edge of x
  // and of x's lead-ancestors becomes bound.
  void on_fence_on(const NetworkConfiguration& c, int x) {
    std::vector<char> seen(c.n(), 0);
    int w = x;
    while (!seen[w]) {
      seen[w] = 1;
      for (int v : c.g.adj[w]) bound.insert({v, w});
      int nw = c.f[w].lead;
      if (nw == w) break;
      w = nw;
    }
  }

  // r toggled between root_on and reset: edges touching its senior
  // domain become bound.
  void on_root_toggle(const NetworkConfiguration& c, int r) {
    for (int v = 0; v < c.n(); ++v) {
      if (senior_root(c, v) != r) continue;
      for (int w : c.g.adj[v]) {
        bound.insert({v, w});
        bound.insert({w, v});
      }
    }
  }

  bool edge_bound(int v, int w) const { return bound.count({v, w}) > 0; }
};

}  // namespace holonomy
