#pragma once

// NetworkConfiguration: graph plus all per-node fields, link-view
// construction with set-without-multiplicity semantics, and the three
// initializer modes (blank, seeded-random, explicit table).

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "holonomy/fields.hpp"
#include "holonomy/graph.hpp"
#include "holonomy/plugin_state.hpp"

namespace holonomy {

struct NetworkConfiguration {
  Graph g;
  std::vector<NodeShared> f;
  FenceState fence;
  SigmaState sigma;
  // bumped on writes to zeta/lead/backup; lets observers cache
  std::uint64_t shape_version = 0;

  int n() const { return g.n; }

  bool is_stub(int v) const { return f[v].lead == v; }

  bool has_adjacent_stub(int v) const {
    for (int w : g.adj[v])
      if (is_stub(w)) return true;
    return false;
  }

  int dir(int v, int w) const { return slope_dir(f[v].zeta, f[w].zeta); }

  HalfLink half_link(int who, int peer) const {
    HalfLink h;
    const NodeShared& s = f[who];
    h.zeta = s.zeta;
    h.fence_bit = s.fence_bit;
    h.lead = ref_class(who, s.lead, peer);
    h.backup = ref_class(who, s.backup, peer);
    h.lead_backup_same = s.lead == s.backup;
    const FenceNodeState& fn = fence.node[who];
    h.fence.phase = fn.phase;
    h.fence.stage = static_cast<std::uint8_t>(fn.stage);
    h.fence.reborn = fn.reborn;
    h.fence.reg_parent = ref_class(who, fn.reg_parent < 0 ? who : fn.reg_parent, peer);
    const SigmaNodeState& sn = sigma.node[who];
    h.sigma.cut = ref_class(who, sn.cut, peer);
    h.sigma.drop = ref_class(who, sn.drop, peer);
    h.sigma.long_bit = sn.long_bit;
    h.sigma.grounded = sigma_grounded(who) ? 1 : 0;
    return h;
  }

  Link link(int v, int w) const {
    Link l;
    l.self_side = half_link(v, w);
    l.other_side = half_link(w, v);
    l.dir = dir(v, w);
    return l;
  }

  // B reference: drop if non-loop, else cut; grounded when it loops.
  int sigma_b(int v) const {
    const SigmaNodeState& sn = sigma.node[v];
    return sn.drop != v ? sn.drop : sn.cut;
  }
  bool sigma_grounded(int v) const { return sigma_b(v) == v; }

  // Links of v deduplicated by canonical form and sorted by it; per form,
  // the matching ports in port order. This is the only view transitions
  // may use for neighbor-dependent choices.
  struct LinkSet {
    std::vector<Link> forms;                 // sorted, unique
    std::vector<std::vector<int>> ports;     // parallel: matching neighbors
  };

  LinkSet link_set(int v) const {
    LinkSet ls;
    std::vector<std::pair<Link, int>> raw;
    raw.reserve(g.adj[v].size());
    for (int w : g.adj[v]) raw.emplace_back(link(v, w), w);
    std::stable_sort(raw.begin(), raw.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [lk, w] : raw) {
      if (ls.forms.empty() || !(ls.forms.back() == lk)) {
        ls.forms.push_back(lk);
        ls.ports.emplace_back();
      }
      ls.ports.back().push_back(w);
    }
    return ls;
  }

  // Deterministic neighbor choice: lowest canonical link order among
  // candidates, then the earliest port.
  template <class Pred>
  std::optional<int> choose_neighbor(int v, Pred&& pred) const {
    std::optional<int> best;
    Link best_link{};
    for (int w : g.adj[v]) {
      Link l = link(v, w);
      if (!pred(l, w)) continue;
      if (!best || l < best_link) {
        best = w;
        best_link = l;
      }
    }
    return best;
  }
};

enum class InitMode { Blank, SeededRandom, Explicit };

struct ExplicitInit {
  std::vector<NodeShared> shared;
  // private fields left blank unless provided
  std::vector<FenceNodeState> fence;
  std::vector<SigmaNodeState> sigma;
};

inline NetworkConfiguration build_blank(Graph g) {
  NetworkConfiguration c;
  c.g = std::move(g);
  c.f.assign(c.g.n, {});
  for (int v = 0; v < c.g.n; ++v) {
    c.f[v].lead = v;
    c.f[v].backup = v;
  }
  c.fence.reset(c.g.n);
  c.sigma.reset(c.g.n);
  for (int v = 0; v < c.g.n; ++v) {
    c.sigma.node[v].cut = v;
    c.sigma.node[v].drop = v;
  }
  return c;
}

// Adversarial faults: every shared and private field drawn at random.
inline NetworkConfiguration build_random(Graph g, std::uint64_t seed) {
  NetworkConfiguration c = build_blank(std::move(g));
  std::mt19937_64 rng(seed);
  auto pick_ref = [&](int v) {
    std::uniform_int_distribution<int> d(0, c.g.degree(v));
    int k = d(rng);
    return k == 0 ? v : c.g.adj[v][k - 1];
  };
  std::uniform_int_distribution<int> res(-1, 1);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int v = 0; v < c.g.n; ++v) {
    c.f[v].zeta.residue = static_cast<std::int8_t>(res(rng));
    c.f[v].zeta.sign = bit(rng) ? std::int8_t(+1) : std::int8_t(-1);
    if (c.f[v].zeta.residue != 0) c.f[v].zeta.sign = +1;
    c.f[v].lead = pick_ref(v);
    c.f[v].backup = pick_ref(v);
    c.f[v].fence_bit = static_cast<std::uint8_t>(bit(rng));
    FenceNodeState& fn = c.fence.node[v];
    fn.phase = static_cast<std::uint8_t>(bit(rng));
    fn.stage = static_cast<FStage>(std::uniform_int_distribution<int>(0, 3)(rng));
    fn.reg_parent = bit(rng) ? pick_ref(v) : -1;
    if (fn.reg_parent == v) fn.reg_parent = -1;
    fn.reborn = bit(rng) != 0;
    SigmaNodeState& sn = c.sigma.node[v];
    sn.cut = pick_ref(v);
    sn.drop = pick_ref(v);
    sn.long_bit = static_cast<std::uint8_t>(bit(rng));
    sn.has_cert = bit(rng) != 0;
    if (sn.has_cert) {
      sn.cert.digit = static_cast<std::uint8_t>(std::uniform_int_distribution<int>(0, 2)(rng));
      sn.cert.m = bit(rng) ? +1 : -1;
    }
    sn.h_lock = bit(rng) ? std::int64_t(std::uniform_int_distribution<int>(-1, 40)(rng)) : kUndef;
  }
  return c;
}

inline NetworkConfiguration build_explicit(Graph g, const ExplicitInit& init) {
  NetworkConfiguration c = build_blank(std::move(g));
  if (static_cast<int>(init.shared.size()) != c.g.n)
    throw std::runtime_error("explicit table: wrong node count");
  for (int v = 0; v < c.g.n; ++v) {
    const NodeShared& s = init.shared[v];
    auto check_ref = [&](int t) {
      if (t != v && !c.g.has_edge(v, t))
        throw std::runtime_error("explicit table: reference to non-adjacent node");
    };
    check_ref(s.lead);
    check_ref(s.backup);
    c.f[v] = s;
  }
  if (!init.fence.empty()) {
    if (init.fence.size() != static_cast<std::size_t>(c.g.n))
      throw std::runtime_error("explicit table: fence size");
    c.fence.node = init.fence;
  }
  if (!init.sigma.empty()) {
    if (init.sigma.size() != static_cast<std::size_t>(c.g.n))
      throw std::runtime_error("explicit table: sigma size");
    c.sigma.node = init.sigma;
    for (int v = 0; v < c.g.n; ++v) {
      auto check_ref = [&](int t) {
        if (t != v && !c.g.has_edge(v, t))
          throw std::runtime_error("explicit table: reference to non-adjacent node");
      };
      check_ref(c.sigma.node[v].cut);
      check_ref(c.sigma.node[v].drop);
    }
  }
  return c;
}

}  // namespace holonomy
