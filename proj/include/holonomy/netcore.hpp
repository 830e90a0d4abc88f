#pragma once

// The network substrate: adversarial scheduling, the activation
// pipeline (guard, shell, plugins, monitors), runs and replay, step
// counting, and the full-asynchrony transform.

#include <functional>
#include <random>

#include "holonomy/contracts.hpp"
#include "holonomy/fence.hpp"
#include "holonomy/leader.hpp"
#include "holonomy/rectifier.hpp"
#include "holonomy/runtime.hpp"
#include "holonomy/shell.hpp"

namespace holonomy {

// ---------------------------------------------------------------------------
// Schedulers. Exactly one node acts at any instant; random strategies
// keep a 4n fairness window by force-completing the missing nodes.

struct ScheduleSource {
  enum class Kind { RoundRobin, UniformRandom, Script, Callback };
  Kind kind = Kind::RoundRobin;
  std::uint64_t seed = 0;
  std::vector<int> script;
  std::function<int(const NetworkConfiguration&, std::uint64_t)> callback;

  // state
  std::mt19937_64 rng;
  std::size_t pos = 0;
  int window_used = 0;
  std::vector<char> window_seen;
  int window_missing = 0;

  static ScheduleSource round_robin() { return {}; }
  static ScheduleSource uniform(std::uint64_t seed) {
    ScheduleSource s;
    s.kind = Kind::UniformRandom;
    s.seed = seed;
    s.rng.seed(seed);
    return s;
  }
  static ScheduleSource scripted(std::vector<int> sc) {
    ScheduleSource s;
    s.kind = Kind::Script;
    s.script = std::move(sc);
    return s;
  }

  void reset(int n) {
    pos = 0;
    window_used = 0;
    window_seen.assign(n, 0);
    window_missing = n;
    rng.seed(seed);
  }

  int next(const NetworkConfiguration& c) {
    const int n = c.n();
    if (window_seen.size() != static_cast<std::size_t>(n)) reset(n);
    switch (kind) {
      case Kind::RoundRobin:
        return static_cast<int>(pos++ % n);
      case Kind::Script:
        return pos < script.size() ? script[pos++] : -1;
      case Kind::Callback: {
        int v = callback ? callback(c, pos) : -1;
        ++pos;
        return v;
      }
      case Kind::UniformRandom: {
        int v;
        int slots_left = 4 * n - window_used;
        if (slots_left <= window_missing) {
          // fairness: force a missing node (deterministic draw among them)
          std::vector<int> missing;
          for (int x = 0; x < n; ++x)
            if (!window_seen[x]) missing.push_back(x);
          v = missing[rng() % missing.size()];
        } else {
          v = static_cast<int>(rng() % n);
        }
        if (!window_seen[v]) {
          window_seen[v] = 1;
          --window_missing;
        }
        if (++window_used >= 4 * n || window_missing == 0) {
          window_used = 0;
          std::fill(window_seen.begin(), window_seen.end(), 0);
          window_missing = n;
        }
        ++pos;
        return v;
      }
    }
    return -1;
  }
};

// ---------------------------------------------------------------------------

struct SimOptions {
  std::uint64_t coin_seed = 1;
  MonitorConfig monitors;
  bool record_trace = false;
};

inline PluginSet reference_plugins() {
  PluginSet p;
  auto leader = std::make_unique<ReferenceLeader>();
  auto sigma = std::make_unique<ReferenceSigma>();
  sigma->tokens = leader.get();
  p.leader = std::move(leader);
  p.fence = std::make_unique<ReferenceFence>();
  p.sigma = std::move(sigma);
  return p;
}

struct Sim {
  NetworkConfiguration c;
  HeightTracker ht;
  Monitors mon;
  PluginSet plugins;
  std::mt19937_64 coin_rng;
  std::uint64_t acts = 0;
  bool record = false;
  std::vector<TraceEvent> events;

  Sim(NetworkConfiguration cfg, PluginSet pl, SimOptions opt = {})
      : c(std::move(cfg)), plugins(std::move(pl)) {
    coin_rng.seed(opt.coin_seed);
    mon.cfg = opt.monitors;
    mon.init(c);
    ht.reset(c);
    record = opt.record_trace;
  }

  bool guard_would_crash(int v) const {
    if (f_reset_pattern(c.f, v)) return false;
    for (int w : c.g.adj[v]) {
      if (plugins.leader && !plugins.leader->link_legal(c, v, w)) return true;
      if (plugins.fence && !plugins.fence->link_legal(c, v, w)) return true;
      if (plugins.sigma && !plugins.sigma->link_legal(c, v, w)) return true;
    }
    return false;
  }

  TraceEvent activate(int v) {
    TraceEvent ev;
    ev.seq = acts;
    ev.node = v;
    Fields pre = c.f;
    ActCtx ctx{c, ht, ev, coin_rng, acts};

    if (guard_would_crash(v)) ctx.crash(v, Actor::Guard);
    ht.recompute(c);

    ShellClass entry = classify(c, v);
    ShellOutcome so = shell_act(ctx, v, entry);
    if (so.turned_root_on && plugins.fence) plugins.fence->on_root_on(ctx, v);

    bool leader_ran = false;
    if (so.invoked_split) {
      if (plugins.leader) {
        plugins.leader->on_invoke(ctx, v);
        leader_ran = true;
      }
      // an uprooted childless node adopts its new tree outright
      if (entry == ShellClass::RootOff && c.f[v].lead != v &&
          lead_children(c, v).empty())
        ctx.set_backup(v, c.f[v].lead, Actor::Shell);
      if (plugins.fence) plugins.fence->on_split(ctx, v);
    }
    ht.recompute(c);

    if (plugins.leader) plugins.leader->act(ctx, v);
    if (plugins.fence) plugins.fence->act(ctx, v);
    ht.recompute(c);
    if (plugins.sigma) plugins.sigma->act(ctx, v);
    ht.recompute(c);

    mon.after_activation(c, ht, pre, ev, leader_ran);
    ++acts;
    if (record) events.push_back(ev);
    return ev;
  }

  // returns the number of activations performed
  std::uint64_t run(ScheduleSource& sched, std::uint64_t budget) {
    sched.reset(c.n());
    for (std::uint64_t i = 0; i < budget; ++i) {
      int v = sched.next(c);
      if (v < 0 || v >= c.n()) return i;
      activate(v);
    }
    return budget;
  }
};

// Greedy partition of an activation sequence into maximal-count minimal
// windows each containing every node.
inline std::int64_t steps_elapsed(int n, const std::vector<int>& order) {
  std::vector<char> seen(n, 0);
  int have = 0;
  std::int64_t steps = 0;
  for (int v : order) {
    if (v < 0 || v >= n) continue;
    if (!seen[v]) {
      seen[v] = 1;
      if (++have == n) {
        ++steps;
        std::fill(seen.begin(), seen.end(), 0);
        have = 0;
      }
    }
  }
  return steps;
}

inline std::int64_t steps_elapsed(int n, const std::vector<TraceEvent>& evs) {
  std::vector<int> order;
  order.reserve(evs.size());
  for (const auto& e : evs) order.push_back(e.node);
  return steps_elapsed(n, order);
}

// ---------------------------------------------------------------------------
// Full asynchrony: every edge subdivided by a satellite dummy hosted by
// its lower endpoint; one color bit per node keeps buddies from acting
// in the same instant.

struct AsyncWrapped {
  Graph g2;
  int n_real = 0;
  std::vector<int> host;    // per dummy index (node id - n_real)
  std::vector<int> buddy;   // per dummy index: the non-host endpoint
  std::vector<std::vector<int>> satellites;  // per real node
  std::vector<std::uint8_t> color;

  int dummy_of(int node) const { return node - n_real; }
  bool is_dummy(int node) const { return node >= n_real; }

  // buddies of a real node: dummies whose buddy it is
  std::vector<int> real_buddies(int v) const {
    std::vector<int> out;
    for (std::size_t d = 0; d < buddy.size(); ++d)
      if (buddy[d] == v) out.push_back(n_real + static_cast<int>(d));
    return out;
  }

  // One adversary instant: any requested set of real nodes (dummy ids
  // are served only through their hosts). Enabledness is evaluated on
  // the instant's starting colors, so a dummy and its buddy can never
  // both act. A host serves its satellites even when blocked itself.
  template <class ActFn>
  std::vector<int> instant(const std::vector<int>& request, ActFn&& act) {
    std::vector<std::uint8_t> start = color;
    std::vector<char> in_req(g2.n, 0);
    for (int v : request)
      if (v >= 0 && v < n_real) in_req[v] = 1;
    std::vector<int> acted;
    for (int v = 0; v < n_real; ++v) {
      if (!in_req[v]) continue;
      bool ok = true;
      for (int x : real_buddies(v))
        if (start[x] != start[v]) ok = false;
      if (ok) {
        act(v);
        color[v] ^= 1;
        acted.push_back(v);
      }
      for (int x : satellites[v]) {
        int b = buddy[dummy_of(x)];
        if (start[x] != start[b]) {
          act(x);
          color[x] ^= 1;
          acted.push_back(x);
        }
      }
    }
    return acted;
  }
};

inline AsyncWrapped full_async_transform(const Graph& g) {
  AsyncWrapped w;
  w.n_real = g.n;
  auto es = g.edges();
  w.g2.n = g.n + static_cast<int>(es.size());
  w.g2.adj.assign(w.g2.n, {});
  w.satellites.assign(g.n, {});
  for (std::size_t i = 0; i < es.size(); ++i) {
    auto [u, v] = es[i];
    int x = g.n + static_cast<int>(i);
    int h = std::min(u, v);  // host chosen deterministically
    w.host.push_back(h);
    w.buddy.push_back(u == h ? v : u);
    w.satellites[h].push_back(x);
    detail::add_edge(w.g2, u, x);
    detail::add_edge(w.g2, x, v);
  }
  w.color.assign(w.g2.n, 0);
  return w;
}

// build_network: graph spec text plus an initializer tag
// ("blank" | "random:<seed>").
inline NetworkConfiguration build_network(const std::string& graph_spec,
                                          const std::string& init) {
  Graph g = parse_graph(graph_spec);
  if (init == "blank") return build_blank(std::move(g));
  if (init.rfind("random:", 0) == 0)
    return build_random(std::move(g), std::stoull(init.substr(7)));
  throw std::runtime_error("unknown initializer: " + init);
}

// Permuted copy for the anonymity property: node ids relabeled, port
// structure preserved, every reference mapped.
inline NetworkConfiguration permute_config(const NetworkConfiguration& c,
                                           const std::vector<int>& perm) {
  NetworkConfiguration out = build_blank(c.g.permuted(perm));
  for (int v = 0; v < c.n(); ++v) {
    int pv = perm[v];
    out.f[pv].zeta = c.f[v].zeta;
    out.f[pv].lead = perm[c.f[v].lead];
    out.f[pv].backup = perm[c.f[v].backup];
    out.f[pv].fence_bit = c.f[v].fence_bit;
    const auto& fn = c.fence.node[v];
    auto& ofn = out.fence.node[pv];
    ofn = fn;
    ofn.reg_parent = fn.reg_parent < 0 ? -1 : perm[fn.reg_parent];
    ofn.lend_to = fn.lend_to < 0 ? -1 : perm[fn.lend_to];
    const auto& sn = c.sigma.node[v];
    auto& osn = out.sigma.node[pv];
    osn = sn;
    osn.cut = perm[sn.cut];
    osn.drop = perm[sn.drop];
  }
  return out;
}

}  // namespace holonomy
