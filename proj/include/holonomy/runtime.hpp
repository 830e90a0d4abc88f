#pragma once

// Activation context: attributed writes to shared fields, the composite
// crash/float operations, coin draws, and the plugin interfaces every
// protocol (reference or third-party) implements.

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "holonomy/classify.hpp"
#include "holonomy/config.hpp"
#include "holonomy/heights.hpp"
#include "holonomy/trace.hpp"

namespace holonomy {

struct ActCtx {
  NetworkConfiguration& c;
  HeightTracker& ht;
  TraceEvent& ev;
  std::mt19937_64& coin_rng;
  std::uint64_t act_count = 0;

  int coin() {
    int b = static_cast<int>(coin_rng() & 1u);
    ev.coins.push_back(b);
    return b;
  }

  void tag(const std::string& t) { ev.tags.push_back(t); }
  void note(const std::string& t) { ev.notes.push_back(t); }

  void set_zeta(int x, Slope val, Actor a) {
    if (c.f[x].zeta == val) return;
    ev.writes.push_back({x, SharedField::Zeta, pack_zeta(c.f[x].zeta), pack_zeta(val), a});
    c.f[x].zeta = val;
    ++c.shape_version;
    ht.on_shared_change(c, x);
  }

  void set_lead(int x, int t, Actor a) {
    if (c.f[x].lead == t) return;
    ev.writes.push_back({x, SharedField::Lead, c.f[x].lead, t, a});
    c.f[x].lead = t;
    ++c.shape_version;
    ht.on_shared_change(c, x);
  }

  void set_backup(int x, int t, Actor a) {
    if (c.f[x].backup == t) return;
    ev.writes.push_back({x, SharedField::Backup, c.f[x].backup, t, a});
    c.f[x].backup = t;
    ++c.shape_version;
    ht.on_shared_change(c, x);
  }

  void set_fence(int x, int bit, Actor a) {
    if (c.f[x].fence_bit == bit) return;
    ev.writes.push_back({x, SharedField::FenceBit, c.f[x].fence_bit, bit, a});
    c.f[x].fence_bit = static_cast<std::uint8_t>(bit);
    ht.on_shared_change(c, x);
    if (bit == 1) ht.on_fence_on(c, x);
  }

  // Float: increments the slope of a non-root with no root neighbors and
  // no down edges. Returns false (and notes a violation) otherwise.
  bool float_op(int x, Actor a) {
    bool bad = is_root(c, x);
    for (int w : c.g.adj[x]) {
      if (is_root(c, w)) bad = true;
      if (c.dir(x, w) == -1) bad = true;
    }
    if (bad) {
      note(std::string("float_refused:") + actor_name(a));
      return false;
    }
    std::int8_t sgn = +1;
    if (c.f[x].zeta.residue == -1) {
      std::int8_t pre = c.fence.node[x].sgn_next;
      if (pre != 0) sgn = pre;
    }
    set_zeta(x, slope_increment(c.f[x].zeta, sgn), a);
    tag("float");
    return true;
  }

  // Crash: forced reinitialization into the reset class. Clears this
  // node's certificate structures and voids the adjacent fence groups.
  void crash(int x, Actor a) {
    ev.crashed.push_back(x);
    set_lead(x, x, a);
    if (c.f[x].backup == x) {
      auto nb = c.choose_neighbor(x, [](const Link&, int) { return true; });
      if (nb) set_backup(x, *nb, a);
    }
    set_fence(x, 1, a);

    SigmaNodeState& sn = c.sigma.node[x];
    sn.cut = x;
    // aim order favors live anchors: hooking the surviving tree keeps a
    // dying region from resurrecting around its old ground
    auto open_under = c.choose_neighbor(x, [&](const Link&, int w) {
      return !c.is_stub(w) && c.dir(x, w) == -1 && ht.h[w] != kUndef &&
             c.f[w].lead != x;
    });
    auto grounded_stub = c.choose_neighbor(x, [&](const Link&, int w) {
      return c.is_stub(w) && c.sigma_grounded(w);
    });
    auto lock_alt = c.choose_neighbor(x, [&](const Link&, int w) {
      return is_lock(c, w) && c.sigma.node[w].cut != w && c.sigma.node[w].long_bit == 0;
    });
    auto hooked_stub = c.choose_neighbor(x, [&](const Link&, int w) {
      return c.is_stub(w) && c.sigma.node[w].drop != w &&
             c.sigma.node[w].drop != x && c.sigma.node[w].long_bit == 0;
    });
    auto open_any = c.choose_neighbor(x, [&](const Link&, int w) {
      return !c.is_stub(w) && ht.h[w] != kUndef && c.f[w].lead != x;
    });
    if (open_under) {
      sn.drop = *open_under;
      sn.has_cert = false;
    } else if (grounded_stub) {
      sn.drop = *grounded_stub;
      sn.has_cert = false;
    } else if (lock_alt) {
      sn.drop = *lock_alt;
      sn.has_cert = false;
    } else if (hooked_stub) {
      sn.drop = *hooked_stub;
      sn.has_cert = false;
    } else if (open_any) {
      sn.drop = *open_any;
      sn.has_cert = false;
    } else {
      sn.drop = x;  // grounding crash
      sn.cert = seq::alpha(1);
      sn.has_cert = true;
      tag("ground_crash");
    }
    sn.long_bit = 0;
    sn.h_lock = sn.drop == x ? -1 : kUndef;
    sn.open_h = kUndef;
    sn.last_shape_change = act_count;

    FenceNodeState& fn = c.fence.node[x];
    fn.reborn = true;
    fn.stage = FStage::Idle;
    fn.reg_parent = -1;
    fn.lend_to = -1;
    fn.sgn_next = 0;
    fn.known_h = kUndef;
    // restart machinery: adjacent servers void, adjacent clients cleared
    for (auto& grp : c.fence.groups) {
      bool adjacent = false;
      for (int m : grp.members)
        if (m == x || c.g.has_edge(m, x)) {
          adjacent = true;
          break;
        }
      if (!adjacent) continue;
      if (grp.server) {
        grp.voided = true;
      } else {
        for (int m : grp.members) c.fence.node[m].client = -1;
        grp.members.clear();
        grp.voided = true;
      }
    }
    fn.client = -1;
    fn.server = -1;

    ht.on_crash(c, x);
    tag("crash");
  }
};

// Shared plugin interface: the shell invokes plugins through these
// hooks; conformance fuzzing loads third-party implementations the same
// way. Writes go through the context and are attributed per actor.
struct LeaderPlugin {
  virtual ~LeaderPlugin() = default;
  virtual std::string name() const { return "leader"; }
  // invoked by the shell split rule
  virtual void on_invoke(ActCtx& ctx, int v) = 0;
  // per-activation hook for private bookkeeping (no shared writes)
  virtual void act(ActCtx&, int) {}
  virtual bool link_legal(const NetworkConfiguration&, int, int) const { return true; }
};

struct FencePlugin {
  virtual ~FencePlugin() = default;
  virtual std::string name() const { return "fence"; }
  virtual void act(ActCtx& ctx, int v) = 0;  // every activation
  virtual void on_root_on(ActCtx& ctx, int r) = 0;
  virtual void on_split(ActCtx& ctx, int v) = 0;
  virtual bool link_legal(const NetworkConfiguration&, int, int) const { return true; }
};

struct SigmaPlugin {
  virtual ~SigmaPlugin() = default;
  virtual std::string name() const { return "rectifier"; }
  virtual void act(ActCtx& ctx, int v) = 0;  // every activation, invoked last
  virtual bool link_legal(const NetworkConfiguration&, int, int) const { return true; }
};

struct PluginSet {
  std::unique_ptr<LeaderPlugin> leader;
  std::unique_ptr<FencePlugin> fence;
  std::unique_ptr<SigmaPlugin> sigma;
};

// reference plugins share read access (write restrictions are the only
// hard interface); the rectifier reads the leader's tree tokens to
// settle root tournaments
struct TokenReader {
  virtual ~TokenReader() = default;
  virtual std::uint64_t tree_token(int v) const = 0;
};

}  // namespace holonomy
