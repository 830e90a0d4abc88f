#pragma once

// Reference rectifier plugin: lock automatic actions, the Cutter (cycle
// breaking through alpha-segment certificates) and the Dropper (i-rip
// fixing, lock opening) with the two-level height machinery.

#include <optional>

#include "holonomy/orientation.hpp"
#include "holonomy/runtime.hpp"
#include "holonomy/sequences.hpp"

namespace holonomy {

// level-i height of an open node: the unique value in [-1, 3*2^i - 1)
// consistent with residues, lambda signs at +-0, and ground anchors
// along the senior chain.
inline std::int64_t sg_hint_lock(const NetworkConfiguration& c, int x) {
  return c.sigma.node[x].h_lock;
}

struct HatHeight {
  enum Kind { Value, Star, Bot } kind = Star;
  std::int64_t h = kUndef;
  bool final_v = false;
};

inline HatHeight sigma_hat_height(const NetworkConfiguration& c, int v, int i,
                                  std::int64_t stored_hint = kUndef) {
  HatHeight out;
  if (c.is_stub(v)) return out;
  const std::int64_t bound = 3 * (std::int64_t(1) << i) - 1;
  // walk the senior chain collecting constraints
  struct Node {
    std::int64_t rho;
    Slope zeta;
    bool ground;
    std::int64_t anchor_h;  // kUndef unless pinned to an exact height
  };
  std::vector<Node> chain;
  std::vector<char> seen(c.n(), 0);
  int x = v;
  std::int64_t rho = 0;
  bool hit_lock = false;
  std::int64_t cap = 4 * (std::int64_t(1) << i) + 4;
  while (!seen[x] && static_cast<std::int64_t>(chain.size()) <= cap) {
    if (c.is_stub(x) && x != v) {
      // stub anchor: a grounded stub pins -1, a graded lock pins its
      // own rectifier height
      std::int64_t ah = c.sigma_grounded(x) ? -1 : sg_hint_lock(c, x);
      chain.push_back({rho, c.f[x].zeta, false, ah});
      hit_lock = true;
      break;
    }
    seen[x] = 1;
    chain.push_back({rho, c.f[x].zeta, is_ground(c, x), kUndef});
    if (chain.back().ground) break;
    int nx = senior_of(c, x) == x ? c.f[x].lead : senior_of(c, x);
    if (nx == x) break;
    rho += c.dir(x, nx);
    x = nx;
  }
  auto consistent = [&](std::int64_t h) {
    for (const auto& nd : chain) {
      std::int64_t hw = h + nd.rho;
      int want = int(((hw % 3) + 3) % 3);
      if (want == 2) want = -1;
      if (nd.zeta.residue != want) return false;
      if (nd.ground && hw != nd.zeta.residue) return false;
      if (nd.anchor_h != kUndef && hw != nd.anchor_h) return false;
      if (nd.zeta.residue == 0 && hw >= 3 && hw % 3 == 0) {
        if (nd.zeta.sign != seq::lambda(hw / 3)) return false;
      }
    }
    return true;
  };
  std::vector<std::int64_t> hits;
  for (std::int64_t h = -1; h < bound; ++h)
    if (consistent(h)) hits.push_back(h);
  if (hits.empty()) {
    out.kind = HatHeight::Bot;
    return out;
  }
  if (hits.size() > 1) {
    if (stored_hint != kUndef)
      for (std::int64_t h : hits)
        if (h == stored_hint) {
          out.kind = HatHeight::Value;
          out.h = h;
          out.final_v = false;
          return out;
        }
    out.kind = HatHeight::Star;
    (void)hit_lock;
    return out;
  }
  out.kind = HatHeight::Value;
  out.h = hits[0];
  out.final_v = true;
  for (std::int64_t h = bound; h < bound + 3 * (std::int64_t(1) << i) + 3; ++h)
    if (consistent(h)) {
      out.final_v = false;
      break;
    }
  return out;
}

// i-rip per the two-case definition; undefined heights defer. Stubs
// (locks and ground anchors alike) carry the rectifier's own height.
inline bool i_rip(const NetworkConfiguration& c, const SigmaState& sg, int v, int u, int i) {
  const std::int64_t modv = 3 * (std::int64_t(1) << i);
  bool v_stub = c.is_stub(v), u_stub = c.is_stub(u);
  if (!v_stub && !u_stub) {
    HatHeight hv = sigma_hat_height(c, v, i, sg.node[v].open_h);
    if (hv.kind == HatHeight::Bot) return true;
    HatHeight hu = sigma_hat_height(c, u, i, sg.node[u].open_h);
    if (hu.kind == HatHeight::Bot) return true;
    if (hv.kind != HatHeight::Value || hu.kind != HatHeight::Value) return false;
    std::int64_t d = ((hv.h - hu.h) % modv + modv) % modv;
    return !(d == 0 || d == 1 || d == modv - 1);
  }
  if (v_stub) {
    std::int64_t hv = sg.node[v].h_lock;
    if (hv == kUndef || hv >= modv - 1) return false;
    std::int64_t hu;
    if (u_stub) {
      hu = sg.node[u].h_lock;
    } else {
      HatHeight h = sigma_hat_height(c, u, i, sg.node[u].open_h);
      hu = h.kind == HatHeight::Value && h.final_v ? h.h : kUndef;
    }
    if (hu == kUndef) return false;
    return hu > hv + 1;
  }
  return i_rip(c, sg, u, v, i);  // stub side first
}

struct ReferenceSigma : SigmaPlugin {
  int maturity_steps = 2;          // quiet steps before a lock may open
  std::int64_t cert_window = 72;   // recognizer window along cut chains
  const TokenReader* tokens = nullptr;  // leader's tree tokens (read only)

  int imax(const NetworkConfiguration& c) const {
    int d = std::max(1, c.g.diameter());
    int i = 0;
    while ((1 << i) < d + 1) ++i;
    return i;
  }

  bool mature(const ActCtx& ctx, int v) const {
    const auto& sn = ctx.c.sigma.node[v];
    return ctx.act_count >= sn.last_shape_change + std::uint64_t(maturity_steps) *
                                                       std::uint64_t(ctx.c.n());
  }

  // Sigma-illegal link: two adjacent grounded locks (the guard's table).
  bool link_legal(const NetworkConfiguration& c, int v, int w) const override {
    if (is_lock(c, v) && is_lock(c, w) && c.sigma_grounded(v) && c.sigma_grounded(w))
      return false;
    return true;
  }

  // ---- automatic lock actions --------------------------------------------

  // returns true when v crashed
  bool sigma_auto(ActCtx& ctx, int v) {
    NetworkConfiguration& c = ctx.c;
    SigmaNodeState& sn = c.sigma.node[v];
    auto adj_grounded = c.choose_neighbor(v, [&](const Link&, int w) {
      return c.is_stub(w) && c.sigma_grounded(w);
    });
    if (adj_grounded) {
      int b = c.sigma_b(v);
      bool b_anchored = (c.is_stub(b) && c.sigma_grounded(b)) ||
                        (!c.is_stub(b) && ctx.ht.h[b] != kUndef);
      bool bad = c.sigma_grounded(v) || !b_anchored ||
                 (sn.drop != v && sn.cut != v && sn.cut != sn.drop);
      if (bad) {
        ctx.crash(v, Actor::Rectifier);
        ctx.tag("sigma_crash");
        return true;
      }
    }
    // decrement toward the ground grading, when the interface allows;
    // a ward that anchors nobody (no lead or backup children) may
    // re-level freely
    bool dec_allowed = true;
    for (int w : c.g.adj[v])
      if (c.dir(v, w) == +1 && !c.is_stub(w)) dec_allowed = false;
    if (!dec_allowed && lead_children(c, v).empty() && backup_children(c, v).empty())
      dec_allowed = true;
    if (dec_allowed) {
      bool want = false;
      if (c.sigma_grounded(v)) {
        want = !(c.f[v].zeta.residue == -1);
        // a childless ground next to a live tree joins it instead of
        // descending into a fresh competing root
        if (want && lead_children(c, v).empty() && backup_children(c, v).empty()) {
          for (int w : c.g.adj[v])
            if (!c.is_stub(w) && ctx.ht.h[w] != kUndef && c.f[w].lead != v)
              want = false;
        }
      } else {
        int b = c.sigma_b(v);
        int expect = c.f[b].zeta.residue == 1 ? -1 : c.f[b].zeta.residue + 1;
        want = c.f[v].zeta.residue != expect;
      }
      if (want) {
        ctx.set_zeta(v, slope_decrement(c.f[v].zeta), Actor::Rectifier);
        ctx.tag("decrement");
      }
    }
    int b = c.sigma_b(v);
    if (b != v && is_lock(c, b) && c.sigma.node[b].long_bit == 1) sn.long_bit = 1;
    // one-hop lock height update; a ground anchors at its slope value
    std::int64_t old_h = sn.h_lock;
    if (c.sigma_grounded(v)) {
      sn.h_lock = c.f[v].zeta.residue;
    } else {
      std::int64_t hb = kUndef;
      if (is_lock(c, b))
        hb = c.sigma.node[b].h_lock;
      else if (c.is_stub(b))
        hb = c.sigma.node[b].h_lock;
      else
        hb = c.sigma.node[b].open_h;
      if (hb != kUndef) {
        if (sn.long_bit) {
          if (sn.h_lock == kUndef || hb + 1 < sn.h_lock) {
            sn.h_lock = hb + 1;  // long bit clears only on decrease
            sn.long_bit = 0;
          }
        } else {
          sn.h_lock = hb + 1;
        }
      }
    }
    if (sn.h_lock != old_h) sn.last_shape_change = ctx.act_count;
    return false;
  }

  // ---- cutter -------------------------------------------------------------

  // walk the cut chain from v collecting certificates; empty when any
  // link in the window is missing one
  std::string cert_window_from(const NetworkConfiguration& c, int v) const {
    std::string w;
    std::vector<char> seen(c.n(), 0);
    int x = v;
    while (!seen[x] && static_cast<std::int64_t>(w.size()) < cert_window) {
      if (!is_lock(c, x) && x != v) break;
      const auto& sn = c.sigma.node[x];
      if (!sn.has_cert) return w;  // incomplete prefix checked as-is
      w.push_back(sn.cert.code());
      seen[x] = 1;
      int nx = sn.cut;
      if (nx == x) break;
      if (!is_lock(c, nx)) break;
      x = nx;
    }
    return w;
  }

  void cutter(ActCtx& ctx, int v) {
    NetworkConfiguration& c = ctx.c;
    SigmaNodeState& sn = c.sigma.node[v];
    if (c.sigma_grounded(v)) {
      if (!sn.has_cert) {
        sn.cert = seq::alpha(1);
        sn.has_cert = true;
      }
      sn.uncert_since = 0;
      return;
    }
    // a looped cut whose B chain anchors outside the lock graph is a
    // one-node chain: trivially acyclic
    if (sn.cut == v && sn.drop != v && !is_lock(c, sn.drop)) {
      if (!sn.has_cert) {
        sn.cert = seq::alpha(1);
        sn.has_cert = true;
      }
      sn.uncert_since = 0;
      return;
    }
    // certificate check along the cut chain
    if (sn.has_cert) {
      std::string w = cert_window_from(c, v);
      if (w.size() >= 2 && !seq::alpha_index().contains(w)) {
        ctx.crash(v, Actor::Rectifier);
        ctx.tag("sigma_crash");
        return;
      }
    }
    // mend: align the cut pointer onto the B chain and extend the
    // certified segment one node at a time
    auto mend_from = [&](int target) {
      std::string wb = cert_window_from(c, target);
      if (wb.empty()) return false;
      std::int64_t k = seq::alpha_index().find(wb);
      if (k < 2) return false;
      sn.cut = target;
      sn.cert = seq::alpha(k - 1);
      sn.has_cert = true;
      sn.uncert_since = 0;
      ctx.tag("cut_merge");
      return true;
    };
    bool mended = false;
    if (sn.drop != v && (c.is_stub(sn.drop) || is_lock(c, sn.drop)) &&
        sn.cut != sn.drop) {
      mended = mend_from(sn.drop);  // AM.2 un-loop / AM.4 merge onto B
    } else if (!sn.has_cert && sn.cut != v &&
               (c.is_stub(sn.cut) || is_lock(c, sn.cut))) {
      mended = mend_from(sn.cut);
    }
    // a lock that cannot certify within its patience sits on an
    // anchorless chain (a cycle): crash it
    if (!sn.has_cert && !mended) {
      if (sn.uncert_since == 0) {
        sn.uncert_since = ctx.act_count + 1;
      } else if (ctx.act_count - sn.uncert_since >
                 std::uint64_t(2 * c.n())) {
        ctx.crash(v, Actor::Rectifier);
        ctx.tag("sigma_crash");
      }
    } else if (sn.has_cert) {
      sn.uncert_since = 0;
    }
  }

  // ---- dropper ------------------------------------------------------------

  bool open_permitted(ActCtx& ctx, int v, int t) const {
    const NetworkConfiguration& c = ctx.c;
    if (!c.is_stub(t)) return false;
    if (c.dir(v, t) != -1) return false;  // target strictly under
    if (c.f[t].lead == v) return false;   // never close a lead 2-cycle
    if (!(reset_pattern(c, t) || c.sigma_grounded(t))) return false;
    // a target whose only stub neighbor is the opener turns terminal:
    // it must be a finished ground anchor (grounded, at -1); mid-slope
    // lock targets are graded by the strictly-under requirement
    bool stays_lock = false;
    for (int w : c.g.adj[t])
      if (w != v && w != t && c.is_stub(w)) stays_lock = true;
    if (!stays_lock || c.sigma_grounded(t)) {
      if (!c.sigma_grounded(t)) return false;
      if (c.f[t].zeta.residue != -1) return false;
    }
    for (int w : c.g.adj[v]) {
      int d = c.dir(v, w);
      if (d == -1 && !c.is_stub(w)) return false;  // all down edges to stubs
      if (d == +1 && c.is_stub(w)) return false;   // no up edge to a stub
    }
    // no incident i-rips
    int im = imax(c);
    for (int w : c.g.adj[v])
      if (i_rip(c, c.sigma, v, w, im)) return false;
    return true;
  }

  void dropper(ActCtx& ctx, int v) {
    NetworkConfiguration& c = ctx.c;
    const int im = imax(c);
    if (!c.is_stub(v)) {
      // a lead chain that cycles without reaching a stub has no anchor:
      // the structure is invalid and the whole region is crashed
      {
        std::vector<char> seen(c.n(), 0);
        int x = v;
        bool anchored = false;
        while (!seen[x]) {
          seen[x] = 1;
          if (c.is_stub(x)) {
            anchored = true;
            break;
          }
          x = c.f[x].lead;
        }
        if (!anchored) {
          ctx.crash(v, Actor::Rectifier);
          ctx.tag("sigma_crash");
          ctx.note("crash:unanchored");
          return;
        }
      }
      // open node: crash on inconsistent heights; a low subtree too small
      // to determine its height (and holding no written info) goes too
      HatHeight hh = sigma_hat_height(c, v, im, c.sigma.node[v].open_h);
      if (hh.kind == HatHeight::Bot) {
        ctx.crash(v, Actor::Rectifier);
        ctx.tag("sigma_crash");
        ctx.note("crash:bot");
        return;
      }
      if (hh.kind == HatHeight::Star && c.sigma.node[v].open_h == kUndef &&
          is_low(c, v)) {
        ctx.crash(v, Actor::Rectifier);
        ctx.tag("sigma_crash");
        ctx.note("crash:star");
        return;
      }
      if (hh.kind == HatHeight::Value) c.sigma.node[v].open_h = hh.h;
    }
    // rip scan around v
    for (int u : c.g.adj[v]) {
      if (!i_rip(c, c.sigma, v, u, im)) continue;
      bool v_stub = c.is_stub(v), u_stub = c.is_stub(u);
      if (!v_stub && !u_stub) {
        // open-open inconsistency: crash the side with the weaker
        // anchor (self-anchored split debris before root-anchored
        // chains), then the higher one
        auto anchor_rank = [&](int x) {
          std::vector<char> seen(c.n(), 0);
          int e = x;
          while (!seen[e]) {
            seen[e] = 1;
            int ne = senior_of(c, e);
            if (ne == e) break;
            e = ne;
          }
          if (senior_of(c, e) != e) return -1;  // senior cycle
          if (is_root(c, e)) return 2;
          if (c.is_stub(e)) return 1;
          return 0;  // ground split
        };
        int rv = anchor_rank(v), ru = anchor_rank(u);
        int victim;
        if (rv != ru) {
          victim = rv < ru ? v : u;
        } else {
          HatHeight hv = sigma_hat_height(c, v, im, c.sigma.node[v].open_h);
          HatHeight hu = sigma_hat_height(c, u, im, c.sigma.node[u].open_h);
          victim = v;
          if (hv.kind == HatHeight::Value && hu.kind == HatHeight::Value)
            victim = hu.h > hv.h ? u : v;
          else if (hv.kind != HatHeight::Bot && hu.kind == HatHeight::Bot)
            victim = u;
        }
        ctx.crash(victim, Actor::Rectifier);
        ctx.tag("sigma_crash");
        ctx.note("crash:openrip");
        return;
      }
      auto stub_h = [&](int x) { return c.sigma.node[x].h_lock; };
      int lo = v_stub ? v : u;
      int hi2 = v_stub ? u : v;
      if (v_stub && u_stub) {
        std::int64_t hv = stub_h(v), hu = stub_h(u);
        if (hv != kUndef && hu != kUndef && hu < hv) {
          lo = u;
          hi2 = v;
        }
      }
      if (!c.is_stub(hi2)) {
        ctx.crash(hi2, Actor::Rectifier);
        ctx.tag("sigma_crash");
        ctx.note("crash:bstubrip");
      }
      auto& hn = c.sigma.node[hi2];
      if (hn.drop != lo) {
        hn.drop = lo;
        hn.long_bit = 1;
        hn.last_shape_change = ctx.act_count;
        ctx.tag("rip_fix");
      }
      return;
    }
    // opening wards back into the tree, top-down
    if (sigma_ward(c, v) && mature(ctx, v)) {
      // boundary variant: the B pointer hangs down into an open tree at
      // the graded height, and no stub sits above
      int bt = c.sigma_b(v);
      if (bt != v && !c.is_stub(bt) && c.dir(v, bt) == -1 &&
          c.f[bt].lead != v &&
          c.sigma.node[v].h_lock != kUndef && ctx.ht.h[bt] != kUndef &&
          c.sigma.node[v].h_lock == ctx.ht.h[bt] + 1) {
        bool up_stub = false;
        for (int w : c.g.adj[v])
          if (c.dir(v, w) == +1 && c.is_stub(w)) up_stub = true;
        bool ripped = false;
        for (int w : c.g.adj[v])
          if (i_rip(c, c.sigma, v, w, imax(c))) ripped = true;
        if (!up_stub && !ripped) {
          ctx.set_lead(v, bt, Actor::Rectifier);
          ctx.set_backup(v, v, Actor::Rectifier);
          ctx.set_fence(v, 1, Actor::Rectifier);
          ctx.tag("open");
          auto& sn = c.sigma.node[v];
          sn.open_h = sn.h_lock;
          sn.last_shape_change = ctx.act_count;
          return;
        }
      }
      int t = c.f[v].backup;
      bool aimed = t != v && open_permitted(ctx, v, t);
      if (!aimed) {
        auto cand = c.choose_neighbor(v, [&](const Link&, int w) {
          return open_permitted(const_cast<ActCtx&>(ctx), v, w);
        });
        if (cand) {
          ctx.set_backup(v, *cand, Actor::Rectifier);
          return;  // open on a later activation, aim visible first
        }
        auto& sn = c.sigma.node[v];
        // a childless grounded ward walled in by a live tree re-aims at
        // it, re-levels, and joins from above
        if (c.sigma_grounded(v) && lead_children(c, v).empty() &&
            backup_children(c, v).empty()) {
          auto live = c.choose_neighbor(v, [&](const Link&, int w) {
            return !c.is_stub(w) && ctx.ht.h[w] != kUndef && c.f[w].lead != v;
          });
          if (live) {
            sn.drop = *live;
            sn.has_cert = false;
            sn.last_shape_change = ctx.act_count;
            return;
          }
        }
        // stuck ward with a non-looping B and nothing to open onto:
        // after a long patience it re-grounds and the era restarts
        if (!c.sigma_grounded(v) &&
            ctx.act_count > sn.last_shape_change +
                                std::uint64_t(8 * maturity_steps) *
                                    std::uint64_t(c.n())) {
          sn.drop = v;
          sn.cut = v;
          sn.cert = seq::alpha(1);
          sn.has_cert = true;
          sn.h_lock = c.f[v].zeta.residue;
          sn.last_shape_change = ctx.act_count;
          ctx.tag("ground_crash");
        }
        return;
      }
      // open: swap lead/backup into single-on
      ctx.set_lead(v, t, Actor::Rectifier);
      ctx.set_backup(v, v, Actor::Rectifier);
      ctx.set_fence(v, 1, Actor::Rectifier);
      ctx.tag("open");
      auto& sn = c.sigma.node[v];
      if (sn.h_lock != kUndef) {
        sn.open_h = sn.h_lock;
        if (c.f[v].zeta.residue == 0 && sn.open_h >= 3 && sn.open_h % 3 == 0) {
          Slope s = c.f[v].zeta;
          s.sign = static_cast<std::int8_t>(seq::lambda(sn.open_h / 3));
          if (s.sign != c.f[v].zeta.sign) ctx.set_zeta(v, s, Actor::Rectifier);
        }
      }
      sn.last_shape_change = ctx.act_count;
    }
  }

  std::uint64_t seen_version = ~std::uint64_t(0);
  std::vector<char> checked;

  // root tournament: a root whose tree drew a smaller token than some
  // other live tree loses and is crashed; its region drains into the
  // winner through the ward cycles and defections
  bool tournament(ActCtx& ctx, int v) {
    NetworkConfiguration& c = ctx.c;
    if (!tokens) return false;
    if (!is_root(c, v) || !f_reset_pattern(c.f, v)) {
      if (classify(c, v) != ShellClass::RootOn && classify(c, v) != ShellClass::RootOff)
        return false;
    }
    std::uint64_t mine = tokens->tree_token(v);
    if (mine == 0 || !mature(ctx, v)) return false;
    for (int x = 0; x < c.n(); ++x)
      if (tokens->tree_token(x) > mine && !c.is_stub(x) && ctx.ht.h[x] != kUndef) {
        ctx.crash(v, Actor::Rectifier);
        ctx.tag("sigma_crash");
        ctx.note("crash:tournament");
        return true;
      }
    return false;
  }

  // hold a crashed root down while a live tokened tree borders its
  // region: it must drain and join rather than resurrect
  void hold_contested_ward(ActCtx& ctx, int v) {
    NetworkConfiguration& c = ctx.c;
    if (!tokens) return;
    if (!c.is_stub(v) || !f_reset_pattern(c.f, v) || is_lock(c, v)) return;
    std::vector<char> region(c.n(), 0);
    region[v] = 1;
    for (int x = 0; x < c.n(); ++x) {
      std::vector<char> seen(c.n(), 0);
      int y = x;
      while (!seen[y] && !region[y]) {
        seen[y] = 1;
        int ny = c.f[y].lead;
        if (ny == y) break;
        y = ny;
      }
      if (region[y]) region[x] = 1;
    }
    for (int x = 0; x < c.n(); ++x) {
      if (!region[x]) continue;
      for (int w : c.g.adj[x])
        if (!region[w] && !c.is_stub(w) && tokens->tree_token(w) != 0 &&
            ctx.ht.h[w] != kUndef) {
          c.sigma.node[v].last_shape_change = ctx.act_count;
          return;
        }
    }
  }

  void act(ActCtx& ctx, int v) override {
    NetworkConfiguration& c = ctx.c;
    if ((classify(c, v) == ShellClass::RootOn ||
         classify(c, v) == ShellClass::RootOff) &&
        tournament(ctx, v))
      return;
    hold_contested_ward(ctx, v);
    if (sigma_ward(c, v)) {
      if (sigma_auto(ctx, v)) return;
      cutter(ctx, v);
      if (sigma_ward(c, v)) dropper(ctx, v);
      return;
    }
    // once the configuration shape settles, each open node needs only a
    // single consistency pass per shape version
    if (seen_version != c.shape_version) {
      seen_version = c.shape_version;
      checked.assign(c.n(), 0);
    }
    if (checked[v]) return;
    checked[v] = 1;
    dropper(ctx, v);
  }
};

}  // namespace holonomy
