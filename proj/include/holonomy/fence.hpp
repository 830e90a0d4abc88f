#pragma once

// Reference fence plugin: the two-phase cycle with its checks, client /
// server height groups, pointer lending for splits, and the reborn/void
// restart machinery.

#include <cmath>

#include "holonomy/runtime.hpp"

namespace holonomy {

namespace fence_detail {

// per-table stage order; -1 when idle / unregistered
inline int stage_index(bool hi, std::uint8_t phase, FStage st) {
  if (st == FStage::Idle) return -1;
  if (hi) {
    static constexpr int tab[2][4] = {{-1, 0, 1, 2}, {-1, 3, 4, 5}};
    return tab[phase][static_cast<int>(st)];
  }
  // low: S0 A0 A1 D0 S1 D1
  if (phase == 0) {
    switch (st) {
      case FStage::Start: return 0;
      case FStage::Active: return 1;
      case FStage::Done: return 3;
      default: return -1;
    }
  }
  switch (st) {
    case FStage::Active: return 2;
    case FStage::Start: return 4;
    case FStage::Done: return 5;
    default: return -1;
  }
}

}  // namespace fence_detail

struct ReferenceFence : FencePlugin {
  // knobs: singleton clients below this rise, per the desk-scale rule
  std::int64_t singleton_rho = 8;

  // ---- helpers ----------------------------------------------------------

  static bool in_stage(const NetworkConfiguration& c, int v, std::uint8_t ph, FStage st) {
    const auto& fn = c.fence.node[v];
    return fn.stage == st && fn.phase == ph;
  }

  bool node_hi_mark(const NetworkConfiguration& c, int v) const {
    const auto& fn = c.fence.node[v];
    if (fn.stage != FStage::Idle) return fn.hi != 0;
    return is_hi(c, v);
  }

  int idx_of(const NetworkConfiguration& c, int v) const {
    const auto& fn = c.fence.node[v];
    return fence_detail::stage_index(node_hi_mark(c, v), fn.phase, fn.stage);
  }

  // has w reached (ph,st) on w's own scale?
  bool reached(const NetworkConfiguration& c, int w, std::uint8_t ph, FStage st) const {
    int want = fence_detail::stage_index(node_hi_mark(c, w), ph, st);
    return idx_of(c, w) >= want && want >= 0;
  }

  std::vector<int> reg_children(const NetworkConfiguration& c, int v) const {
    std::vector<int> out;
    const auto& fn = c.fence.node[v];
    for (int w : c.g.adj[v]) {
      const auto& wn = c.fence.node[w];
      // members the start wave has not reached yet still count: the
      // cycle must wait for them to join
      if (wn.reg_parent == v && wn.reg_epoch == fn.reg_epoch && c.f[w].lead == v)
        out.push_back(w);
    }
    return out;
  }

  // all registered members of v's tree that the on-wave has reached
  bool kids_reached(const NetworkConfiguration& c, int v, std::uint8_t ph, FStage st) const {
    for (int w : reg_children(c, v))
      if (!reached(c, w, ph, st)) return false;
    return true;
  }

  // ---- groups ------------------------------------------------------------

  static bool group_alive(const HeightGroup& g) { return !g.members.empty() && !g.voided; }

  int group_of(const NetworkConfiguration& c, int v, bool server) const {
    int id = server ? c.fence.node[v].server : c.fence.node[v].client;
    if (id < 0 || id >= static_cast<int>(c.fence.groups.size())) return -1;
    return id;
  }

  void void_groups_touching(NetworkConfiguration& c, int v) {
    for (auto& g : c.fence.groups) {
      if (g.members.empty() || g.voided) continue;
      for (int m : g.members)
        if (m == v) {
          g.voided = true;
          break;
        }
    }
  }

  // client knowledge: fresh unvoided client containing v
  bool height_known(const NetworkConfiguration& c, int v) const {
    int id = group_of(c, v, false);
    if (id < 0) return false;
    const auto& g = c.fence.groups[id];
    return group_alive(g) && g.epoch == c.fence.node[v].reg_epoch;
  }

  // ---- registration ------------------------------------------------------

  void on_root_on(ActCtx& ctx, int r) override {
    NetworkConfiguration& c = ctx.c;
    std::uint32_t epoch = ++c.fence.epoch_counter;
    // previous clients of this tree are stale; previous servers keep
    // serving this cycle
    for (std::size_t i = 0; i < c.fence.groups.size(); ++i) {
      auto& g = c.fence.groups[i];
      if (g.tree_root != r || g.server) continue;
      for (int m : g.members)
        if (c.fence.node[m].client == static_cast<int>(i)) c.fence.node[m].client = -1;
      g.members.clear();
    }
    // collect the lead tree (registration snapshot)
    std::vector<int> members{r};
    std::vector<std::int64_t> rho(c.n(), 0);
    std::vector<char> in_tree(c.n(), 0);
    in_tree[r] = 1;
    for (std::size_t i = 0; i < members.size(); ++i) {
      int x = members[i];
      for (int w : c.g.adj[x]) {
        if (in_tree[w] || c.f[w].lead != x || w == x) continue;
        in_tree[w] = 1;
        rho[w] = rho[x] + c.dir(x, w);
        members.push_back(w);
      }
    }
    for (int x : members) {
      auto& fn = c.fence.node[x];
      fn.reg_parent = x == r ? -1 : c.f[x].lead;
      fn.reg_epoch = epoch;
      fn.stage = FStage::Idle;  // set when the on-wave arrives
      fn.phase = 0;
      fn.hi = is_hi(c, x) ? 1 : 0;
      fn.apex = is_apex(c, x) ? 1 : 0;
      fn.loose = (fn.apex && lead_children(c, x).empty()) ? 1 : 0;
      fn.wants_loan = 0;
      fn.lend_to = -1;
      fn.client = -1;
      fn.prog_token = 0;
    }
    c.fence.node[r].stage = FStage::Start;
    c.fence.node[r].phase = 0;
    c.fence.node[r].joined_epoch = epoch;

    // clients: singleton chunks near the root, Theta(lg rho) chunks above
    std::int64_t base = ctx.ht.h[r] != kUndef ? ctx.ht.h[r]
                                              : std::int64_t(c.f[r].zeta.residue);
    std::vector<char> assigned(c.n(), 0);
    for (int x : members) {
      if (assigned[x]) continue;
      bool reborn_adj = c.fence.node[x].reborn;
      for (int w : c.g.adj[x]) reborn_adj = reborn_adj || c.fence.node[w].reborn;
      if (reborn_adj) {
        assigned[x] = 1;  // joins a chunk only after the restart clears
        continue;
      }
      std::int64_t r_abs = rho[x] < 0 ? -rho[x] : rho[x];
      std::size_t want = 1;
      if (r_abs > singleton_rho)
        want = static_cast<std::size_t>(std::ceil(std::log2(double(r_abs) + 1)));
      HeightGroup grp;
      grp.server = false;
      grp.epoch = epoch;
      grp.tree_root = r;
      grp.anchor = x;
      grp.rho = rho[x];
      // grow a chunk from x over unassigned tree nodes, BFS
      std::vector<int> chunk{x};
      assigned[x] = 1;
      for (std::size_t i = 0; i < chunk.size() && chunk.size() < 2 * want; ++i) {
        int y = chunk[i];
        for (int w : c.g.adj[y]) {
          if (chunk.size() >= 2 * want) break;
          if (!in_tree[w] || assigned[w] || c.f[w].lead != y) continue;
          bool radj = c.fence.node[w].reborn;
          for (int z : c.g.adj[w]) radj = radj || c.fence.node[z].reborn;
          if (radj) continue;
          assigned[w] = 1;
          chunk.push_back(w);
        }
        if (chunk.size() >= want) break;
      }
      grp.members = chunk;
      for (int m : chunk) grp.offset.push_back(base + rho[m]);
      grp.timer_bound = std::max<std::int64_t>(1023, 64 * c.n() * std::int64_t(chunk.size()));
      int id = static_cast<int>(c.fence.groups.size());
      for (int m : chunk) c.fence.node[m].client = id;
      c.fence.groups.push_back(std::move(grp));
    }
    compact_groups(c);
  }

  void compact_groups(NetworkConfiguration& c) {
    if (c.fence.groups.size() < static_cast<std::size_t>(8 * c.n() + 16)) return;
    std::vector<HeightGroup> keep;
    std::vector<int> remap(c.fence.groups.size(), -1);
    for (std::size_t i = 0; i < c.fence.groups.size(); ++i) {
      if (c.fence.groups[i].members.empty()) continue;
      remap[i] = static_cast<int>(keep.size());
      keep.push_back(std::move(c.fence.groups[i]));
    }
    for (auto& fn : c.fence.node) {
      fn.client = fn.client >= 0 ? remap[fn.client] : -1;
      fn.server = fn.server >= 0 ? remap[fn.server] : -1;
    }
    c.fence.groups = std::move(keep);
  }

  void on_split(ActCtx& ctx, int v) override {
    auto& fn = ctx.c.fence.node[v];
    if (fn.phase == 1 && fn.stage == FStage::Done) fn.stage = FStage::Start;  // recycle
  }

  // ---- checks ------------------------------------------------------------

  bool rip_on_edge(const ActCtx& ctx, int v, int u) const {
    return ctx.ht.is_rip(ctx.c, v, u);
  }

  // can v's backup parent serve as a lender at all?
  bool lender_eligible(const NetworkConfiguration& c, int v) const {
    int lender = c.f[v].backup;
    if (lender == v) return false;
    if (classify(c, lender) != ShellClass::Single) return false;
    if (node_hi_mark(c, lender)) return false;
    if (c.f[lender].lead == v) return false;  // tangled: lender is our child
    return true;
  }

  // returns true when all edges pass; voids servers and blocks on a rip
  bool rip_check_all(ActCtx& ctx, int v) {
    NetworkConfiguration& c = ctx.c;
    if (classify(c, v) == ShellClass::Split && lender_eligible(c, v)) {
      // splits borrow the rotating pointer from the backup parent
      auto& fn = c.fence.node[v];
      int lender = c.f[v].backup;
      if (c.fence.node[lender].lend_to != v) {
        if (fn.loan_epoch == fn.reg_epoch && fn.reg_epoch != 0) {
          ctx.note("loan_refused");  // at most one loan per cycle
          return false;
        }
        fn.wants_loan = 1;
        return false;
      }
      // consume the loan
      c.fence.node[lender].lend_to = -1;
      fn.wants_loan = 0;
      fn.loan_epoch = fn.reg_epoch;
      ctx.tag("loan");
    }
    bool ok = true;
    for (int u : c.g.adj[v]) {
      if (rip_on_edge(ctx, v, u)) {
        ctx.tag("rip_detected");
        void_server_near(ctx.c, v, u);
        ok = false;
      }
    }
    return ok;
  }

  void void_server_near(NetworkConfiguration& c, int v, int u) {
    for (int x : {v, u}) {
      int id = group_of(c, x, true);
      if (id >= 0) c.fence.groups[id].voided = true;
    }
  }

  bool rip_check_lead(ActCtx& ctx, int v) {
    int p = ctx.c.f[v].lead;
    if (p == v) return true;
    if (rip_on_edge(ctx, v, p)) {
      ctx.tag("rip_detected");
      void_server_near(ctx.c, v, p);
      return false;
    }
    return true;
  }

  // the phase-0 neighbor waits, memoized since gate entry: every hi
  // neighbor observed in phase 0 (or passing through active-1 then
  // start-1), every low neighbor observed parked in phase 0 or idle
  bool neighbor_waits(ActCtx& ctx, int v) {
    NetworkConfiguration& c = ctx.c;
    auto& fn = c.fence.node[v];
    std::uint64_t token = (std::uint64_t(fn.reg_epoch) << 8) |
                          (std::uint64_t(fn.phase) << 4) |
                          std::uint64_t(static_cast<int>(fn.stage));
    if (fn.prog_token != token || fn.nb_prog.size() != c.g.adj[v].size()) {
      fn.prog_token = token;
      fn.nb_prog.assign(c.g.adj[v].size(), 0);
    }
    bool ok = true;
    for (std::size_t i = 0; i < c.g.adj[v].size(); ++i) {
      int w = c.g.adj[v][i];
      if (is_lock(c, w)) continue;
      const auto& wn = c.fence.node[w];
      if (is_hi(c, w)) {
        if (wn.stage == FStage::Idle || wn.phase == 0) fn.nb_prog[i] |= 2;
        if (wn.phase == 1 && wn.stage == FStage::Active) fn.nb_prog[i] |= 1;
        if ((fn.nb_prog[i] & 1) && wn.phase == 1 && wn.stage == FStage::Start)
          fn.nb_prog[i] |= 2;
      } else {
        if (wn.stage == FStage::Idle || wn.phase == 0) fn.nb_prog[i] |= 2;
      }
      if (!(fn.nb_prog[i] & 2)) ok = false;
    }
    return ok;
  }

  // loose active-1 wait: low loose neighbors in phase 0 or active-1
  bool loose_a1_wait(ActCtx& ctx, int v) const {
    NetworkConfiguration& c = ctx.c;
    for (int w : c.g.adj[v]) {
      if (is_lock(c, w) || is_hi(c, w)) continue;
      const auto& wn = c.fence.node[w];
      if (wn.stage == FStage::Idle || wn.phase == 0) continue;
      if (wn.phase == 1 && wn.stage == FStage::Active) continue;
      return false;
    }
    return true;
  }

  // ---- lending -----------------------------------------------------------

  void lend(ActCtx& ctx, int v) {
    NetworkConfiguration& c = ctx.c;
    auto& fn = c.fence.node[v];
    if (fn.lend_to >= 0) {
      // outstanding loan: withdrawn once the borrower left or stopped asking
      if (c.f[fn.lend_to].backup != v || !c.fence.node[fn.lend_to].wants_loan)
        fn.lend_to = -1;
      return;
    }
    if (classify(c, v) != ShellClass::Single || node_hi_mark(c, v)) return;
    if (!(fn.phase == 0 &&
          (fn.stage == FStage::Start || fn.stage == FStage::Active)))
      return;
    auto pick = c.choose_neighbor(v, [&](const Link&, int w) {
      return c.f[w].backup == v && classify(c, w) == ShellClass::Split &&
             c.fence.node[w].wants_loan != 0 &&
             !(c.fence.node[w].loan_epoch == c.fence.node[w].reg_epoch &&
               c.fence.node[w].reg_epoch != 0);
    });
    if (pick) fn.lend_to = *pick;
  }

  // ---- main per-activation hook -------------------------------------------

  void act(ActCtx& ctx, int v) override {
    NetworkConfiguration& c = ctx.c;
    auto& fn = c.fence.node[v];

    // timers: adversarially initiated structures terminate promptly
    for (bool srv : {false, true}) {
      int id = group_of(c, v, srv);
      if (id >= 0) {
        auto& g = c.fence.groups[id];
        if (group_alive(g) && ++g.step_counter > g.timer_bound) g.voided = true;
      }
    }

    // reborn clears when every adjacent structure is void
    if (fn.reborn) {
      bool all_void = true;
      for (const auto& g : c.fence.groups) {
        if (g.members.empty() || g.voided) continue;
        for (int m : g.members) {
          if (m == v || c.g.has_edge(m, v)) {
            all_void = false;
            break;
          }
        }
        if (!all_void) break;
      }
      if (all_void) {
        fn.reborn = false;
        ctx.tag("reborn_cleared");
      }
    }

    if (is_lock(c, v)) return;

    ShellClass cls = classify(c, v);

    // roots drive their cycles; so do crashed roots (wards) whose trees
    // would otherwise freeze with no ready moments at all
    bool rootish = cls == ShellClass::RootOn ||
                   (c.is_stub(v) && f_reset_pattern(c.f, v) && !is_lock(c, v));
    if (rootish && fn.stage == FStage::Idle) {
      if (c.f[v].fence_bit == 0) {
        // ward trees are rectifier territory; their bit flips carry its
        // authority (only the rectifier may produce off-reset states)
        ctx.set_fence(v, 1,
                      cls == ShellClass::RootOn ? Actor::Fence : Actor::Rectifier);
        ctx.tag("ward_on");
      }
      on_root_on(ctx, v);
    }

    // the start wave reaches v once its registered parent joined
    if (c.f[v].fence_bit == 1 && c.f[v].lead != v) {
      int p = c.f[v].lead;
      const auto& pn = c.fence.node[p];
      if (fn.reg_parent == p && fn.reg_epoch == pn.reg_epoch &&
          pn.joined_epoch == fn.reg_epoch && fn.joined_epoch != fn.reg_epoch &&
          c.f[p].fence_bit == 1) {
        fn.stage = FStage::Start;
        fn.phase = 0;
        fn.joined_epoch = fn.reg_epoch;
      }
    }
    // leaving the tree: off bit parks the stage
    if (fn.stage != FStage::Idle && c.f[v].fence_bit == 0 && c.f[v].lead != v)
      fn.stage = FStage::Idle;

    sgn_maintenance(ctx, v);
    lend(ctx, v);

    if (fn.stage == FStage::Idle) return;

    const bool hi = fn.hi != 0;
    const bool loose = fn.loose != 0;
    const bool root = c.f[v].lead == v;

    if (hi) {
      if (fn.phase == 0 && fn.stage == FStage::Start) {
        if (kids_reached(c, v, 0, FStage::Active)) fn.stage = FStage::Active;
      } else if (fn.phase == 0 && fn.stage == FStage::Active) {
        if (kids_reached(c, v, 0, FStage::Done) && neighbor_waits(ctx, v) &&
            rip_check_all(ctx, v))
          fn.stage = FStage::Done;
      } else if (fn.phase == 0 && fn.stage == FStage::Done) {
        int p = c.f[v].lead;
        if (p != v && c.fence.node[p].phase == 1 &&
            c.fence.node[p].stage == FStage::Start) {
          fn.phase = 1;
          fn.stage = FStage::Start;
        }
      } else if (fn.phase == 1 && fn.stage == FStage::Start) {
        if (kids_reached(c, v, 1, FStage::Active)) fn.stage = FStage::Active;
      } else if (fn.phase == 1 && fn.stage == FStage::Active) {
        bool split_ok = cls != ShellClass::Split || rip_check_lead(ctx, v);
        if (kids_reached(c, v, 1, FStage::Done) && split_ok) fn.stage = FStage::Done;
      }
      return;
    }

    // low table: S0 A0 A1 D0 S1 D1
    if (fn.phase == 0 && fn.stage == FStage::Start) {
      bool lows_ok = true, his_ok = true;
      for (int w : reg_children(c, v)) {
        if (node_hi_mark(c, w)) {
          his_ok = his_ok && reached(c, w, 0, FStage::Done);
        } else {
          lows_ok = lows_ok && reached(c, w, 0, FStage::Active);
        }
      }
      bool gate = !loose || (neighbor_waits(ctx, v) && rip_check_all(ctx, v));
      if (lows_ok && his_ok && gate) fn.stage = FStage::Active;
    } else if (fn.phase == 0 && fn.stage == FStage::Active) {
      if (root) {
        fn.phase = 1;  // the root turns the wave
      } else {
        int p = c.f[v].lead;
        if (c.fence.node[p].phase == 1 && c.fence.node[p].stage == FStage::Active)
          fn.phase = 1;
      }
    } else if (fn.phase == 1 && fn.stage == FStage::Active) {
      bool lows_done = true;
      for (int w : reg_children(c, v))
        if (!node_hi_mark(c, w) && !reached(c, w, 0, FStage::Done)) lows_done = false;
      bool gate = !loose || loose_a1_wait(ctx, v);
      if (lows_done && gate) {
        fn.phase = 0;
        fn.stage = FStage::Done;
      }
    } else if (fn.phase == 0 && fn.stage == FStage::Done) {
      if (root) {
        if (kids_reached(c, v, 0, FStage::Done)) {
          fn.phase = 1;
          fn.stage = FStage::Start;
        }
      } else {
        int p = c.f[v].lead;
        if (c.fence.node[p].phase == 1 && c.fence.node[p].stage == FStage::Start) {
          fn.phase = 1;
          fn.stage = FStage::Start;
        }
      }
    } else if (fn.phase == 1 && fn.stage == FStage::Start) {
      bool kids_done = true;
      for (int w : reg_children(c, v))
        if (!reached(c, w, 1, FStage::Done)) kids_done = false;
      bool gate = !loose || rip_check_all(ctx, v);
      if (kids_done && gate) fn.stage = FStage::Done;
    } else if (fn.phase == 1 && fn.stage == FStage::Done) {
      if (root && kids_reached(c, v, 1, FStage::Done)) {
        // cycle complete: clients become servers, the root turns off
        for (std::size_t i = 0; i < c.fence.groups.size(); ++i) {
          auto& g = c.fence.groups[i];
          if (g.tree_root != v || !g.server) continue;
          for (int m : g.members)
            if (c.fence.node[m].server == static_cast<int>(i))
              c.fence.node[m].server = -1;
          g.members.clear();
        }
        for (std::size_t i = 0; i < c.fence.groups.size(); ++i) {
          auto& g = c.fence.groups[i];
          if (g.tree_root == v && !g.server && !g.members.empty() &&
              g.epoch == fn.reg_epoch) {
            g.server = true;
            for (int m : g.members) {
              c.fence.node[m].server = static_cast<int>(i);
              if (c.fence.node[m].client == static_cast<int>(i))
                c.fence.node[m].client = -1;
            }
          }
        }
        ctx.set_fence(v, 0,
                      classify(c, v) == ShellClass::RootOn ? Actor::Fence
                                                           : Actor::Rectifier);
        ctx.tag("fence_off");
        fn.stage = FStage::Idle;
      }
    }
  }

  // sign bookkeeping: install lambda(h/3) on +-0 nodes whose height the
  // client knows, and precompute the sign used by the next float
  void sgn_maintenance(ActCtx& ctx, int v) {
    NetworkConfiguration& c = ctx.c;
    auto& fn = c.fence.node[v];
    if (!height_known(c, v) || ctx.ht.h[v] == kUndef) {
      fn.known_h = kUndef;
      fn.sgn_next = 0;
      return;
    }
    std::int64_t h = ctx.ht.h[v];
    fn.known_h = h;
    fn.sgn_next = 0;
    if ((h + 1) % 3 == 0 && (h + 1) / 3 >= 1)
      fn.sgn_next = static_cast<std::int8_t>(seq::lambda((h + 1) / 3));
    if (!(is_ready(c, v) && !has_ready_lead_child(c, v))) return;
    if (c.f[v].zeta.residue == 0 && h % 3 == 0 && h / 3 >= 1) {
      auto want = static_cast<std::int8_t>(seq::lambda(h / 3));
      if (c.f[v].zeta.sign != want) {
        Slope s = c.f[v].zeta;
        s.sign = want;
        ctx.set_zeta(v, s, Actor::Fence);
        ctx.tag("sgn");
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Height service between a server group and its attached clients. The
// served height streams in the no-repeat ternary code: the first digit
// carries the first bit, after that the two values different from the
// current digit encode the next bit (greater = 1, smaller = 0).

inline std::vector<int> ternary_encode(std::int64_t h) {
  std::int64_t u = h + 1;  // heights start at -1
  std::vector<int> bits;
  for (std::int64_t x = u; x > 0; x >>= 1) bits.push_back(int(x & 1));
  if (bits.empty()) bits.push_back(0);
  std::reverse(bits.begin(), bits.end());
  std::vector<int> digits{bits[0]};
  for (std::size_t i = 1; i < bits.size(); ++i) {
    int cur = digits.back();
    int lo = cur == 0 ? 1 : 0;
    int hi2 = cur == 2 ? 1 : 2;
    digits.push_back(bits[i] ? hi2 : lo);
  }
  return digits;
}

inline std::int64_t ternary_decode(const std::vector<int>& digits) {
  if (digits.empty()) return kUndef;
  std::int64_t u = digits[0] & 1;
  for (std::size_t i = 1; i < digits.size(); ++i) {
    int cur = digits[i - 1];
    int lo = cur == 0 ? 1 : 0;
    int bit = digits[i] == lo ? 0 : 1;
    u = (u << 1) | bit;
  }
  return u - 1;
}

inline std::int64_t group_height(const HeightGroup& g) {
  return g.offset.empty() ? kUndef : g.offset[0];
}

struct ServeOutcome {
  bool server_voided = false;
  std::vector<std::uint8_t> rip;     // per client
  std::vector<std::uint8_t> voided;  // per client
};

// One full service round: the server streams its height to every
// registered client; step counters advance in lockstep (a client not
// consuming stalls the server and vice versa), and the timers void
// adversarially initiated structures.
inline ServeOutcome serve_heights(HeightGroup& server, std::vector<HeightGroup*> clients) {
  ServeOutcome out;
  out.rip.assign(clients.size(), 0);
  out.voided.assign(clients.size(), 0);
  std::int64_t hs = group_height(server);
  auto digits = hs == kUndef ? std::vector<int>{} : ternary_encode(hs);
  for (std::size_t ci = 0; ci < clients.size(); ++ci) {
    HeightGroup* cl = clients[ci];
    if (server.voided || hs == kUndef) break;
    for (std::size_t d = 0; d < digits.size(); ++d) {
      if (++server.step_counter > server.timer_bound) {
        server.voided = true;
        out.server_voided = true;
        break;
      }
      if (++cl->step_counter > cl->timer_bound) {
        cl->voided = true;
        out.voided[ci] = 1;
        break;
      }
    }
    if (server.voided || cl->voided) continue;
    std::int64_t hc = group_height(*cl);
    if (hc == kUndef) continue;
    std::int64_t got = ternary_decode(digits);
    std::int64_t diff = got - hc;
    if (diff > 1 || diff < -1) out.rip[ci] = 1;
  }
  out.server_voided = server.voided;
  return out;
}

}  // namespace holonomy
