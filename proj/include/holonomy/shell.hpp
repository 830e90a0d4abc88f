#pragma once

// The Shell coordinator: start rule, lock-to-reset, split/merge, phase
// wave. One shell_act call per activation; plugin invocations triggered
// here are returned to the caller (netcore) which runs them in order.

#include "holonomy/runtime.hpp"

namespace holonomy {

struct ShellOutcome {
  bool invoked_split = false;   // run leader/fence/sigma split hooks
  bool turned_root_on = false;  // fence registration point
};

namespace shell_detail {

inline bool split_conditions(const NetworkConfiguration& c, int v) {
  auto kids = lead_children(c, v);
  bool has_double = false, has_single = false;
  for (int w : kids) {
    ShellClass k = classify(c, w);
    if (k == ShellClass::Double) has_double = true;
    if (k == ShellClass::Single) has_single = true;
  }
  if (!(kids.empty() || has_double)) return false;
  if (has_single) return false;
  for (int w : backup_children(c, v))
    if (classify(c, w) == ShellClass::Split) return false;
  return true;
}

inline std::optional<int> pick_double_child(const NetworkConfiguration& c, int v) {
  return c.choose_neighbor(v, [&](const Link&, int w) {
    return c.f[w].lead == v && classify(c, w) == ShellClass::Double;
  });
}

}  // namespace shell_detail

// Shell action for one activation. `entry` is the classification after
// the guard ran. Shared-field rules all sit behind the readiness gate;
// the caller runs the fence/sigma per-activation hooks afterwards.
inline ShellOutcome shell_act(ActCtx& ctx, int v, ShellClass entry) {
  NetworkConfiguration& c = ctx.c;
  ShellOutcome out;

  const bool gate = is_ready(c, v) && !has_ready_lead_child(c, v);

  // start rule
  if (entry == ShellClass::RootOff && gate) {
    ctx.set_fence(v, 1, Actor::Shell);
    ctx.tag("root_on");
    out.turned_root_on = true;
  }

  // a reset root whose backup child merged resumes the plain root
  // shape; anchors stranded at the wrong level stay reset for the
  // rectifier's rip machinery to grind down
  if (entry == ShellClass::Reset && gate && !is_lock(c, v) &&
      c.f[v].zeta.residue == -1 && c.sigma_grounded(v) &&
      ctx.act_count > c.sigma.node[v].last_shape_change +
                          std::uint64_t(50 * c.n())) {
    // never resurrect a root beside a live foreign tree: such a node
    // belongs under it and must join, not compete
    bool foreign = false;
    for (int w : c.g.adj[v]) {
      if (c.is_stub(w) || ctx.ht.h[w] == kUndef) continue;
      std::vector<char> seen(c.n(), 0);
      int x = w;
      bool mine = false;
      while (!seen[x]) {
        seen[x] = 1;
        int nx = c.f[x].lead;
        if (nx == v) {
          mine = true;
          break;
        }
        if (nx == x) break;
        x = nx;
      }
      if (!mine) foreign = true;
    }
    int b = c.f[v].backup;
    if (!foreign && classify(c, b) != ShellClass::Double) {
      ctx.set_backup(v, v, Actor::Shell);
      ctx.tag("root_restore");
    }
  }

  if (is_lock(c, v)) {
    // locks with double children change to reset (on only: nothing but
    // the rectifier may produce the off-reset state)
    if (gate && c.f[v].fence_bit == 1) {
      auto dbl = shell_detail::pick_double_child(c, v);
      if (dbl && c.f[v].backup != *dbl) {
        ctx.set_backup(v, *dbl, Actor::Shell);
        ctx.tag("lock_reset");
      }
    }
    return out;  // locks run only the rectifier's lock handling
  }

  if (!gate) return out;

  const int parent = c.f[v].lead;

  // split-or-merge, decided on the entry class; a stub parent counts as
  // having its backup free (crashed roots hold a stale backup)
  bool splitcase =
      entry == ShellClass::RootOff ||
      (entry == ShellClass::Single && c.f[v].fence_bit == 1 && parent != v &&
       (c.f[parent].backup == parent || c.f[parent].lead == parent));
  if (splitcase && shell_detail::split_conditions(c, v)) {
    if (entry == ShellClass::RootOff) {
      auto dbl = shell_detail::pick_double_child(c, v);
      if (dbl) ctx.set_backup(v, *dbl, Actor::Shell);
    } else {
      ctx.set_backup(v, parent, Actor::Shell);
    }
    ctx.tag("split");
    out.invoked_split = true;
  } else if (entry == ShellClass::Split) {
    ShellClass pc = parent == v ? ShellClass::RootOff : classify(c, parent);
    auto kids = lead_children(c, v);
    bool kids_single_or_none = true;
    bool has_off_kid = false, off_kids_split_spread = true;
    for (int w : kids) {
      ShellClass k = classify(c, w);
      if (k != ShellClass::Single) kids_single_or_none = false;
      if (c.f[w].fence_bit == 0) {
        has_off_kid = true;
        if (k != ShellClass::Split && k != ShellClass::Spread) off_kids_split_spread = false;
      }
    }
    if (pc == ShellClass::Single && c.f[parent].fence_bit == 0 && kids_single_or_none) {
      ctx.set_backup(v, parent, Actor::Shell);
      ctx.tag("merge_double");
    } else if (duplex_pattern(c, parent) &&
               ((c.f[v].fence_bit == 1 && kids_single_or_none) ||
                (has_off_kid && off_kids_split_spread))) {
      ctx.set_backup(v, v, Actor::Shell);
      ctx.tag("merge_single");
    }
  } else if (entry == ShellClass::Double) {
    if (parent != v &&
        (reset_pattern(c, parent) ||
         (duplex_pattern(c, parent) && c.f[parent].fence_bit == 1))) {
      ctx.set_backup(v, v, Actor::Shell);
      ctx.tag("merge_single");
    }
  }

  // phase wave
  if (c.f[v].lead != v) {
    int p = c.f[v].lead;
    int newbit = c.f[p].fence_bit;
    if (newbit != c.f[v].fence_bit) {
      ShellClass before = classify(c, v);
      ctx.set_fence(v, newbit, Actor::Shell);
      ctx.tag("phase");
      if (newbit == 1 && before == ShellClass::Spread) {
        ctx.set_backup(v, v, Actor::Shell);  // spread joins the on wave as single
      } else if (newbit == 0 && before == ShellClass::Double &&
                 duplex_pattern(c, p)) {
        // turning off, double children of a split become single
        ctx.set_backup(v, v, Actor::Shell);
        ctx.tag("merge_single");
      } else if (newbit == 0 && before == ShellClass::Single &&
                 duplex_pattern(c, p)) {
        auto kid = c.choose_neighbor(v, [&](const Link&, int w) {
          return c.f[w].lead == v;
        });
        if (kid) {
          ctx.set_backup(v, *kid, Actor::Shell);  // single anchors a child: spread
          ctx.tag("spread");
        }
      }
    }
  }

  return out;
}

}  // namespace holonomy
