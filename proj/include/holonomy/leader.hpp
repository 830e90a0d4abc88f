#pragma once

// Reference leader-election plugin: randomized uprooting at roots,
// floating of local minima, lead repointing when the parent drifted
// above, and a private random tree-token layer. Boundary nodes defect
// toward the tree holding the larger token; a root whose tree is losing
// a contest eventually uproots, and every re-rooting redraws the token,
// so contests settle by fresh coin flips. Tokens and flags are the
// plugin's own auxiliary state (measured, never shared); all shared
// writes stay inside the leader's interface: lead moves and Float.

#include "holonomy/runtime.hpp"

namespace holonomy {

enum class LeaderAction { Idle, Uproot, Float, Repoint, Defect };

struct ReferenceLeader : LeaderPlugin, TokenReader {
  LeaderAction last = LeaderAction::Idle;
  std::vector<std::uint64_t> token;
  std::vector<std::uint8_t> losing;  // echo of "a bigger token is adjacent"

  void ensure(const NetworkConfiguration& c) {
    if (token.size() != static_cast<std::size_t>(c.n())) {
      token.assign(c.n(), 0);
      losing.assign(c.n(), 0);
    }
  }

  std::uint64_t tree_token(int v) const override {
    return v < static_cast<int>(token.size()) ? token[v] : 0;
  }

  static bool chain_reaches(const NetworkConfiguration& c, int from, int target) {
    std::vector<char> seen(c.n(), 0);
    int x = from;
    while (!seen[x]) {
      seen[x] = 1;
      int nx = c.f[x].lead;
      if (nx == x) return false;
      if (nx == target) return true;
      x = nx;
    }
    return false;
  }

  // private bookkeeping, run on every activation: crashed stubs forget
  // their tree, others inherit the parent token; the losing flag echoes
  // from contested boundaries toward the root
  void act(ActCtx& ctx, int v) override {
    NetworkConfiguration& c = ctx.c;
    ensure(c);
    if (c.is_stub(v) && !is_root(c, v)) {
      token[v] = 0;
      losing[v] = 0;
      return;
    }
    int p = c.f[v].lead;
    if (p != v) token[v] = token[p];
    std::uint8_t flag = 0;
    if (token[v] != 0)
      for (int w : c.g.adj[v])
        if (!c.is_stub(w) && token[w] > token[v]) flag = 1;
    if (!flag)
      for (int w : c.g.adj[v])
        if (w != v && c.f[w].lead == v && losing[w]) flag = 1;
    losing[v] = flag;
  }

  void on_invoke(ActCtx& ctx, int v) override {
    NetworkConfiguration& c = ctx.c;
    ensure(c);
    last = LeaderAction::Idle;
    if (c.f[v].lead == v) {
      // a fresh tree draws its random token once; re-rooted regions
      // redraw, so repeated contests are fresh coin flips
      if (token[v] == 0) {
        std::uint64_t t = 0;
        for (int b = 0; b < 24; ++b) t = (t << 1) | std::uint64_t(ctx.coin());
        token[v] = (t << 1) | 1;  // nonzero
      }
      // never uproot onto the saved backup child: the pair would form an
      // anchorless double cycle
      int saved = c.f[v].backup;
      auto over = c.choose_neighbor(v, [&](const Link&, int w) {
        return c.dir(v, w) == +1 && w != saved && !chain_reaches(c, w, v);
      });
      if (over && ctx.coin() == 1) {
        ctx.set_lead(v, *over, Actor::Leader);
        ctx.tag("uproot");
        last = LeaderAction::Uproot;
        // the ex-root floats off its minimum right away, lifting its
        // whole anchored region one level
        bool down2 = false, rootnb2 = false;
        for (int w : c.g.adj[v]) {
          if (c.dir(v, w) == -1) down2 = true;
          if (is_root(c, w)) rootnb2 = true;
        }
        if (!down2 && !rootnb2) ctx.float_op(v, Actor::Leader);
      }
      return;
    }
    bool down = false, root_nb = false;
    for (int w : c.g.adj[v]) {
      if (c.dir(v, w) == -1) down = true;
      if (is_root(c, w)) root_nb = true;
    }
    if (!down && !root_nb) {
      if (ctx.float_op(v, Actor::Leader)) last = LeaderAction::Float;
      return;
    }
    int parent = c.f[v].lead;
    if (c.dir(v, parent) == +1) {
      auto under = c.choose_neighbor(v, [&](const Link&, int w) {
        return c.dir(v, w) == -1;
      });
      if (under) {
        ctx.set_lead(v, *under, Actor::Leader);
        ctx.tag("repoint");
        last = LeaderAction::Repoint;
        return;
      }
    }
    // boundary defection: level crossings follow the token order, and
    // strictly-down crossings always flow (valleys absorb ridges), so
    // the deepest region wins with tokens breaking level ties
    auto rival = c.choose_neighbor(v, [&](const Link&, int w) {
      int d = c.dir(v, w);
      if (d > 0) return false;
      if (c.is_stub(w)) return false;
      if (d == 0 && token[w] <= token[v]) return false;
      if (d < 0 && token[w] == token[v]) return false;
      // only height-consistent crossings; an undefined side cannot rip
      if (ctx.ht.h[v] != kUndef && ctx.ht.h[w] != kUndef &&
          ctx.ht.h[w] != ctx.ht.h[v] + d)
        return false;
      return !chain_reaches(c, w, v);
    });
    if (rival) {
      ctx.set_lead(v, *rival, Actor::Leader);
      token[v] = token[*rival];
      ctx.tag("defect");
      last = LeaderAction::Defect;
    }
  }
};

}  // namespace holonomy
