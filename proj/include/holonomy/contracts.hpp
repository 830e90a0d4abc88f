#pragma once

// Runtime monitors: the interface permission table and the seven
// commitments. Monitors observe and report; they never alter the run —
// violations invalidate the theorem's premise, not the simulation.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "holonomy/classify.hpp"
#include "holonomy/heights.hpp"
#include "holonomy/orientation.hpp"
#include "holonomy/sequences.hpp"
#include "holonomy/trace.hpp"

namespace holonomy {

struct ViolationReport {
  std::string id;       // commitment or permission id
  int node = -1;
  int peer = -1;
  std::uint64_t seq = 0;
  std::string detail;
  bool hard = true;     // false: interpretation note
};

struct MonitorConfig {
  // lambda.ht segment-rise parameters (CLI-configurable)
  int ht_m0 = 8;
  double ht_c = 0.25;
  // budgets in steps; <0 disables the budget check
  std::int64_t sigma_stb_budget = -1;
  std::int64_t phi_off_budget = -1;
  std::int64_t lambda_ct_budget = -1;
};

struct Monitors {
  MonitorConfig cfg;
  std::vector<ViolationReport> reports;

  // greedy step windows
  std::vector<char> win_seen;
  int win_count = 0;
  std::int64_t step = 0;  // completed steps

  std::int64_t last_crash_step = -1;
  std::int64_t last_sigma_activity_step = -1;
  std::int64_t sigma_stab_step = -1;
  std::int64_t centered_first_step = -1;   // first boundary where centered held
  std::int64_t centered_run_start = -1;    // start of the current centered streak
  std::int64_t flat_run_start = -1;
  bool flat_now = false, centered_now = false;

  std::vector<std::int64_t> last_off_flip;
  std::vector<std::int64_t> root_since;
  std::vector<std::int64_t> last_leader_step;
  std::int64_t max_leader_gap = 0;  // post-sigma-stabilization, in steps

  struct Freeze {
    std::vector<int> chain_v, chain_w;
  };
  std::map<std::pair<int, int>, Freeze> frozen;

  bool noted_ht_interp = false;
  std::vector<char> phi_off_reported;
  bool lambda_ct_reported = false;
  bool sigma_stb_reported = false;

  void init(const NetworkConfiguration& c) {
    win_seen.assign(c.n(), 0);
    last_off_flip.assign(c.n(), -1);
    root_since.assign(c.n(), -1);
    last_leader_step.assign(c.n(), -1);
    phi_off_reported.assign(c.n(), 0);
  }

  std::map<std::string, std::int64_t> last_reported_step;

  void report(std::string id, int node, int peer, std::uint64_t seq, std::string detail,
              bool hard = true) {
    if (reports.size() >= 20000) return;  // storms carry no extra signal
    std::string key = id + "#" + std::to_string(node);
    auto it = last_reported_step.find(key);
    if (it != last_reported_step.end() && it->second == step) return;
    last_reported_step[key] = step;
    reports.push_back({std::move(id), node, peer, seq, std::move(detail), hard});
  }

  std::size_t hard_count() const {
    std::size_t k = 0;
    for (const auto& r : reports) k += r.hard ? 1 : 0;
    return k;
  }

  bool has(const std::string& id) const {
    for (const auto& r : reports)
      if (r.id == id) return true;
    return false;
  }

  // ---- permission table ----------------------------------------------------

  void check_interface_write(const Graph& g, const Fields& pre, const Fields& post,
                             const TraceEvent& ev) {
    auto crashed = [&](int x) {
      return std::find(ev.crashed.begin(), ev.crashed.end(), x) != ev.crashed.end();
    };
    bool float_tag = std::find(ev.tags.begin(), ev.tags.end(), "float") != ev.tags.end();
    // writes are judged in order: readiness against the activation entry
    // state, action preconditions against the state the write found
    Fields cur = pre;
    auto apply = [&](const FieldWrite& w) {
      switch (w.field) {
        case SharedField::Zeta:
          cur[w.node].zeta.residue = static_cast<std::int8_t>(
              w.after >= 0 ? w.after / 4 : -((-w.after + 2) / 4));
          cur[w.node].zeta.sign = (w.after & 1) ? std::int8_t(+1) : std::int8_t(-1);
          break;
        case SharedField::Lead: cur[w.node].lead = static_cast<int>(w.after); break;
        case SharedField::Backup: cur[w.node].backup = static_cast<int>(w.after); break;
        case SharedField::FenceBit:
          cur[w.node].fence_bit = static_cast<std::uint8_t>(w.after);
          break;
      }
    };
    for (const auto& w : ev.writes) {
      int x = w.node;
      if (crashed(x) && (w.actor == Actor::Guard || w.actor == Actor::Rectifier)) {
        apply(w);
        continue;
      }
      if (!(f_is_ready(g, pre, x) && !f_has_ready_lead_child(g, pre, x)))
        report("perm.ready", x, -1, ev.seq,
               std::string("write by ") + actor_name(w.actor) + " to " +
                   field_name(w.field) + " in a non-ready node");
      switch (w.actor) {
        case Actor::Shell:
        case Actor::Env:
          if (w.field == SharedField::Lead || w.field == SharedField::Zeta)
            report("perm.shell", x, -1, ev.seq, "shell touched lead/zeta");
          break;
        case Actor::Leader:
          if (w.field == SharedField::Lead) {
            if (w.after == x)
              report("perm.leader", x, -1, ev.seq, "leader looped a lead pointer");
          } else if (w.field == SharedField::Zeta) {
            bool ok = float_tag;
            if (ok) {
              for (int u : g.adj[x]) {
                if (f_is_root(g, cur, u)) ok = false;
                if (slope_dir(cur[x].zeta, cur[u].zeta) == -1) ok = false;
              }
              if (f_is_root(g, cur, x)) ok = false;
            }
            if (!ok) report("perm.leader", x, -1, ev.seq, "illegal float");
          } else {
            report("perm.leader", x, -1, ev.seq, "leader touched backup/fence");
          }
          break;
        case Actor::Fence: {
          bool root_x = f_is_root(g, cur, x) || f_is_root(g, pre, x);
          bool ok = false;
          if (w.field == SharedField::FenceBit && root_x) ok = true;
          if (w.field == SharedField::Backup && root_x) ok = true;
          if (w.field == SharedField::Zeta)
            ok = pre[x].zeta.residue == post[x].zeta.residue;  // sign-only
          if (!ok)
            report("perm.fence", x, -1, ev.seq,
                   std::string("fence wrote ") + field_name(w.field));
          break;
        }
        case Actor::Rectifier: {
          // composite ops (opens) are judged from the state they began in
          bool ward = f_is_lock(g, cur, x) ||
                      (f_is_stub(cur, x) && f_reset_pattern(cur, x)) ||
                      f_is_lock(g, pre, x) ||
                      (f_is_stub(pre, x) && f_reset_pattern(pre, x));
          if (!ward) {
            report("perm.sigma.lock", x, -1, ev.seq, "rectifier changed a non-lock");
            break;
          }
          if (w.field == SharedField::Zeta) {
            bool sign_only = pre[x].zeta.residue == post[x].zeta.residue;
            bool dec_ok = true;
            for (int u : g.adj[x])
              if (slope_dir(cur[x].zeta, cur[u].zeta) == +1 && !f_is_stub(cur, u))
                dec_ok = false;
            if (!dec_ok) {
              // wards anchoring nobody may re-level
              bool anchors = false;
              for (int u : g.adj[x])
                if (u != x && (cur[u].lead == x || cur[u].backup == x)) anchors = true;
              if (!anchors) dec_ok = true;
            }
            if (!sign_only && !dec_ok)
              report("perm.sigma.dec", x, -1, ev.seq,
                     "decrement with an up edge to a non-stub");
          }
          break;
        }
        case Actor::Guard:
          report("perm.guard", x, -1, ev.seq, "guard wrote outside a crash");
          break;
      }
      apply(w);
      // only the rectifier may produce the off-reset state
      bool pre_or = f_reset_pattern(pre, x) && pre[x].fence_bit == 0;
      bool post_or = f_reset_pattern(post, x) && post[x].fence_bit == 0;
      if (post_or && !pre_or && w.actor != Actor::Rectifier)
        report("perm.off_reset", x, -1, ev.seq,
               std::string(actor_name(w.actor)) + " set off-reset");
    }
  }

  // ---- per-activation checks -------------------------------------------------

  void phi_cln(const NetworkConfiguration& c, std::uint64_t seq) {
    if (step <= last_crash_step) return;  // dated from crash-free steps
    for (int v = 0; v < c.n(); ++v) {
      int p = c.f[v].lead;
      if (p == v || c.f[v].fence_bit != 0 || c.f[p].fence_bit != 1) continue;
      // off node under an on parent: no off lead-ancestor beyond it
      std::vector<char> seen(c.n(), 0);
      int x = p;
      while (!seen[x]) {
        seen[x] = 1;
        int nx = c.f[x].lead;
        if (nx == x) break;
        x = nx;
        if (c.f[x].fence_bit == 0) {
          report("phi.cln", v, x, seq, "off node with an off lead-ancestor across on");
          return;
        }
      }
    }
  }

  void phi_rip_freeze(const NetworkConfiguration& c, const HeightTracker& ht,
                      std::uint64_t seq) {
    if (step <= last_crash_step) {
      frozen.clear();
      return;
    }
    std::map<std::pair<int, int>, Freeze> now;
    for (int v = 0; v < c.n(); ++v)
      for (int w : c.g.adj[v]) {
        if (v >= w) continue;
        if (!ht.is_rip(c, v, w)) continue;
        if (!ht.edge_bound(v, w) && !ht.edge_bound(w, v)) continue;
        auto key = std::make_pair(v, w);
        auto it = frozen.find(key);
        Freeze fz;
        fz.chain_v = ht.senior_chain(c, v);
        fz.chain_w = ht.senior_chain(c, w);
        if (it != frozen.end()) {
          if (it->second.chain_v != fz.chain_v || it->second.chain_w != fz.chain_w) {
            report("phi.rip", v, w, seq, "senior chain changed under a bound rip");
            it->second = fz;  // re-freeze to avoid repeat storms
          }
          now[key] = it->second;
        } else {
          now[key] = fz;
        }
      }
    frozen = std::move(now);
  }

  // ---- step boundary checks ---------------------------------------------------

  void lambda_ht(const NetworkConfiguration& c, std::uint64_t seq) {
    if (step <= last_crash_step || step < 1) return;  // dated from crash-free steps
    for (int s = 0; s < c.n(); ++s) {
      // maximal chain from s
      std::vector<int> chain;
      std::vector<char> seen(c.n(), 0);
      int x = s;
      while (!seen[x]) {
        seen[x] = 1;
        chain.push_back(x);
        int nx = c.f[x].lead;
        if (nx == x) break;
        x = nx;
      }
      int L = static_cast<int>(chain.size());
      if (L < cfg.ht_m0) continue;
      // prefix rises
      std::vector<int> pre(L, 0);
      for (int i = 1; i < L; ++i)
        pre[i] = pre[i - 1] + c.dir(chain[i - 1], chain[i]);
      for (int i = 0; i + cfg.ht_m0 - 1 < L; ++i) {
        for (int j = i + cfg.ht_m0 - 1; j < L; ++j) {
          int m = j - i + 1;
          int lo = pre[i], hi = pre[i];
          for (int t = i; t <= j; ++t) {
            lo = std::min(lo, pre[t]);
            hi = std::max(hi, pre[t]);
          }
          if (hi - lo < static_cast<int>(cfg.ht_c * m)) {
            if (!noted_ht_interp) {
              report("note.lambda.ht", chain[i], chain[j], seq,
                     "segment rise read as magnitude", false);
              noted_ht_interp = true;
            }
            report("lambda.ht", chain[i], chain[j], seq,
                   "lead chain window without the required rise segment");
            return;
          }
        }
      }
    }
  }

  void phi_sgn(const NetworkConfiguration& c, const HeightTracker& ht,
               std::uint64_t seq) {
    if (step <= last_crash_step) return;
    for (int v = 0; v < c.n(); ++v) {
      if (c.f[v].zeta.residue != 0) continue;
      if (!is_ready(c, v)) continue;
      bool bound_in = false;
      for (int u : c.g.adj[v]) bound_in = bound_in || ht.edge_bound(u, v);
      if (!bound_in) continue;
      if (ht.h[v] == kUndef || ht.h[v] < 3 || ht.h[v] % 3 != 0) continue;
      if (c.f[v].zeta.sign != seq::lambda(ht.h[v] / 3))
        report("phi.sgn", v, -1, seq, "sign differs from lambda(h/3)");
    }
  }

  void step_boundary(const NetworkConfiguration& c, const HeightTracker& ht,
                     std::uint64_t seq_now) {
    auto fr = is_flat(c);
    flat_now = fr.flat;
    centered_now = fr.flat && find_center(c).has_value();
    if (flat_now) {
      if (flat_run_start < 0) flat_run_start = step;
    } else {
      flat_run_start = -1;
    }
    if (centered_now) {
      if (centered_run_start < 0) centered_run_start = step;
      if (centered_first_step < 0) centered_first_step = step;
    } else {
      centered_run_start = -1;
    }

    lambda_ht(c, seq_now);
    phi_sgn(c, ht, seq_now);

    // sigma stabilization detector: three quiet steps and flatness
    if (sigma_stab_step < 0 && step - last_sigma_activity_step >= 3 && step >= 3 &&
        flat_now)
      sigma_stab_step = step;
    if (cfg.sigma_stb_budget >= 0 && sigma_stab_step < 0 &&
        step > cfg.sigma_stb_budget && !sigma_stb_reported) {
      sigma_stb_reported = true;
      report("sigma.stb", -1, -1, seq_now, "stabilization budget exceeded");
    }

    if (sigma_stab_step >= 0) {
      // phi.off: roots flip off within the budget
      for (int v = 0; v < c.n(); ++v) {
        if (is_root(c, v)) {
          if (root_since[v] < 0) root_since[v] = step;
          if (cfg.phi_off_budget >= 0 && !phi_off_reported[v]) {
            std::int64_t from =
                std::max({last_off_flip[v], root_since[v], sigma_stab_step});
            if (step - from > cfg.phi_off_budget) {
              phi_off_reported[v] = 1;
              report("phi.off", v, -1, seq_now, "root missed its off window");
            }
          }
        } else {
          root_since[v] = -1;
        }
      }
      // lambda.ct: centering within the budget
      if (cfg.lambda_ct_budget >= 0 && centered_first_step < 0 &&
          step - sigma_stab_step > cfg.lambda_ct_budget && !lambda_ct_reported) {
        lambda_ct_reported = true;
        report("lambda.ct", -1, -1, seq_now, "centering budget exceeded");
      }
      // leader invocation gaps
      for (int v = 0; v < c.n(); ++v) {
        std::int64_t from = std::max(last_leader_step[v], sigma_stab_step);
        max_leader_gap = std::max(max_leader_gap, step - from);
      }
    }
  }

  // ---- main hook ---------------------------------------------------------------

  void after_activation(const NetworkConfiguration& c, HeightTracker& ht,
                        const Fields& pre, const TraceEvent& ev, bool leader_ran) {
    // root_on <-> reset toggles bind the senior domain
    for (const auto& w : ev.writes) {
      ShellClass a = f_classify(c.g, pre, w.node);
      ShellClass b = f_classify(c.g, c.f, w.node);
      if ((a == ShellClass::RootOn && b == ShellClass::Reset) ||
          (a == ShellClass::Reset && b == ShellClass::RootOn))
        ht.on_root_toggle(c, w.node);
    }

    check_interface_write(c.g, pre, c.f, ev);
    phi_cln(c, ev.seq);
    // crashes and rectifier repairs restart the fence structures, so the
    // freeze snapshots re-arm across them
    bool sigma_restart = !ev.crashed.empty();
    for (const auto& w : ev.writes)
      if (w.actor == Actor::Rectifier) sigma_restart = true;
    if (sigma_restart) frozen.clear();
    phi_rip_freeze(c, ht, ev.seq);

    bool crash_now = !ev.crashed.empty();
    bool sigma_shared = crash_now;
    for (const auto& w : ev.writes)
      if (w.actor == Actor::Rectifier) sigma_shared = true;
    if (crash_now) last_crash_step = step;
    if (sigma_shared) {
      last_sigma_activity_step = step;
      if (sigma_stab_step >= 0) sigma_stab_step = -1;  // detector restarts
    }
    if (leader_ran) last_leader_step[ev.node] = step;

    // greedy step windows
    if (!win_seen[ev.node]) {
      win_seen[ev.node] = 1;
      ++win_count;
    }
    if (win_count == c.n()) {
      ++step;
      std::fill(win_seen.begin(), win_seen.end(), 0);
      win_count = 0;
      step_boundary(c, ht, ev.seq);
    }
  }
};

// Earliest step from which `centered` (or `flat`) held at every later
// recorded boundary, or -1. Used by the verify CLI on replays.
inline std::int64_t stabilization_index(const std::vector<char>& per_step_flags) {
  std::int64_t idx = -1;
  for (std::size_t s = 0; s < per_step_flags.size(); ++s) {
    if (per_step_flags[s]) {
      if (idx < 0) idx = static_cast<std::int64_t>(s);
    } else {
      idx = -1;
    }
  }
  return idx;
}

}  // namespace holonomy
