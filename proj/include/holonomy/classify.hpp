#pragma once

// Shell classification: base classes derived from the pointer patterns
// plus the role flags (ground, hi/low, border, switch, ready, apex,
// loose) the shell and fence rules read. The core predicates work on a
// bare field vector so monitors can classify pre-activation snapshots.

#include <vector>

#include "holonomy/config.hpp"

namespace holonomy {

enum class ShellClass : std::uint8_t {
  Lock,
  RootOn,
  RootOff,
  Reset,
  Single,
  Double,
  Spread,
  Split,
};

inline const char* class_name(ShellClass c) {
  switch (c) {
    case ShellClass::Lock: return "lock";
    case ShellClass::RootOn: return "root_on";
    case ShellClass::RootOff: return "root_off";
    case ShellClass::Reset: return "reset";
    case ShellClass::Single: return "single";
    case ShellClass::Double: return "double";
    case ShellClass::Spread: return "spread";
    case ShellClass::Split: return "split";
  }
  return "?";
}

using Fields = std::vector<NodeShared>;

inline bool f_is_stub(const Fields& f, int v) { return f[v].lead == v; }

inline bool f_has_adjacent_stub(const Graph& g, const Fields& f, int v) {
  for (int w : g.adj[v])
    if (f_is_stub(f, w)) return true;
  return false;
}

inline bool f_reset_pattern(const Fields& f, int v) {
  return f[v].lead == v && f[v].backup != v;
}
inline bool f_single_pattern(const Fields& f, int v) {
  return f[v].lead != v && f[v].backup == v;
}
inline bool f_duplex_pattern(const Fields& f, int v) {
  return f[v].lead != v && f[v].backup != v;
}
inline bool f_double_pattern(const Fields& f, int v) {
  return f_duplex_pattern(f, v) && f[v].lead == f[v].backup;
}

inline ShellClass f_classify(const Graph& g, const Fields& f, int v) {
  const NodeShared& s = f[v];
  if (s.lead == v) {
    if (f_has_adjacent_stub(g, f, v)) return ShellClass::Lock;
    if (s.backup != v) return ShellClass::Reset;
    return s.fence_bit ? ShellClass::RootOn : ShellClass::RootOff;
  }
  if (s.backup == v) return ShellClass::Single;
  if (s.lead == s.backup) return ShellClass::Double;
  int b = s.backup;
  if (s.fence_bit == 0 && f[b].lead == v && !f_double_pattern(f, b))
    return ShellClass::Spread;
  return ShellClass::Split;
}

inline bool f_is_lock(const Graph& g, const Fields& f, int v) {
  return f_is_stub(f, v) && f_has_adjacent_stub(g, f, v);
}

// isolated stub, whatever the backup holds; these are the flatness roots
inline bool f_is_root(const Graph& g, const Fields& f, int v) {
  return f_is_stub(f, v) && !f_has_adjacent_stub(g, f, v);
}

inline bool f_is_ready(const Graph& g, const Fields& f, int v) {
  const NodeShared& s = f[v];
  if (s.lead == v) return true;
  if (s.fence_bit != f[s.lead].fence_bit) return true;
  return f_double_pattern(f, v) && f_reset_pattern(f, s.lead);
}

inline bool f_has_ready_lead_child(const Graph& g, const Fields& f, int v) {
  for (int w : g.adj[v])
    if (w != v && f[w].lead == v && f_is_ready(g, f, w)) return true;
  return false;
}

// low: the whole lead-ancestor chain (self included) is singles/stubs
inline bool f_is_low(const Graph& g, const Fields& f, int v) {
  if (f_is_lock(g, f, v)) return false;
  std::vector<char> seen(f.size(), 0);
  int x = v;
  while (!seen[x]) {
    seen[x] = 1;
    if (!(f_single_pattern(f, x) || f_is_stub(f, x))) return false;
    if (f[x].lead == x) return true;
    x = f[x].lead;
  }
  return true;  // a cycle of singles has only single ancestors
}

// --- configuration-level wrappers ------------------------------------------

inline ShellClass classify(const NetworkConfiguration& c, int v) {
  return f_classify(c.g, c.f, v);
}
inline bool reset_pattern(const NetworkConfiguration& c, int v) {
  return f_reset_pattern(c.f, v);
}
inline bool single_pattern(const NetworkConfiguration& c, int v) {
  return f_single_pattern(c.f, v);
}
inline bool duplex_pattern(const NetworkConfiguration& c, int v) {
  return f_duplex_pattern(c.f, v);
}
inline bool double_pattern(const NetworkConfiguration& c, int v) {
  return f_double_pattern(c.f, v);
}
inline bool is_lock(const NetworkConfiguration& c, int v) { return f_is_lock(c.g, c.f, v); }

// the rectifier's wards: locks plus crashed roots (isolated reset stubs)
inline bool sigma_ward(const NetworkConfiguration& c, int v) {
  if (f_is_lock(c.g, c.f, v)) return true;
  return c.is_stub(v) && f_reset_pattern(c.f, v);
}
inline bool is_root(const NetworkConfiguration& c, int v) { return f_is_root(c.g, c.f, v); }
inline bool is_ready(const NetworkConfiguration& c, int v) { return f_is_ready(c.g, c.f, v); }
inline bool has_ready_lead_child(const NetworkConfiguration& c, int v) {
  return f_has_ready_lead_child(c.g, c.f, v);
}
inline bool is_low(const NetworkConfiguration& c, int v) { return f_is_low(c.g, c.f, v); }
inline bool is_hi(const NetworkConfiguration& c, int v) {
  return !is_lock(c, v) && !is_low(c, v);
}
inline bool is_border(const NetworkConfiguration& c, int v) {
  if (!is_hi(c, v)) return false;
  int p = c.f[v].lead;
  return p != v && is_low(c, p);
}
inline bool is_switch(const NetworkConfiguration& c, int v) {
  int p = c.f[v].lead;
  return c.f[v].fence_bit > c.f[p].fence_bit;
}

inline bool is_ground(const NetworkConfiguration& c, int v) {
  if (is_root(c, v)) return true;
  if (classify(c, v) != ShellClass::Split) return false;
  return c.f[c.f[v].backup].lead == v;  // backup child points back
}

inline std::vector<int> lead_children(const NetworkConfiguration& c, int v) {
  std::vector<int> out;
  for (int w : c.g.adj[v])
    if (c.f[w].lead == v && w != v) out.push_back(w);
  return out;
}

inline std::vector<int> backup_children(const NetworkConfiguration& c, int v) {
  std::vector<int> out;
  for (int w : c.g.adj[v])
    if (c.f[w].backup == v && w != v) out.push_back(w);
  return out;
}

inline bool is_apex(const NetworkConfiguration& c, int v) {
  if (!is_low(c, v)) return false;
  for (int w : lead_children(c, v))
    if (is_low(c, w)) return false;
  return true;
}

inline bool is_loose(const NetworkConfiguration& c, int v) {
  return is_apex(c, v) && c.f[v].fence_bit == 1 && lead_children(c, v).empty();
}

}  // namespace holonomy
