#pragma once

// Node state: slope bits, the two shell pointers, the fence bit, and the
// canonical two-node link views the transition logic consumes. Pointers
// are stored as node ids where pointing at yourself means the loop.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace holonomy {

// mod-3 slope value; sign is meaningful only at residue 0
struct Slope {
  std::int8_t residue = 0;  // -1, 0, +1
  std::int8_t sign = +1;    // +1 / -1

  bool operator==(const Slope&) const = default;
  auto operator<=>(const Slope&) const = default;
};

inline int mod3_dir(int from_res, int to_res) {
  int d = ((to_res - from_res) % 3 + 3) % 3;
  return d == 2 ? -1 : d;
}

// dir(v,w) from the two slope residues
inline int slope_dir(const Slope& v, const Slope& w) {
  return mod3_dir(v.residue, w.residue);
}

inline Slope slope_increment(const Slope& s, std::int8_t sign_for_zero = +1) {
  Slope out;
  out.residue = s.residue == 1 ? std::int8_t(-1) : std::int8_t(s.residue + 1);
  out.sign = out.residue == 0 ? sign_for_zero : std::int8_t(+1);
  return out;
}

inline Slope slope_decrement(const Slope& s, std::int8_t sign_for_zero = +1) {
  Slope out;
  out.residue = s.residue == -1 ? std::int8_t(1) : std::int8_t(s.residue - 1);
  out.sign = out.residue == 0 ? sign_for_zero : std::int8_t(+1);
  return out;
}

enum class Actor : std::uint8_t { Env, Shell, Guard, Leader, Fence, Rectifier };

inline const char* actor_name(Actor a) {
  switch (a) {
    case Actor::Env: return "env";
    case Actor::Shell: return "shell";
    case Actor::Guard: return "guard";
    case Actor::Leader: return "leader";
    case Actor::Fence: return "fence";
    case Actor::Rectifier: return "rectifier";
  }
  return "?";
}

// The shared fields of one node.
struct NodeShared {
  Slope zeta;
  int lead = 0;    // == own id: loop (stub)
  int backup = 0;  // == own id: loop
  std::uint8_t fence_bit = 0;

  bool operator==(const NodeShared&) const = default;
};

enum class SharedField : std::uint8_t { Zeta, Lead, Backup, FenceBit };

inline const char* field_name(SharedField f) {
  switch (f) {
    case SharedField::Zeta: return "zeta";
    case SharedField::Lead: return "lead";
    case SharedField::Backup: return "backup";
    case SharedField::FenceBit: return "fence_bit";
  }
  return "?";
}

// Reference classes inside a two-node link.
enum class RefClass : std::uint8_t { Loop, ToPeer, Elsewhere };

inline RefClass ref_class(int owner, int target, int peer) {
  if (target == owner) return RefClass::Loop;
  if (target == peer) return RefClass::ToPeer;
  return RefClass::Elsewhere;
}

// Projection of fence-private state a neighbor can see.
struct FenceLinkView {
  std::uint8_t phase = 0;
  std::uint8_t stage = 0;  // FStage enum value
  std::uint8_t reborn = 1;
  RefClass reg_parent = RefClass::Loop;

  bool operator==(const FenceLinkView&) const = default;
  auto operator<=>(const FenceLinkView&) const = default;
};

// Projection of rectifier-private state a neighbor can see.
struct SigmaLinkView {
  RefClass cut = RefClass::Loop;
  RefClass drop = RefClass::Loop;
  std::uint8_t long_bit = 0;
  std::uint8_t grounded = 1;

  bool operator==(const SigmaLinkView&) const = default;
  auto operator<=>(const SigmaLinkView&) const = default;
};

// One endpoint of a link as seen from the other endpoint.
struct HalfLink {
  Slope zeta;
  std::uint8_t fence_bit = 0;
  RefClass lead = RefClass::Loop;
  RefClass backup = RefClass::Loop;
  std::uint8_t lead_backup_same = 1;  // both refs target the same node
  FenceLinkView fence;
  SigmaLinkView sigma;

  bool operator==(const HalfLink&) const = default;
  auto operator<=>(const HalfLink&) const = default;
};

// Canonical link state of edge [v,w], from v's perspective. Renaming the
// endpoints flips self/other, so the symmetric canonical form used for
// equality keeps both halves.
struct Link {
  HalfLink self_side;   // v as seen from w
  HalfLink other_side;  // w as seen from v
  int dir = 0;          // dir(v, w)

  bool operator==(const Link&) const = default;
  auto operator<=>(const Link&) const = default;
};

}  // namespace holonomy
