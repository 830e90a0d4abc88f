#pragma once

// Private per-plugin field bags. These never enter the shared-field
// permission table; their sizes are reported by the auxiliary-state
// census since the reference plugins do not enforce the O(1)-bit budget.

#include <cstdint>
#include <limits>
#include <vector>

#include "holonomy/sequences.hpp"

namespace holonomy {

// "no value" marker for heights and counters
inline constexpr std::int64_t kUndef = std::numeric_limits<std::int64_t>::min();

// Fence stage words. Low nodes run S0 A0 A1 D0 S1 D1; hi nodes run
// S0 A0 D0 S1 A1 D1. Idle = not part of a registered cycle.
enum class FStage : std::uint8_t { Idle, Start, Active, Done };

inline const char* fstage_name(FStage s) {
  switch (s) {
    case FStage::Idle: return "idle";
    case FStage::Start: return "start";
    case FStage::Active: return "active";
    case FStage::Done: return "done";
  }
  return "?";
}

struct FenceNodeState {
  std::uint8_t phase = 0;
  FStage stage = FStage::Idle;
  int reg_parent = -1;      // registered lead edge (-1: none / tree root)
  std::uint32_t reg_epoch = 0;
  std::uint32_t joined_epoch = 0;  // epoch whose start wave reached this node
  std::uint8_t hi = 0;      // role marks recorded at registration
  std::uint8_t loose = 0;
  std::uint8_t apex = 0;
  bool reborn = true;       // default-true restart flag
  int client = -1;          // group ids, -1 when unattached
  int server = -1;
  int lend_to = -1;         // rotating loan among needy backup-children
  std::uint8_t wants_loan = 0;
  std::uint32_t loan_epoch = 0;  // cycle in which the last loan was consumed
  // neighbor progress memo for the phase-0 checks (bit0: seen active-1,
  // bit1: then seen start-1), reset on stage entry
  std::vector<std::uint8_t> nb_prog;
  std::uint64_t prog_token = 0;
  std::int8_t sgn_next = 0;          // precomputed sign for the next float, 0 unknown
  std::int64_t known_h = kUndef;     // client-confirmed height, kUndef unknown
};

// Height groups: clients on the registered lead tree, flipped to servers
// when the tree turns off. Heights are stored against the group anchor.
struct HeightGroup {
  bool server = false;
  bool voided = false;
  std::uint32_t epoch = 0;
  int tree_root = -1;
  int anchor = -1;                 // top member
  std::vector<int> members;
  std::vector<std::int64_t> offset;  // member height - anchor height
  std::int64_t rho = 0;            // anchor rise from the tree root
  std::int64_t step_counter = 0;
  std::int64_t timer_bound = 0;    // 2^t - 1
};

struct FenceState {
  std::vector<FenceNodeState> node;
  std::vector<HeightGroup> groups;
  std::uint32_t epoch_counter = 0;

  void reset(int n) {
    node.assign(n, {});
    groups.clear();
    epoch_counter = 0;
  }
};

struct SigmaNodeState {
  int cut = 0;       // p_rc; == own id: loop
  int drop = 0;      // p_rb; == own id: loop
  std::uint8_t long_bit = 0;
  bool has_cert = false;
  seq::AlphaSym cert;
  // lock height, updated one hop per activation; kUndef: undefined
  std::int64_t h_lock = kUndef;
  // height info written by the dropper into opened trees
  std::int64_t open_h = kUndef;
  std::uint32_t open_epoch = 0;
  std::uint64_t last_shape_change = 0;  // activation stamp for maturity
  std::uint64_t uncert_since = 0;       // first activation seen uncertified
};

struct SigmaState {
  std::vector<SigmaNodeState> node;
  std::uint32_t open_epoch_counter = 0;

  void reset(int n) {
    node.assign(n, {});
    open_epoch_counter = 0;
  }
};

}  // namespace holonomy
