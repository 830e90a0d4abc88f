#pragma once

// Append-only activation records and their JSONL form. The first line of
// a trace file is the full initial configuration; replaying it must
// reproduce every recorded state bit-exactly.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "holonomy/config.hpp"

namespace holonomy {

using nlohmann::json;

struct FieldWrite {
  int node = 0;
  SharedField field = SharedField::Zeta;
  std::int64_t before = 0;  // zeta packed as residue*4 + (sign>0)
  std::int64_t after = 0;
  Actor actor = Actor::Shell;
};

inline std::int64_t pack_zeta(const Slope& s) {
  return s.residue * 4 + (s.sign > 0 ? 1 : 0);
}

struct TraceEvent {
  std::uint64_t seq = 0;
  int node = 0;
  std::vector<FieldWrite> writes;
  std::vector<std::string> tags;    // lifecycle: crash, split, merge_double, ...
  std::vector<int> coins;           // coins consumed this activation
  std::vector<int> crashed;         // nodes crashed during this activation
  std::vector<std::string> notes;   // monitor annotations
};

inline json to_json(const Slope& s) { return json{{"r", s.residue}, {"s", int(s.sign)}}; }

inline Slope slope_from_json(const json& j) {
  Slope s;
  s.residue = static_cast<std::int8_t>(j.at("r").get<int>());
  s.sign = static_cast<std::int8_t>(j.at("s").get<int>());
  return s;
}

inline json to_json(const TraceEvent& e) {
  json w = json::array();
  for (const auto& fw : e.writes)
    w.push_back(json{{"n", fw.node},
                     {"f", field_name(fw.field)},
                     {"b", fw.before},
                     {"a", fw.after},
                     {"by", actor_name(fw.actor)}});
  json j{{"seq", e.seq}, {"node", e.node}, {"w", w}};
  if (!e.tags.empty()) j["tags"] = e.tags;
  if (!e.crashed.empty()) j["crashed"] = e.crashed;
  if (!e.coins.empty()) j["coins"] = e.coins;
  if (!e.notes.empty()) j["notes"] = e.notes;
  return j;
}

inline json config_to_json(const NetworkConfiguration& c) {
  json adj = json::array();
  for (const auto& a : c.g.adj) adj.push_back(a);
  json nodes = json::array();
  for (int v = 0; v < c.n(); ++v) {
    const auto& s = c.f[v];
    const auto& fn = c.fence.node[v];
    const auto& sn = c.sigma.node[v];
    nodes.push_back(json{
        {"zeta", to_json(s.zeta)},
        {"lead", s.lead},
        {"backup", s.backup},
        {"fb", int(s.fence_bit)},
        {"fence",
         json{{"ph", int(fn.phase)},
              {"st", int(fn.stage)},
              {"reg", fn.reg_parent},
              {"reborn", fn.reborn}}},
        {"sigma",
         json{{"cut", sn.cut},
              {"drop", sn.drop},
              {"lb", int(sn.long_bit)},
              {"cert", sn.has_cert ? json{{"d", int(sn.cert.digit)}, {"m", sn.cert.m}} : json()},
              {"h", sn.h_lock == kUndef ? json() : json(sn.h_lock)}}}});
  }
  return json{{"n", c.n()}, {"adj", adj}, {"nodes", nodes}};
}

inline NetworkConfiguration config_from_json(const json& j) {
  Graph g;
  g.n = j.at("n").get<int>();
  g.adj.resize(g.n);
  for (int v = 0; v < g.n; ++v) g.adj[v] = j.at("adj")[v].get<std::vector<int>>();
  NetworkConfiguration c = build_blank(std::move(g));
  for (int v = 0; v < c.n(); ++v) {
    const json& nj = j.at("nodes")[v];
    c.f[v].zeta = slope_from_json(nj.at("zeta"));
    c.f[v].lead = nj.at("lead").get<int>();
    c.f[v].backup = nj.at("backup").get<int>();
    c.f[v].fence_bit = static_cast<std::uint8_t>(nj.at("fb").get<int>());
    const json& fj = nj.at("fence");
    auto& fn = c.fence.node[v];
    fn.phase = static_cast<std::uint8_t>(fj.at("ph").get<int>());
    fn.stage = static_cast<FStage>(fj.at("st").get<int>());
    fn.reg_parent = fj.at("reg").get<int>();
    fn.reborn = fj.at("reborn").get<bool>();
    const json& sj = nj.at("sigma");
    auto& sn = c.sigma.node[v];
    sn.cut = sj.at("cut").get<int>();
    sn.drop = sj.at("drop").get<int>();
    sn.long_bit = static_cast<std::uint8_t>(sj.at("lb").get<int>());
    if (!sj.at("cert").is_null()) {
      sn.has_cert = true;
      sn.cert.digit = static_cast<std::uint8_t>(sj.at("cert").at("d").get<int>());
      sn.cert.m = sj.at("cert").at("m").get<int>();
    }
    if (!sj.at("h").is_null()) sn.h_lock = sj.at("h").get<std::int64_t>();
  }
  return c;
}

struct Trace {
  json header;  // initial configuration + run metadata
  std::vector<TraceEvent> events;

  void write_jsonl(const std::string& path) const {
    std::ofstream out(path);
    out << header.dump() << "\n";
    for (const auto& e : events) out << to_json(e).dump() << "\n";
  }

  std::string to_jsonl() const {
    std::ostringstream out;
    out << header.dump() << "\n";
    for (const auto& e : events) out << to_json(e).dump() << "\n";
    return out.str();
  }
};

inline TraceEvent event_from_json(const json& j) {
  TraceEvent e;
  e.seq = j.at("seq").get<std::uint64_t>();
  e.node = j.at("node").get<int>();
  for (const auto& wj : j.at("w")) {
    FieldWrite fw;
    fw.node = wj.at("n").get<int>();
    std::string f = wj.at("f").get<std::string>();
    fw.field = f == "zeta"      ? SharedField::Zeta
               : f == "lead"    ? SharedField::Lead
               : f == "backup"  ? SharedField::Backup
                                : SharedField::FenceBit;
    fw.before = wj.at("b").get<std::int64_t>();
    fw.after = wj.at("a").get<std::int64_t>();
    std::string by = wj.at("by").get<std::string>();
    fw.actor = by == "shell"       ? Actor::Shell
               : by == "guard"     ? Actor::Guard
               : by == "leader"    ? Actor::Leader
               : by == "fence"     ? Actor::Fence
               : by == "rectifier" ? Actor::Rectifier
                                   : Actor::Env;
    e.writes.push_back(fw);
  }
  if (j.contains("tags")) e.tags = j.at("tags").get<std::vector<std::string>>();
  if (j.contains("crashed")) e.crashed = j.at("crashed").get<std::vector<int>>();
  if (j.contains("coins")) e.coins = j.at("coins").get<std::vector<int>>();
  if (j.contains("notes")) e.notes = j.at("notes").get<std::vector<std::string>>();
  return e;
}

inline Trace read_trace_jsonl(std::istream& in) {
  Trace t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace: empty file");
  t.header = json::parse(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.events.push_back(event_from_json(json::parse(line)));
  }
  return t;
}

}  // namespace holonomy
