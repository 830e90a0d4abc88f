#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "holonomy/netcore.hpp"

using namespace holonomy;

TEST_CASE("blank build") {
  auto c = build_network("ring:3", "blank");
  CHECK(c.n() == 3);
  for (int v = 0; v < 3; ++v) {
    CHECK(c.f[v].zeta.residue == 0);
    CHECK(c.f[v].zeta.sign == +1);
    CHECK(c.f[v].lead == v);
    CHECK(c.f[v].backup == v);
    CHECK(c.f[v].fence_bit == 0);
  }
}

TEST_CASE("explicit tables reject bad references") {
  Graph g = parse_graph("path:3");
  ExplicitInit init;
  init.shared.assign(3, {});
  for (int v = 0; v < 3; ++v) {
    init.shared[v].lead = v;
    init.shared[v].backup = v;
  }
  init.shared[0].lead = 2;  // not adjacent to 0
  CHECK_THROWS(build_explicit(g, init));
  init.shared[0].lead = 1;
  auto c = build_explicit(g, init);
  CHECK(c.f[0].lead == 1);
}

TEST_CASE("explicit zeta sets dir across the edge") {
  Graph g = parse_graph("path:2");
  ExplicitInit init;
  init.shared.assign(2, {});
  init.shared[0].lead = 0;
  init.shared[0].backup = 0;
  init.shared[1].lead = 1;
  init.shared[1].backup = 1;
  init.shared[0].zeta.residue = 0;
  init.shared[1].zeta.residue = 1;
  auto c = build_explicit(g, init);
  CHECK(c.dir(0, 1) == +1);
}

TEST_CASE("random build is deterministic under a fixed seed") {
  auto a = build_network("random:10,0.4,seed=7", "random:5");
  auto b = build_network("random:10,0.4,seed=7", "random:5");
  CHECK(a.g.adj == b.g.adj);
  CHECK(a.f == b.f);
}

TEST_CASE("run: budget zero, round robin coverage") {
  auto c = build_network("ring:4", "blank");
  Sim sim(c, reference_plugins());
  auto rr = ScheduleSource::round_robin();
  CHECK(sim.run(rr, 0) == 0);
  CHECK(sim.acts == 0);

  SimOptions opt;
  opt.record_trace = true;
  Sim sim3(c, reference_plugins(), opt);
  auto rr2 = ScheduleSource::round_robin();
  sim3.run(rr2, 8);
  std::vector<int> count(4, 0);
  for (const auto& e : sim3.events) count[e.node]++;
  for (int v = 0; v < 4; ++v) CHECK(count[v] == 2);
}

TEST_CASE("same seed twice gives byte-identical traces") {
  SimOptions opt;
  opt.coin_seed = 99;
  opt.record_trace = true;
  auto mk = [&]() {
    auto c = build_network("ring:5", "random:21");
    Sim sim(c, reference_plugins(), opt);
    auto sched = ScheduleSource::uniform(5);
    sim.run(sched, 400);
    Trace t;
    t.header = config_to_json(c);
    t.events = sim.events;
    return t.to_jsonl();
  };
  CHECK(mk() == mk());
}

TEST_CASE("steps_elapsed greedy windows") {
  CHECK(steps_elapsed(2, std::vector<int>{0, 1, 0, 0, 1}) == 2);
  CHECK(steps_elapsed(2, std::vector<int>{0, 0, 0}) == 0);
  std::vector<int> rr;
  for (int k = 0; k < 3; ++k)
    for (int v = 0; v < 5; ++v) rr.push_back(v);
  CHECK(steps_elapsed(5, rr) == 3);
}

TEST_CASE("activation is anonymous: permuted run replays permuted") {
  auto c = build_network("ring:5", "random:31");
  std::vector<int> perm{2, 4, 0, 1, 3};
  auto cp = permute_config(c, perm);

  SimOptions opt;
  opt.coin_seed = 7;
  Sim a(c, reference_plugins(), opt);
  Sim b(cp, reference_plugins(), opt);
  std::vector<int> order{0, 1, 2, 3, 4, 4, 3, 2, 1, 0, 0, 2, 4, 1, 3};
  for (int rep = 0; rep < 20; ++rep)
    for (int v : order) {
      auto ea = a.activate(v);
      auto eb = b.activate(perm[v]);
      REQUIRE(ea.writes.size() == eb.writes.size());
      for (std::size_t i = 0; i < ea.writes.size(); ++i) {
        CHECK(perm[ea.writes[i].node] == eb.writes[i].node);
        CHECK(ea.writes[i].field == eb.writes[i].field);
        if (ea.writes[i].field == SharedField::Lead ||
            ea.writes[i].field == SharedField::Backup)
          CHECK(perm[static_cast<int>(ea.writes[i].after)] == eb.writes[i].after);
        else
          CHECK(ea.writes[i].after == eb.writes[i].after);
      }
      CHECK(ea.coins == eb.coins);
      CHECK(ea.tags == eb.tags);
    }
  for (int v = 0; v < 5; ++v) {
    CHECK(a.c.f[v].zeta == b.c.f[perm[v]].zeta);
    CHECK(perm[a.c.f[v].lead] == b.c.f[perm[v]].lead);
    CHECK(perm[a.c.f[v].backup] == b.c.f[perm[v]].backup);
    CHECK(a.c.f[v].fence_bit == b.c.f[perm[v]].fence_bit);
  }
}

TEST_CASE("duplicate link-states never change the transition outcome") {
  auto run_center = [](int leaves) {
    Graph g;
    g.n = leaves + 1;
    g.adj.assign(g.n, {});
    for (int i = 1; i <= leaves; ++i) detail::add_edge(g, 0, i);
    auto c = build_blank(g);
    Sim sim(c, reference_plugins());
    return sim.activate(0);
  };
  auto e1 = run_center(1);
  auto e2 = run_center(2);
  REQUIRE(e1.writes.size() == e2.writes.size());
  for (std::size_t i = 0; i < e1.writes.size(); ++i) {
    CHECK(e1.writes[i].field == e2.writes[i].field);
    CHECK(e1.writes[i].node == e2.writes[i].node);
  }
  CHECK(e1.tags == e2.tags);
}

TEST_CASE("root_off activation turns it on") {
  auto c = build_network("path:2", "blank");
  c.f[1].lead = 0;  // node 0 is an isolated stub: a root
  c.f[0].zeta.residue = -1;
  Sim sim(c, reference_plugins());
  CHECK(classify(sim.c, 0) == ShellClass::RootOff);
  sim.activate(0);
  CHECK(sim.c.f[0].fence_bit == 1);
}

TEST_CASE("guard: two adjacent grounded locks crash one") {
  auto c = build_network("path:3", "blank");
  Sim sim(c, reference_plugins());
  CHECK(is_lock(sim.c, 0));
  CHECK(sim.guard_would_crash(0));
  auto ev = sim.activate(0);
  CHECK(!ev.crashed.empty());
  CHECK(f_reset_pattern(sim.c.f, 0));
  CHECK_FALSE(sim.guard_would_crash(0));
}

TEST_CASE("full async transform") {
  auto w = full_async_transform(parse_graph("path:2"));
  CHECK(w.g2.n == 3);
  CHECK(w.host.size() == 1);
  auto g = parse_graph("ring:4");
  auto wrap = full_async_transform(g);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<int> req;
    for (int v = 0; v < wrap.g2.n; ++v)
      if (rng() & 1) req.push_back(v);
    auto acted = wrap.instant(req, [](int) {});
    std::set<int> acted_set(acted.begin(), acted.end());
    for (std::size_t d = 0; d < wrap.buddy.size(); ++d) {
      int x = wrap.n_real + static_cast<int>(d);
      bool both = acted_set.count(x) && acted_set.count(wrap.buddy[d]);
      CHECK_FALSE(both);
    }
  }
}

TEST_CASE("a blocked node waits at most one step under full activation") {
  auto g = parse_graph("ring:3");
  auto wrap = full_async_transform(g);
  std::vector<int> all;
  for (int v = 0; v < wrap.g2.n; ++v) all.push_back(v);
  for (int round = 0; round < 50; ++round) {
    auto acted1 = wrap.instant(all, [](int) {});
    std::set<int> s1(acted1.begin(), acted1.end());
    auto acted2 = wrap.instant(all, [](int) {});
    std::set<int> s2(acted2.begin(), acted2.end());
    for (int v = 0; v < wrap.g2.n; ++v) CHECK((s1.count(v) || s2.count(v)));
  }
}
