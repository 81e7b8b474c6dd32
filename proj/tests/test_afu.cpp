#include <doctest.h>

#include <algorithm>
#include <set>

#include "adpr/afu.hpp"
#include "adpr/errors.hpp"
#include "adpr/layout.hpp"
#include "test_util.hpp"

using namespace adpr;

TEST_SUITE("afu") {

TEST_CASE("fit checks are exact at the derating boundary") {
  // cap 0.7 of capacity 10 allows a demand of 7 and rejects 8: the check is
  // demand * 1e6 <= round(cap * 1e6) * capacity, evaluated in integers.
  const ResourceVector capacity{1000, 10, 0};
  CHECK(!fit_violation({700, 7, 0}, capacity, 0.70).has_value());
  CHECK(fit_violation({700, 8, 0}, capacity, 0.70) == ResourceKind::Bram);
  CHECK(fit_violation({701, 0, 0}, capacity, 0.70) == ResourceKind::LogicCell);
  CHECK(!fit_violation({700, 0, 0}, capacity, 0.70).has_value());
}

TEST_CASE("violations report the first failing kind in logic, bram, dsp order") {
  const ResourceVector capacity{100, 10, 10};
  CHECK(fit_violation({1000, 100, 100}, capacity, 0.70) == ResourceKind::LogicCell);
  CHECK(fit_violation({10, 100, 100}, capacity, 0.70) == ResourceKind::Bram);
  CHECK(fit_violation({10, 0, 100}, capacity, 0.70) == ResourceKind::Dsp);
}

TEST_CASE("zero bram or dsp demand never trips those kinds") {
  // Capacity has no bram at all; a demand with bram 0 must still pass.
  CHECK(!fit_violation({100, 0, 0}, {1000, 0, 0}, 0.70).has_value());
  CHECK(fit_violation({100, 1, 0}, {1000, 0, 0}, 0.70) == ResourceKind::Bram);
}

TEST_CASE("synthesize binds an AFU to a valid footprint or reports the bottleneck") {
  const Device d = testutil::tiny_device(2);
  Footprint fp{0, d.empty_set()};
  for (int c = 0; c <= 3; ++c) {
    fp.cells.set(Cell{c, 0});
    fp.cells.set(Cell{c, 1});
  }
  // Capacity: 6 logic cells (2400), 2 bram cells (20), 0 dsp.
  const AfuSpec fits{"a", {1000, 10, 0}, InterfaceKind::Both};
  const SynthesisResult ok = synthesize(d, fits, fp, 0.70);
  REQUIRE(ok.feasible());
  CHECK(ok.version->afu_id == "a");
  CHECK(ok.version->footprint == fp);
  CHECK(ok.version->bytes == bitstream_bytes(d, fp.cells));

  const AfuSpec too_big{"b", {1000, 15, 0}, InterfaceKind::Both};
  const SynthesisResult no = synthesize(d, too_big, fp, 0.70);
  CHECK(!no.feasible());
  CHECK(no.first_violated == ResourceKind::Bram);

  SUBCASE("invalid footprints are an error, not an infeasibility") {
    Footprint bad{0, d.empty_set()};
    bad.cells.set(Cell{5, 0});  // misses the termination
    CHECK_THROWS_AS(synthesize(d, fits, bad, 0.70), Error);
  }
  SUBCASE("interface kind mismatch is an error") {
    DeviceConfig config;
    config.name = "memonly";
    config.rows = 1;
    for (int i = 0; i < 4; ++i) config.columns.push_back(ColumnSpec{ResourceKind::LogicCell, 0});
    config.interfaces.push_back(InterfaceSpec{0, InterfaceKind::Memory, {Cell{0, 0}}});
    const Device md = build_device(config);
    Footprint mfp{0, md.empty_set()};
    mfp.cells.set(Cell{0, 0});
    mfp.cells.set(Cell{1, 0});
    const AfuSpec streaming{"s", {100, 0, 0}, InterfaceKind::Streaming};
    CHECK_THROWS_AS(synthesize(md, streaming, mfp, 0.70), Error);
  }
}

TEST_CASE("heuristic growth returns valid fitting footprints") {
  const Device d = testutil::tiny_device(2);
  const ResourceVector demand{500, 10, 0};
  for (const Interface& iface : d.interfaces()) {
    CAPTURE(iface.id);
    const auto fps = generate_footprints_heuristic(d, iface, demand, 3, 0.70);
    CHECK(!fps.empty());
    std::set<std::string> keys;
    for (const Footprint& fp : fps) {
      CHECK(fp.interface_id == iface.id);
      CHECK(validate_footprint(d, fp).valid());
      CHECK(!fit_violation(demand, region_capacity(d, fp.cells), 0.70).has_value());
      keys.insert(canonical_key(fp));
    }
    CHECK(keys.size() == fps.size());  // distinct variants only
  }
}

TEST_CASE("heuristic growth returns nothing for unsatisfiable demands") {
  const Device d = testutil::tiny_device(2);
  // More bram than the whole region holds.
  const auto fps = generate_footprints_heuristic(d, d.interfaces()[0],
                                                 {500, 1000, 0}, 3, 0.70);
  CHECK(fps.empty());
}

TEST_CASE("database interns footprints and deduplicates entries") {
  const Device d = testutil::tiny_device(2);
  Footprint fp{0, d.empty_set()};
  fp.cells.set(Cell{0, 0});
  fp.cells.set(Cell{1, 0});
  BitstreamDb db;
  CHECK(db.insert({"a", fp, 100}));
  CHECK(!db.insert({"a", fp, 100}));  // exact duplicate
  CHECK(db.insert({"b", fp, 100}));   // same cells, different AFU
  CHECK(db.footprint_count() == 1);   // interned once
  CHECK(db.size() == 2);
  CHECK(db.footprint_index_of(fp) == 0);
  Footprint other = fp;
  other.cells.set(Cell{2, 0});
  CHECK(db.footprint_index_of(other) == -1);
}

TEST_CASE("candidates come back cheapest first with stable ties") {
  const Device d = testutil::tiny_device(2);
  Footprint f1{0, d.empty_set()};
  f1.cells.set(Cell{0, 0});
  Footprint f2 = f1;
  f2.cells.set(Cell{1, 0});
  Footprint f3 = f2;
  f3.cells.set(Cell{2, 0});
  BitstreamDb db;
  db.insert({"a", f3, 300});
  db.insert({"a", f1, 100});
  db.insert({"a", f2, 100});  // ties with f1 on bytes
  db.insert({"z", f1, 50});
  const auto cands = db.candidates("a");
  REQUIRE(cands.size() == 3);
  CHECK(db.entries()[static_cast<std::size_t>(cands[0])].bytes == 100);
  CHECK(db.entries()[static_cast<std::size_t>(cands[1])].bytes == 100);
  CHECK(db.entries()[static_cast<std::size_t>(cands[2])].bytes == 300);
  // Equal bytes resolve by footprint index (insertion order of interning).
  const int fp0 = db.entries()[static_cast<std::size_t>(cands[0])].footprint_index;
  const int fp1 = db.entries()[static_cast<std::size_t>(cands[1])].footprint_index;
  CHECK(fp0 < fp1);
  CHECK(db.candidates("missing").empty());
}

TEST_CASE("building from layouts adopts every feasible pairing") {
  const Device d = testutil::tiny_device(2);
  const std::vector<AfuSpec> afus{
      {"idle", {}, InterfaceKind::Both},
      {"small", {400, 0, 0}, InterfaceKind::Both},
      {"wide", {2000, 10, 10}, InterfaceKind::Both},
  };
  Rng rng(11);
  std::vector<Layout> layouts = random_layouts(d, 3, rng);
  layouts.insert(layouts.begin(), naive_layout(d));
  const BitstreamDb db = build_db_from_layouts(d, layouts, afus);

  std::set<std::string> ids;
  for (const auto& id : db.afu_ids()) ids.insert(id);
  CHECK(!ids.count("idle"));  // zero-demand AFUs need no bitstream

  // Every feasible (partition, afu) pairing must be present.
  for (const Layout& layout : layouts) {
    for (const Footprint& part : layout.partitions) {
      for (const AfuSpec& afu : afus) {
        if (afu.zero_demand()) continue;
        const SynthesisResult s = synthesize(d, afu, part, 0.70);
        if (!s.feasible()) continue;
        const int fpi = db.footprint_index_of(part);
        REQUIRE(fpi >= 0);
        bool found = false;
        for (int e : db.candidates(afu.id)) {
          const auto& entry = db.entries()[static_cast<std::size_t>(e)];
          if (entry.footprint_index == fpi) {
            found = true;
            CHECK(entry.bytes == s.version->bytes);
          }
        }
        CHECK(found);
      }
    }
  }
}

TEST_CASE("per-interface version cap keeps the cheapest entries") {
  const Device d = testutil::tiny_device(2);
  const std::vector<AfuSpec> afus{{"a", {400, 0, 0}, InterfaceKind::Both}};
  Rng rng(13);
  const std::vector<Layout> layouts = random_layouts(d, 6, rng);

  const BitstreamDb full = build_db_from_layouts(d, layouts, afus);
  DbBuildOptions capped_options;
  capped_options.max_versions_per_interface = 2;
  const BitstreamDb capped = build_db_from_layouts(d, layouts, afus, capped_options);

  // Per interface: at most 2 versions, and they are the cheapest of the full set.
  for (int iface = 0; iface < 2; ++iface) {
    std::vector<std::uint64_t> full_bytes, capped_bytes;
    for (int e : full.candidates("a")) {
      const auto& entry = full.entries()[static_cast<std::size_t>(e)];
      if (full.footprint(entry.footprint_index).interface_id == iface)
        full_bytes.push_back(entry.bytes);
    }
    for (int e : capped.candidates("a")) {
      const auto& entry = capped.entries()[static_cast<std::size_t>(e)];
      if (capped.footprint(entry.footprint_index).interface_id == iface)
        capped_bytes.push_back(entry.bytes);
    }
    std::sort(full_bytes.begin(), full_bytes.end());
    std::sort(capped_bytes.begin(), capped_bytes.end());
    CHECK(capped_bytes.size() <= 2);
    CHECK(capped_bytes.size() == std::min<std::size_t>(2, full_bytes.size()));
    for (std::size_t i = 0; i < capped_bytes.size(); ++i) {
      CHECK(capped_bytes[i] == full_bytes[i]);
    }
  }
}

}  // TEST_SUITE
