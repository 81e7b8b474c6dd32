#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "adpr/device.hpp"
#include "adpr/errors.hpp"
#include "adpr/io.hpp"
#include "test_util.hpp"

using namespace adpr;

namespace {

nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing config file " << path);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

TEST_SUITE("device") {

TEST_CASE("bundled configs match their declared budgets exactly") {
  struct Expected {
    const char* file;
    ResourceVector totals;
  };
  const Expected expected[] = {
      {"workload_bram.json", {27816, 80, 90}},
      {"workload_dsp.json", {23968, 38, 120}},
      {"workload_mixed.json", {22712, 40, 80}},
  };
  for (const auto& e : expected) {
    CAPTURE(e.file);
    const std::string path = testutil::config_path(e.file);
    const DeviceConfig config = device_config_from_json(parse_file(path));
    REQUIRE(config.declared_budgets.has_value());
    CHECK(*config.declared_budgets == e.totals);
    const Device d = load_device(path);
    CHECK(d.region_totals() == e.totals);
  }
}

TEST_CASE("region capacity is the sum of per-cell densities") {
  const Device d = testutil::tiny_device(2);
  // 12 columns x 2 rows cycling logic,logic,bram,logic,dsp,logic:
  // per row 8 logic, 2 bram, 2 dsp columns at default densities.
  CHECK(d.region_totals() == ResourceVector{2 * 8 * 400, 2 * 2 * 10, 2 * 2 * 20});
  CellSet one = d.empty_set();
  one.set(Cell{2, 0});  // a bram column
  CHECK(region_capacity(d, one) == ResourceVector{0, 10, 0});
  CellSet pair = one;
  pair.set(Cell{4, 1});  // a dsp column
  CHECK(region_capacity(d, pair) == ResourceVector{0, 10, 20});
}

TEST_CASE("peripheral placement yields distinct single region cells") {
  const Device base = testutil::tiny_device(1);
  for (int n = 1; n <= 8; ++n) {
    CAPTURE(n);
    const auto specs = place_interfaces_peripheral(base, n);
    REQUIRE(specs.size() == static_cast<std::size_t>(n));
    std::set<std::pair<int, int>> seen;
    const auto boundary = perimeter_walk(base);
    const std::set<std::pair<int, int>> boundary_set = [&] {
      std::set<std::pair<int, int>> s;
      for (Cell c : boundary) s.insert({c.col, c.row});
      return s;
    }();
    for (const InterfaceSpec& spec : specs) {
      REQUIRE(spec.termination.size() == 1);
      const Cell c = spec.termination[0];
      CHECK(seen.insert({c.col, c.row}).second);
      CHECK(boundary_set.count({c.col, c.row}) == 1);
    }
  }
}

TEST_CASE("interfaces in random devices stay disjoint and inside the region") {
  Rng rng(7);
  for (int it = 0; it < 50; ++it) {
    const Device d = testutil::random_device(rng);
    std::set<std::pair<int, int>> seen;
    for (const Interface& iface : d.interfaces()) {
      CHECK(iface.termination.count() >= 1);
      iface.termination.for_each([&](Cell c) {
        CHECK(d.in_region(c));
        CHECK(seen.insert({c.col, c.row}).second);
      });
    }
  }
}

TEST_CASE("construction rejects malformed descriptions") {
  DeviceConfig config;
  config.name = "bad";
  config.rows = 1;
  config.columns = {ColumnSpec{ResourceKind::LogicCell, 0}, ColumnSpec{ResourceKind::LogicCell, 0}};
  config.interfaces.push_back(InterfaceSpec{0, InterfaceKind::Both, {Cell{0, 0}}});

  SUBCASE("the base config is fine") { CHECK_NOTHROW(build_device(config)); }
  SUBCASE("duplicate interface ids") {
    config.interfaces.push_back(InterfaceSpec{0, InterfaceKind::Both, {Cell{1, 0}}});
    CHECK_THROWS_AS(build_device(config), ConfigError);
  }
  SUBCASE("termination outside the grid") {
    config.interfaces[0].termination = {Cell{5, 0}};
    CHECK_THROWS_AS(build_device(config), ConfigError);
  }
  SUBCASE("termination on a static cell") {
    config.static_rects.push_back(RectSpec{0, 0, 0, 0});
    CHECK_THROWS_AS(build_device(config), ConfigError);
  }
  SUBCASE("overlapping terminations") {
    config.interfaces.push_back(InterfaceSpec{1, InterfaceKind::Both, {Cell{0, 0}}});
    CHECK_THROWS_AS(build_device(config), ConfigError);
  }
  SUBCASE("declared budgets that disagree with the grid") {
    config.declared_budgets = ResourceVector{1, 2, 3};
    CHECK_THROWS_AS(build_device(config), ConfigError);
  }
  SUBCASE("nonpositive dimensions") {
    config.rows = 0;
    CHECK_THROWS_AS(build_device(config), ConfigError);
  }
  SUBCASE("empty termination list") {
    config.interfaces[0].termination.clear();
    CHECK_THROWS_AS(build_device(config), ConfigError);
  }
}

TEST_CASE("static cells are excluded from the region and its totals") {
  DeviceConfig config;
  config.name = "masked";
  config.rows = 2;
  for (int i = 0; i < 4; ++i) config.columns.push_back(ColumnSpec{ResourceKind::LogicCell, 100});
  config.static_rects.push_back(RectSpec{1, 0, 2, 1});  // 2x2 block
  config.interfaces.push_back(InterfaceSpec{0, InterfaceKind::Both, {Cell{0, 0}}});
  const Device d = build_device(config);
  CHECK(d.region().count() == 4);
  CHECK(d.region_totals() == ResourceVector{400, 0, 0});
  CHECK(d.static_mask().test(Cell{1, 1}));
  CHECK(!d.in_region(Cell{2, 0}));
}

TEST_CASE("attachment compatibility") {
  CHECK(afu_can_attach(InterfaceKind::Memory, InterfaceKind::Memory));
  CHECK(afu_can_attach(InterfaceKind::Memory, InterfaceKind::Both));
  CHECK(!afu_can_attach(InterfaceKind::Memory, InterfaceKind::Streaming));
  CHECK(afu_can_attach(InterfaceKind::Streaming, InterfaceKind::Streaming));
  CHECK(afu_can_attach(InterfaceKind::Streaming, InterfaceKind::Both));
  CHECK(!afu_can_attach(InterfaceKind::Streaming, InterfaceKind::Memory));
  CHECK(afu_can_attach(InterfaceKind::Both, InterfaceKind::Both));
  CHECK(!afu_can_attach(InterfaceKind::Both, InterfaceKind::Memory));
  CHECK(!afu_can_attach(InterfaceKind::Both, InterfaceKind::Streaming));
}

}  // TEST_SUITE
