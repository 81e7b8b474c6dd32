// Acceptance gate: one self-contained check per shipped claim, each printing
// a single PASS/FAIL verdict line. Scales and tolerances are pinned here on
// purpose; loosening them is a code change, not a flag.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adpr/experiments.hpp"
#include "adpr/io.hpp"
#include "property_suites.hpp"

namespace {

using namespace adpr;

// Pinned experiment scales and tolerances.
constexpr int kComboCount = 1000;        // combinations per placement cell
constexpr int kLayoutCount = 1000;       // random layouts per pool
constexpr std::uint64_t kBaseSeed = 1;
constexpr double kGridTimeBudgetSeconds = 600.0;  // full grid on one core
constexpr int kOracleInstances = 500;    // packer-vs-oracle comparisons
constexpr int kTrendSeeds = 5;           // seeds averaged for trend checks
constexpr double kEasyBestEffortFloor = 0.60;
constexpr double kAmorphousFloor = 0.60;
constexpr double kRatioLow = 1.05;       // standard/amorphous overhead band
constexpr double kRatioHigh = 2.0;
constexpr int kSequenceLength = 1000;    // steps per overhead sequence
constexpr int kPropertyCases = 1000;     // cases per property suite

struct Context {
  std::string config_dir = "configs";
  int threads = 1;
};

Device load_family_device(const Context& ctx, WorkloadFamily family) {
  return load_device(ctx.config_dir + "/workload_" + to_string(family) + ".json");
}

void verdict(int id, bool pass, const std::string& detail) {
  std::printf("C%d %s %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// --- criterion 1: structural dominance at full scale ------------------------

bool criterion_dominance(const Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  int ordered = 0;
  int total = 0;
  ExperimentOptions options;
  options.threads = ctx.threads;
  for (WorkloadFamily family : all_workload_families) {
    const Device device = load_family_device(ctx, family);
    for (Difficulty difficulty : all_difficulties) {
      const WorkloadSpec spec{family, difficulty, 500};
      const auto r = run_placement_experiment(device, spec, kComboCount, kLayoutCount,
                                              kBaseSeed, options);
      ++total;
      const bool ok =
          r.naive_rate <= r.best_effort_rate && r.best_effort_rate <= r.amorphous_rate;
      if (ok) ++ordered;
      std::printf("  %-5s/%-6s naive %-6s best-effort %-6s amorphous %-6s %s\n",
                  to_string(family).c_str(), to_string(difficulty).c_str(),
                  fmt(r.naive_rate).c_str(), fmt(r.best_effort_rate).c_str(),
                  fmt(r.amorphous_rate).c_str(), ok ? "" : "<-- ordering violated");
    }
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_budget = elapsed < kGridTimeBudgetSeconds;
  verdict(1, ordered == total && in_budget,
          "dominance amorphous >= best-effort >= naive in " + std::to_string(ordered) + "/" +
              std::to_string(total) + " cells at " + std::to_string(kComboCount) +
              " combinations, grid in " + fmt(elapsed) + "s (budget " +
              fmt(kGridTimeBudgetSeconds) + "s)");
  return ordered == total && in_budget;
}

// --- criterion 2: packer equals the exhaustive oracle ------------------------

bool criterion_oracle(const Context&) {
  const auto r = props::oracle_equivalence(kOracleInstances, 0x5eedu);
  verdict(2, r.failures == 0,
          "packer vs exhaustive oracle: " + std::to_string(r.failures) + " disagreements in " +
              std::to_string(r.cases) + " comparisons over " + std::to_string(kOracleInstances) +
              " randomized instances");
  return r.failures == 0;
}

// --- criterion 3: seed-averaged placement-rate trends ------------------------

struct CellRates {
  double naive = 0.0;
  double best = 0.0;
  double amorphous = 0.0;
};

bool criterion_trends(const Context& ctx) {
  // Seed-averaged rates per cell.
  std::map<std::pair<int, int>, CellRates> grid;  // (family, difficulty) -> mean rates
  ExperimentOptions options;
  options.threads = ctx.threads;
  for (WorkloadFamily family : all_workload_families) {
    const Device device = load_family_device(ctx, family);
    for (Difficulty difficulty : all_difficulties) {
      CellRates mean;
      for (int s = 0; s < kTrendSeeds; ++s) {
        const WorkloadSpec spec{family, difficulty, 500};
        const auto r = run_placement_experiment(device, spec, kComboCount, kLayoutCount,
                                                kBaseSeed + static_cast<std::uint64_t>(s),
                                                options);
        mean.naive += r.naive_rate / kTrendSeeds;
        mean.best += r.best_effort_rate / kTrendSeeds;
        mean.amorphous += r.amorphous_rate / kTrendSeeds;
      }
      grid[{static_cast<int>(family), static_cast<int>(difficulty)}] = mean;
    }
  }

  bool naive_lowest = true;
  bool naive_degrades = true;
  bool best_easy_floor = true;
  bool best_falls = true;
  bool amorphous_floor = true;
  int gap_families = 0;

  for (WorkloadFamily family : all_workload_families) {
    const int f = static_cast<int>(family);
    const CellRates easy = grid[{f, 0}];
    const CellRates hard = grid[{f, 1}];
    const CellRates harder = grid[{f, 2}];
    for (const CellRates* cell : {&easy, &hard, &harder}) {
      if (cell->naive > cell->best || cell->naive > cell->amorphous) naive_lowest = false;
      if (cell->amorphous < kAmorphousFloor) amorphous_floor = false;
    }
    if (!(easy.naive >= hard.naive && hard.naive >= harder.naive)) naive_degrades = false;
    if (easy.best < kEasyBestEffortFloor) best_easy_floor = false;
    if (!(easy.best >= hard.best && hard.best >= harder.best)) best_falls = false;
    const double gap_easy = easy.amorphous - easy.best;
    const double gap_hard = hard.amorphous - hard.best;
    const double gap_harder = harder.amorphous - harder.best;
    if (gap_easy <= gap_hard && gap_hard <= gap_harder) ++gap_families;
    std::printf(
        "  %-5s mean rates over %d seeds: naive %s/%s/%s best %s/%s/%s amorphous %s/%s/%s\n",
        to_string(family).c_str(), kTrendSeeds, fmt(easy.naive).c_str(), fmt(hard.naive).c_str(),
        fmt(harder.naive).c_str(), fmt(easy.best).c_str(), fmt(hard.best).c_str(),
        fmt(harder.best).c_str(), fmt(easy.amorphous).c_str(), fmt(hard.amorphous).c_str(),
        fmt(harder.amorphous).c_str());
  }

  const bool a = naive_lowest && naive_degrades;
  const bool b = best_easy_floor && best_falls;
  const bool c = amorphous_floor;
  std::printf("  (a) naive lowest everywhere: %s; degrades with difficulty: %s\n",
              naive_lowest ? "yes" : "no", naive_degrades ? "yes" : "no");
  std::printf("  (b) best-effort easy >= %s: %s; falls with difficulty: %s\n",
              fmt(kEasyBestEffortFloor).c_str(), best_easy_floor ? "yes" : "no",
              best_falls ? "yes" : "no");
  std::printf("  (c) amorphous >= %s in every cell: %s\n", fmt(kAmorphousFloor).c_str(),
              amorphous_floor ? "yes" : "no");
  std::printf("  info: amorphous-minus-best gap non-decreasing with difficulty in %d/3 families\n",
              gap_families);
  verdict(3, a && b && c,
          std::string("placement-rate trends: (a) ") + (a ? "ok" : "violated") + ", (b) " +
              (b ? "ok" : "violated") + ", (c) " + (c ? "ok" : "violated"));
  return a && b && c;
}

// --- criterion 4: overhead ratio band and delta growth -----------------------

bool criterion_overhead(const Context& ctx) {
  ExperimentOptions options;
  options.threads = ctx.threads;
  constexpr int kDeltas[] = {1, 2, 3, 4};

  // means[family][delta] = accumulated mean transition seconds over completed
  // difficulties, plus the completion count.
  struct Agg {
    double standard_sum = 0.0;
    double amorphous_sum = 0.0;
    int completed = 0;
    int attempted = 0;
  };
  std::map<std::pair<int, int>, Agg> cells;

  for (WorkloadFamily family : all_workload_families) {
    const Device device = load_family_device(ctx, family);
    for (Difficulty difficulty : all_difficulties) {
      const WorkloadSpec spec{family, difficulty, 500};
      for (int delta : kDeltas) {
        const auto r = run_overhead_experiment(device, spec, kSequenceLength, delta,
                                               kLayoutCount, kBaseSeed, options);
        Agg& agg = cells[{static_cast<int>(family), delta}];
        ++agg.attempted;
        if (!r.completed) {
          std::printf("  %-5s/%-6s delta %d: unconstructible after %d steps\n",
                      to_string(family).c_str(), to_string(difficulty).c_str(), delta,
                      r.steps_built);
          continue;
        }
        ++agg.completed;
        agg.standard_sum += r.standard_stats.mean_seconds;
        agg.amorphous_sum += r.amorphous_stats.mean_seconds;
      }
    }
  }

  bool band_ok = true;
  int band_cells = 0;
  for (WorkloadFamily family : all_workload_families) {
    for (int delta : kDeltas) {
      const Agg& agg = cells[{static_cast<int>(family), delta}];
      if (agg.completed == 0) {
        std::printf("  %-5s delta %d: no completed difficulty, skipped\n",
                    to_string(family).c_str(), delta);
        continue;
      }
      ++band_cells;
      const double ratio = agg.standard_sum / agg.amorphous_sum;
      const bool ok = ratio >= kRatioLow && ratio <= kRatioHigh;
      if (!ok) band_ok = false;
      std::printf("  %-5s delta %d: standard/amorphous ratio %s over %d/%d completed runs%s\n",
                  to_string(family).c_str(), delta, fmt(ratio).c_str(), agg.completed,
                  agg.attempted, ok ? "" : " <-- outside band");
    }
  }

  // Strict growth in delta for the BRAM workload, both systems.
  bool growth_ok = true;
  for (const bool standard : {true, false}) {
    bool system_ok = true;
    double prev = -1.0;
    for (int delta : kDeltas) {
      const Agg& agg = cells[{static_cast<int>(WorkloadFamily::Bram), delta}];
      if (agg.completed == 0) {
        system_ok = false;
        break;
      }
      const double mean =
          (standard ? agg.standard_sum : agg.amorphous_sum) / agg.completed;
      if (mean <= prev) system_ok = false;
      prev = mean;
    }
    if (!system_ok) growth_ok = false;
    std::printf("  bram %s mean transition seconds %s in delta 1..4\n",
                standard ? "standard" : "amorphous",
                system_ok ? "strictly increases" : "fails to strictly increase");
  }

  verdict(4, band_ok && growth_ok,
          "overhead: ratio in [" + fmt(kRatioLow) + ", " + fmt(kRatioHigh) + "] on " +
              std::to_string(band_cells) + " completed (workload, delta) cells " +
              (band_ok ? "held" : "violated") + "; bram delta growth " +
              (growth_ok ? "strict" : "not strict"));
  return band_ok && growth_ok;
}

// --- criterion 5: property batteries -----------------------------------------

bool criterion_properties(const Context&) {
  bool pass = true;
  for (const props::SuiteResult& r : props::run_all(kPropertyCases, 0xacce5u)) {
    std::printf("  %-36s %d cases, %d failures\n", r.name.c_str(), r.cases, r.failures);
    if (r.failures != 0 || r.cases < kPropertyCases) pass = false;
  }
  verdict(5, pass,
          std::string("module invariants at >= ") + std::to_string(kPropertyCases) +
              " cases per suite " + (pass ? "all hold" : "violated"));
  return pass;
}

// --- criterion 6: bundled fabric resource totals ------------------------------

bool criterion_budgets(const Context& ctx) {
  struct Expected {
    WorkloadFamily family;
    ResourceVector totals;
  };
  const Expected expected[] = {
      {WorkloadFamily::Bram, {27816, 80, 90}},
      {WorkloadFamily::Dsp, {23968, 38, 120}},
      {WorkloadFamily::Mixed, {22712, 40, 80}},
  };
  bool pass = true;
  for (const Expected& e : expected) {
    const Device device = load_family_device(ctx, e.family);
    const ResourceVector got = device.region_totals();
    const bool ok = got == e.totals;
    if (!ok) pass = false;
    std::printf("  %-5s region totals %lld/%lld/%lld expected %lld/%lld/%lld%s\n",
                to_string(e.family).c_str(), got.logic_cells, got.bram, got.dsp,
                e.totals.logic_cells, e.totals.bram, e.totals.dsp, ok ? "" : " <-- mismatch");
  }
  verdict(6, pass, std::string("bundled fabric totals ") + (pass ? "exact" : "wrong"));
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance gate"};
  int criterion = 0;  // 0 = all
  Context ctx;
  app.add_option("--criterion", criterion, "Run one criterion (1..6), default all");
  app.add_option("--config-dir", ctx.config_dir, "Directory with the bundled device configs");
  app.add_option("--threads", ctx.threads, "Worker threads");
  CLI11_PARSE(app, argc, argv);

  using Check = bool (*)(const Context&);
  const Check checks[] = {criterion_dominance, criterion_oracle,   criterion_trends,
                          criterion_overhead,  criterion_properties, criterion_budgets};
  bool all = true;
  for (int id = 1; id <= 6; ++id) {
    if (criterion != 0 && criterion != id) continue;
    try {
      if (!checks[id - 1](ctx)) all = false;
    } catch (const std::exception& e) {
      verdict(id, false, std::string("exception: ") + e.what());
      all = false;
    }
  }
  return all ? 0 : 1;
}
