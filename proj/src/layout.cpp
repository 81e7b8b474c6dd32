#include "adpr/layout.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "adpr/errors.hpp"
#include "adpr/parallel.hpp"

namespace adpr {

namespace {

struct IfaceColumns {
  int interface_id;
  int min_col;
  int max_col;
};

std::vector<IfaceColumns> interface_column_order(const Device& device) {
  std::vector<IfaceColumns> order;
  order.reserve(device.interfaces().size());
  for (const Interface& iface : device.interfaces()) {
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    iface.termination.for_each([&](Cell c) {
      lo = std::min(lo, c.col);
      hi = std::max(hi, c.col);
    });
    order.push_back({iface.id, lo, hi});
  }
  std::sort(order.begin(), order.end(), [](const IfaceColumns& a, const IfaceColumns& b) {
    return std::tie(a.min_col, a.max_col, a.interface_id) <
           std::tie(b.min_col, b.max_col, b.interface_id);
  });
  return order;
}

}  // namespace

Layout naive_layout(const Device& device) {
  const int n = static_cast<int>(device.interfaces().size());
  if (n == 0) throw LayoutError("naive layout needs at least one interface", 0);

  const CellSet& region = device.region();
  if (n == 1) {
    Footprint fp{device.interfaces()[0].id, region};
    auto report = validate_footprint(device, fp);
    if (!report.valid()) {
      throw LayoutError("the whole region is not a valid footprint for the only interface", 0);
    }
    return Layout{{fp}};
  }

  // Column extent of the region; stripes tile [col_lo .. col_hi].
  int col_lo = std::numeric_limits<int>::max();
  int col_hi = std::numeric_limits<int>::min();
  region.for_each([&](Cell c) {
    col_lo = std::min(col_lo, c.col);
    col_hi = std::max(col_hi, c.col);
  });
  const int n_cols = col_hi - col_lo + 1;
  if (n_cols < n) throw LayoutError("fewer region columns than interfaces", 0);

  auto order = interface_column_order(device);
  for (int p = 0; p + 1 < n; ++p) {
    if (order[static_cast<std::size_t>(p)].max_col >= order[static_cast<std::size_t>(p) + 1].min_col) {
      throw LayoutError("interface terminations overlap in columns; no stripe layout exists", 0);
    }
  }

  // Per-column resources and prefix sums over the region only.
  std::vector<ResourceVector> prefix(static_cast<std::size_t>(n_cols) + 1);
  for (int x = 0; x < n_cols; ++x) {
    ResourceVector col{};
    for (int row = 0; row < device.rows(); ++row) {
      Cell c{col_lo + x, row};
      if (region.test(c)) col[device.column_kind(c.col)] += device.cell_capacity(c.col);
    }
    prefix[static_cast<std::size_t>(x) + 1] = prefix[static_cast<std::size_t>(x)] + col;
  }
  const ResourceVector totals = prefix[static_cast<std::size_t>(n_cols)];

  auto stripe_sum = [&](int a, int b) {
    ResourceVector r = prefix[static_cast<std::size_t>(b) + 1];
    const ResourceVector& base = prefix[static_cast<std::size_t>(a)];
    r.logic_cells -= base.logic_cells;
    r.bram -= base.bram;
    r.dsp -= base.dsp;
    return r;
  };
  auto stripe_deviation = [&](int a, int b) {
    ResourceVector sum = stripe_sum(a, b);
    double worst = 0.0;
    for (ResourceKind k : all_resource_kinds) {
      if (totals[k] <= 0) continue;
      double mean = static_cast<double>(totals[k]) / n;
      worst = std::max(worst, std::abs(static_cast<double>(sum[k]) - mean) / mean);
    }
    return worst;
  };

  auto stripe_cells = [&](int a, int b) {
    CellSet cells = device.empty_set();
    region.for_each([&](Cell c) {
      int x = c.col - col_lo;
      if (x >= a && x <= b) cells.set(c);
    });
    return cells;
  };
  // Connectivity memo, keyed a * n_cols + b; -1 unknown.
  std::vector<signed char> connected_memo(static_cast<std::size_t>(n_cols) * static_cast<std::size_t>(n_cols), -1);
  auto stripe_connected = [&](int a, int b) {
    signed char& memo = connected_memo[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_cols) + static_cast<std::size_t>(b)];
    if (memo < 0) {
      CellSet cells = stripe_cells(a, b);
      memo = (!cells.empty() && is_connected(cells)) ? 1 : 0;
    }
    return memo == 1;
  };
  auto stripe_ok = [&](int p, int a, int b) {
    const IfaceColumns& ic = order[static_cast<std::size_t>(p)];
    return a <= ic.min_col - col_lo && ic.max_col - col_lo <= b && stripe_connected(a, b);
  };

  // suffix[p][i]: least achievable worst deviation placing stripes p..n-1 on
  // columns [i .. n_cols-1].
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> suffix(static_cast<std::size_t>(n) + 1,
                                          std::vector<double>(static_cast<std::size_t>(n_cols) + 1, kInf));
  for (int i = 0; i <= n_cols; ++i) suffix[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)] = kInf;
  for (int p = n - 1; p >= 0; --p) {
    for (int i = 0; i < n_cols; ++i) {
      double best = kInf;
      if (p == n - 1) {
        if (stripe_ok(p, i, n_cols - 1)) best = stripe_deviation(i, n_cols - 1);
      } else {
        for (int e = i; e < n_cols - 1; ++e) {
          if (!stripe_ok(p, i, e)) continue;
          double rest = suffix[static_cast<std::size_t>(p) + 1][static_cast<std::size_t>(e) + 1];
          if (rest == kInf) continue;
          best = std::min(best, std::max(stripe_deviation(i, e), rest));
        }
      }
      suffix[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)] = best;
    }
  }
  if (suffix[0][0] == kInf) {
    throw LayoutError("no stripe assignment yields valid partitions", 0);
  }

  // Greedy reconstruction; earliest cut achieving the optimum, so ties go to
  // the lexicographically smallest boundary vector.
  std::vector<std::pair<int, int>> spans;
  int start = 0;
  for (int p = 0; p < n; ++p) {
    if (p == n - 1) {
      spans.emplace_back(start, n_cols - 1);
      break;
    }
    const double target = suffix[static_cast<std::size_t>(p)][static_cast<std::size_t>(start)];
    for (int e = start; e < n_cols - 1; ++e) {
      if (!stripe_ok(p, start, e)) continue;
      double rest = suffix[static_cast<std::size_t>(p) + 1][static_cast<std::size_t>(e) + 1];
      if (rest == kInf) continue;
      if (std::max(stripe_deviation(start, e), rest) == target) {
        spans.emplace_back(start, e);
        start = e + 1;
        break;
      }
    }
    if (static_cast<int>(spans.size()) != p + 1) {
      throw LayoutError("stripe reconstruction lost the optimum", 0);
    }
  }

  Layout layout;
  layout.partitions.assign(static_cast<std::size_t>(n), Footprint{});
  for (int p = 0; p < n; ++p) {
    Footprint fp{order[static_cast<std::size_t>(p)].interface_id,
                 stripe_cells(spans[static_cast<std::size_t>(p)].first,
                              spans[static_cast<std::size_t>(p)].second)};
    auto report = validate_footprint(device, fp);
    if (!report.valid()) throw LayoutError("stripe is not a valid footprint", 0);
    layout.partitions[static_cast<std::size_t>(fp.interface_id)] = fp;
  }
  return layout;
}

namespace {

std::string layout_key(const Layout& layout) {
  std::string key;
  for (const Footprint& fp : layout.partitions) {
    key += canonical_key(fp);
    key += '|';
  }
  return key;
}

}  // namespace

std::vector<Layout> random_layouts(const Device& device, int n, Rng& rng,
                                   const LayoutGenOptions& options) {
  if (n < 0) throw Error("random_layouts: negative count");
  const int n_ifaces = static_cast<int>(device.interfaces().size());
  if (n_ifaces == 0) throw LayoutError("device has no interfaces", 0);

  std::vector<Layout> out;
  out.reserve(static_cast<std::size_t>(n));
  std::unordered_set<std::string> seen;
  const long long budget =
      static_cast<long long>(n) * options.max_attempt_factor + options.max_attempt_slack;
  const long long region_cells = static_cast<long long>(device.region().count());

  for (long long attempt = 0; attempt < budget && static_cast<int>(out.size()) < n; ++attempt) {
    std::vector<double> weight(static_cast<std::size_t>(n_ifaces));
    for (double& w : weight) w = std::exp(options.weight_spread * (2.0 * rng.unit() - 1.0));

    CellSet claimed = device.all_termination();
    std::vector<CellSet> parts;
    std::vector<std::vector<Cell>> frontier(static_cast<std::size_t>(n_ifaces));
    for (int i = 0; i < n_ifaces; ++i) {
      const Interface& iface = device.interfaces()[static_cast<std::size_t>(i)];
      parts.push_back(iface.termination);
      iface.termination.for_each([&](Cell c) {
        for (Cell nb : {Cell{c.col - 1, c.row}, Cell{c.col + 1, c.row},
                        Cell{c.col, c.row - 1}, Cell{c.col, c.row + 1}}) {
          if (claimed.in_bounds(nb) && device.in_region(nb) && !claimed.test(nb)) {
            frontier[static_cast<std::size_t>(i)].push_back(nb);
          }
        }
      });
    }

    while (true) {
      double total = 0.0;
      for (int i = 0; i < n_ifaces; ++i) {
        if (!frontier[static_cast<std::size_t>(i)].empty()) total += weight[static_cast<std::size_t>(i)];
      }
      if (total == 0.0) break;
      const double r = rng.unit() * total;
      int pick = -1;
      double cum = 0.0;
      for (int i = 0; i < n_ifaces; ++i) {
        if (frontier[static_cast<std::size_t>(i)].empty()) continue;
        cum += weight[static_cast<std::size_t>(i)];
        pick = i;
        if (r < cum) break;
      }
      auto& fr = frontier[static_cast<std::size_t>(pick)];
      const std::size_t at = static_cast<std::size_t>(rng.below(fr.size()));
      Cell c = fr[at];
      fr[at] = fr.back();
      fr.pop_back();
      if (claimed.test(c)) continue;  // lost the race to another interface
      claimed.set(c);
      parts[static_cast<std::size_t>(pick)].set(c);
      for (Cell nb : {Cell{c.col - 1, c.row}, Cell{c.col + 1, c.row},
                      Cell{c.col, c.row - 1}, Cell{c.col, c.row + 1}}) {
        if (claimed.in_bounds(nb) && device.in_region(nb) && !claimed.test(nb)) fr.push_back(nb);
      }
    }

    bool ok = true;
    long long covered = 0;
    Layout layout;
    layout.partitions.assign(static_cast<std::size_t>(n_ifaces), Footprint{});
    for (int i = 0; i < n_ifaces && ok; ++i) {
      const Interface& iface = device.interfaces()[static_cast<std::size_t>(i)];
      const CellSet& cells = parts[static_cast<std::size_t>(i)];
      if (static_cast<long long>(cells.count()) - static_cast<long long>(iface.termination.count()) <
          options.min_extra_cells) {
        ok = false;
        break;
      }
      covered += static_cast<long long>(cells.count());
      Footprint fp{iface.id, cells};
      if (!validate_footprint(device, fp).valid()) {
        ok = false;
        break;
      }
      layout.partitions[static_cast<std::size_t>(i)] = fp;
    }
    if (!ok || covered != region_cells) continue;
    if (!seen.insert(layout_key(layout)).second) continue;
    out.push_back(std::move(layout));
  }

  if (static_cast<int>(out.size()) < n) {
    throw LayoutError("attempt budget exhausted before collecting " + std::to_string(n) +
                          " distinct layouts",
                      static_cast<int>(out.size()));
  }
  return out;
}

BestLayout best_effort_layout(std::span<const Layout> layouts,
                              std::span<const Combination> combos,
                              const PackOracle& oracle, int threads) {
  if (layouts.empty()) throw Error("best_effort_layout: empty layout pool");
  std::vector<double> rates(layouts.size(), 0.0);
  parallel_for(layouts.size(), threads, [&](std::size_t i) {
    std::size_t hits = 0;
    for (const Combination& combo : combos) {
      if (oracle(layouts[i], combo)) ++hits;
    }
    rates[i] = combos.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(combos.size());
  });
  BestLayout best{0, rates[0]};
  for (std::size_t i = 1; i < rates.size(); ++i) {
    if (rates[i] > best.rate) best = {static_cast<int>(i), rates[i]};
  }
  return best;
}

}  // namespace adpr
