#include "adpr/workloads.hpp"

#include <algorithm>

namespace adpr {

std::string to_string(WorkloadFamily family) {
  switch (family) {
    case WorkloadFamily::Bram: return "bram";
    case WorkloadFamily::Dsp: return "dsp";
    case WorkloadFamily::Mixed: return "mixed";
  }
  throw Error("bad workload family");
}

std::string to_string(Difficulty difficulty) {
  switch (difficulty) {
    case Difficulty::Easy: return "easy";
    case Difficulty::Hard: return "hard";
    case Difficulty::Harder: return "harder";
  }
  throw Error("bad difficulty");
}

WorkloadFamily workload_family_from_string(const std::string& s) {
  if (s == "bram") return WorkloadFamily::Bram;
  if (s == "dsp") return WorkloadFamily::Dsp;
  if (s == "mixed") return WorkloadFamily::Mixed;
  throw ConfigError("unknown workload family '" + s + "' (expected bram|dsp|mixed)");
}

Difficulty difficulty_from_string(const std::string& s) {
  if (s == "easy") return Difficulty::Easy;
  if (s == "hard") return Difficulty::Hard;
  if (s == "harder") return Difficulty::Harder;
  throw ConfigError("unknown difficulty '" + s + "' (expected easy|hard|harder)");
}

long long demand_ceiling(WorkloadFamily family, Difficulty difficulty) {
  switch (family) {
    case WorkloadFamily::Bram:
    case WorkloadFamily::Mixed:
      switch (difficulty) {
        case Difficulty::Easy: return 20;
        case Difficulty::Hard: return 30;
        case Difficulty::Harder: return 40;
      }
      break;
    case WorkloadFamily::Dsp:
      switch (difficulty) {
        case Difficulty::Easy: return 30;
        case Difficulty::Hard: return 40;
        case Difficulty::Harder: return 50;
      }
      break;
  }
  throw Error("bad workload spec");
}

namespace {

std::string padded_id(const std::string& prefix, long long demand) {
  std::string digits = std::to_string(demand);
  if (digits.size() < 2) digits.insert(digits.begin(), '0');
  return prefix + digits;
}

void append_ladder(std::vector<AfuSpec>& out, const std::string& prefix,
                   ResourceKind kind, InterfaceKind iface_kind, long long ceiling,
                   long long logic_demand) {
  for (long long demand = 5; demand <= ceiling; demand += 5) {
    ResourceVector d{};
    d.logic_cells = logic_demand;
    d[kind] = demand;
    out.push_back(AfuSpec{padded_id(prefix, demand), d, iface_kind});
  }
}

}  // namespace

std::vector<AfuSpec> build_library(const WorkloadSpec& spec) {
  std::vector<AfuSpec> out;
  out.push_back(AfuSpec{"idle", ResourceVector{}, InterfaceKind::Both});
  const long long ceiling = demand_ceiling(spec.family, spec.difficulty);
  switch (spec.family) {
    case WorkloadFamily::Bram:
      append_ladder(out, "bram", ResourceKind::Bram, InterfaceKind::Memory, ceiling,
                    spec.logic_demand);
      break;
    case WorkloadFamily::Dsp:
      append_ladder(out, "dsp", ResourceKind::Dsp, InterfaceKind::Streaming, ceiling,
                    spec.logic_demand);
      break;
    case WorkloadFamily::Mixed:
      append_ladder(out, "bram", ResourceKind::Bram, InterfaceKind::Memory, ceiling,
                    spec.logic_demand);
      append_ladder(out, "dsp", ResourceKind::Dsp, InterfaceKind::Streaming, ceiling,
                    spec.logic_demand);
      break;
  }
  return out;
}

std::vector<Combination> sample_combinations(std::span<const AfuSpec> library, int n,
                                             int n_slots, Rng& rng) {
  if (library.empty()) throw Error("sample_combinations: empty library");
  std::vector<Combination> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Combination combo;
    combo.slots.reserve(static_cast<std::size_t>(n_slots));
    for (int s = 0; s < n_slots; ++s) {
      combo.slots.push_back(library[rng.below(library.size())].id);
    }
    out.push_back(std::move(combo));
  }
  return out;
}

namespace {

bool passes(const Combination& combo, std::span<const CombinationValidator> validators) {
  for (const auto& validator : validators) {
    if (!validator(combo)) return false;
  }
  return true;
}

}  // namespace

Sequence sample_sequence(std::span<const AfuSpec> library, int length, int afu_delta,
                         int n_slots, std::span<const CombinationValidator> validators,
                         Rng& rng, const SequenceOptions& options) {
  if (afu_delta < 1 || afu_delta > n_slots) {
    throw ConfigError("afu_delta must lie in [1, n_slots]");
  }
  if (library.size() < 2 && options.exact_delta) {
    throw ConfigError("exact-delta sequences need at least two distinct AFUs");
  }
  Sequence seq;
  seq.afu_delta = afu_delta;
  if (length <= 0) return seq;

  // Opening combination: plain rejection sampling.
  {
    bool found = false;
    for (int attempt = 0; attempt < options.max_retries_per_step; ++attempt) {
      auto drawn = sample_combinations(library, 1, n_slots, rng);
      if (passes(drawn[0], validators)) {
        seq.combos.push_back(std::move(drawn[0]));
        found = true;
        break;
      }
    }
    if (!found) throw SequenceError("no valid opening combination found", 0);
  }

  std::vector<int> slot_indices(static_cast<std::size_t>(n_slots));
  for (int s = 0; s < n_slots; ++s) slot_indices[static_cast<std::size_t>(s)] = s;

  while (static_cast<int>(seq.combos.size()) < length) {
    const Combination& prev = seq.combos.back();
    bool committed = false;
    for (int attempt = 0; attempt < options.max_retries_per_step && !committed; ++attempt) {
      // Partial Fisher-Yates: the first afu_delta entries become the slots to
      // change this step.
      for (int i = 0; i < afu_delta; ++i) {
        const std::size_t j =
            static_cast<std::size_t>(i) +
            static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n_slots - i)));
        std::swap(slot_indices[static_cast<std::size_t>(i)], slot_indices[j]);
      }
      Combination next = prev;
      for (int i = 0; i < afu_delta; ++i) {
        const int slot = slot_indices[static_cast<std::size_t>(i)];
        std::string replacement;
        for (int redraw = 0; redraw < options.max_redraws_per_slot; ++redraw) {
          replacement = library[rng.below(library.size())].id;
          if (!options.exact_delta || replacement != prev.slots[static_cast<std::size_t>(slot)]) {
            break;
          }
        }
        next.slots[static_cast<std::size_t>(slot)] = replacement;
      }
      if (options.exact_delta) {
        int changed = 0;
        for (int s = 0; s < n_slots; ++s) {
          if (next.slots[static_cast<std::size_t>(s)] != prev.slots[static_cast<std::size_t>(s)]) {
            ++changed;
          }
        }
        if (changed != afu_delta) continue;
      }
      if (passes(next, validators)) {
        seq.combos.push_back(std::move(next));
        committed = true;
      }
    }
    if (!committed) {
      throw SequenceError("step retry budget exhausted",
                          static_cast<int>(seq.combos.size()));
    }
  }
  return seq;
}

}  // namespace adpr
