#include "adpr/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "adpr/errors.hpp"

namespace adpr {

using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

// Shortest round-trip decimal form, locale independent.
std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, end);
}

}  // namespace

DeviceConfig device_config_from_json(const json& j) {
  try {
    DeviceConfig config;
    config.name = j.value("name", std::string("device"));
    config.rows = j.at("regionRows").get<int>();
    for (const json& c : j.at("columns")) {
      ColumnSpec spec;
      spec.kind = resource_kind_from_string(c.at("kind").get<std::string>());
      spec.per_cell_capacity = c.value("perCellCapacity", 0LL);
      const int count = c.value("count", 1);
      for (int i = 0; i < count; ++i) config.columns.push_back(spec);
    }
    if (j.contains("staticMask")) {
      for (const json& r : j.at("staticMask")) {
        config.static_rects.push_back(RectSpec{r.at("colLo").get<int>(), r.at("rowLo").get<int>(),
                                               r.at("colHi").get<int>(), r.at("rowHi").get<int>()});
      }
    }
    if (j.contains("interfaces")) {
      for (const json& itf : j.at("interfaces")) {
        InterfaceSpec spec;
        spec.id = itf.at("id").get<int>();
        spec.kind = interface_kind_from_string(itf.value("kind", std::string("both")));
        if (itf.contains("anchor")) {
          spec.termination.push_back(
              Cell{itf.at("anchor").at("col").get<int>(), itf.at("anchor").at("row").get<int>()});
        }
        if (itf.contains("termination")) {
          for (const json& cell : itf.at("termination")) {
            spec.termination.push_back(Cell{cell.at("col").get<int>(), cell.at("row").get<int>()});
          }
        }
        config.interfaces.push_back(std::move(spec));
      }
    }
    if (j.contains("budgets")) {
      const json& b = j.at("budgets");
      config.declared_budgets = ResourceVector{b.at("logicCells").get<long long>(),
                                               b.at("bram").get<long long>(),
                                               b.at("dsp").get<long long>()};
    }
    return config;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad device config: ") + e.what());
  }
}

json device_config_to_json(const DeviceConfig& config) {
  json j;
  j["name"] = config.name;
  j["regionRows"] = config.rows;
  json columns = json::array();
  // Run-length encode consecutive identical columns.
  for (std::size_t i = 0; i < config.columns.size();) {
    std::size_t run = i;
    while (run < config.columns.size() && config.columns[run].kind == config.columns[i].kind &&
           config.columns[run].per_cell_capacity == config.columns[i].per_cell_capacity) {
      ++run;
    }
    columns.push_back(json{{"kind", to_string(config.columns[i].kind)},
                           {"count", run - i},
                           {"perCellCapacity", config.columns[i].per_cell_capacity}});
    i = run;
  }
  j["columns"] = std::move(columns);
  json rects = json::array();
  for (const RectSpec& r : config.static_rects) {
    rects.push_back(json{{"colLo", r.col_lo}, {"rowLo", r.row_lo}, {"colHi", r.col_hi}, {"rowHi", r.row_hi}});
  }
  j["staticMask"] = std::move(rects);
  json interfaces = json::array();
  for (const InterfaceSpec& itf : config.interfaces) {
    json cells = json::array();
    for (Cell c : itf.termination) cells.push_back(json{{"col", c.col}, {"row", c.row}});
    interfaces.push_back(json{{"id", itf.id}, {"kind", to_string(itf.kind)}, {"termination", std::move(cells)}});
  }
  j["interfaces"] = std::move(interfaces);
  if (config.declared_budgets) {
    j["budgets"] = json{{"logicCells", config.declared_budgets->logic_cells},
                        {"bram", config.declared_budgets->bram},
                        {"dsp", config.declared_budgets->dsp}};
  }
  return j;
}

Device load_device(const std::string& path) {
  return build_device(device_config_from_json(read_json_file(path)));
}

json layout_to_json(const Layout& layout) {
  json partitions = json::array();
  for (const Footprint& fp : layout.partitions) {
    json cells = json::array();
    for (Cell c : fp.cells.cells()) cells.push_back(json{{"col", c.col}, {"row", c.row}});
    partitions.push_back(json{{"interface", fp.interface_id}, {"cells", std::move(cells)}});
  }
  return json{{"partitions", std::move(partitions)}};
}

Layout layout_from_json(const Device& device, const json& j) {
  try {
    Layout layout;
    for (const json& p : j.at("partitions")) {
      Footprint fp;
      fp.interface_id = p.at("interface").get<int>();
      fp.cells = device.empty_set();
      for (const json& cell : p.at("cells")) {
        fp.cells.set(Cell{cell.at("col").get<int>(), cell.at("row").get<int>()});
      }
      layout.partitions.push_back(std::move(fp));
    }
    return layout;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad layout: ") + e.what());
  }
}

void save_layout_pool(const std::string& path, const Device& device,
                      std::span<const Layout> layouts) {
  json j;
  j["device"] = device.name();
  json pool = json::array();
  for (const Layout& layout : layouts) pool.push_back(layout_to_json(layout));
  j["layouts"] = std::move(pool);
  write_text_file(path, j.dump(2) + "\n");
}

std::vector<Layout> load_layout_pool(const std::string& path, const Device& device) {
  const json j = read_json_file(path);
  if (j.value("device", std::string()) != device.name()) {
    throw ConfigError("layout pool '" + path + "' was generated for a different device");
  }
  std::vector<Layout> out;
  for (const json& l : j.at("layouts")) out.push_back(layout_from_json(device, l));
  return out;
}

json db_to_json(const BitstreamDb& db) {
  json footprints = json::array();
  for (int i = 0; i < db.footprint_count(); ++i) {
    const Footprint& fp = db.footprint(i);
    json cells = json::array();
    for (Cell c : fp.cells.cells()) cells.push_back(json{{"col", c.col}, {"row", c.row}});
    footprints.push_back(json{{"interface", fp.interface_id}, {"cells", std::move(cells)}});
  }
  json entries = json::array();
  for (const BitstreamDb::Entry& e : db.entries()) {
    entries.push_back(json{{"afu", e.afu_id}, {"footprint", e.footprint_index}, {"bytes", e.bytes}});
  }
  return json{{"footprints", std::move(footprints)}, {"entries", std::move(entries)}};
}

BitstreamDb db_from_json(const Device& device, const json& j) {
  try {
    std::vector<Footprint> footprints;
    for (const json& f : j.at("footprints")) {
      Footprint fp;
      fp.interface_id = f.at("interface").get<int>();
      fp.cells = device.empty_set();
      for (const json& cell : f.at("cells")) {
        fp.cells.set(Cell{cell.at("col").get<int>(), cell.at("row").get<int>()});
      }
      footprints.push_back(std::move(fp));
    }
    BitstreamDb db;
    for (const json& e : j.at("entries")) {
      db.insert(BitstreamVersion{e.at("afu").get<std::string>(),
                                 footprints.at(e.at("footprint").get<std::size_t>()),
                                 e.at("bytes").get<std::uint64_t>()});
    }
    return db;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad bitstream database: ") + e.what());
  }
}

std::string db_summary_csv(const BitstreamDb& db) {
  std::ostringstream out;
  out << "afu,versions,min_bytes,max_bytes\n";
  for (const std::string& afu : db.afu_ids()) {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    bool first = true;
    std::size_t count = 0;
    for (int e : db.candidates(afu)) {
      const std::uint64_t b = db.entries()[static_cast<std::size_t>(e)].bytes;
      if (first) {
        lo = hi = b;
        first = false;
      } else {
        lo = std::min(lo, b);
        hi = std::max(hi, b);
      }
      ++count;
    }
    out << afu << ',' << count << ',' << lo << ',' << hi << '\n';
  }
  return out.str();
}

void write_results_csv(const std::string& path, std::span<const ResultRow> rows) {
  std::string text = "# adpr-results v1\nworkload,difficulty,system,metric,value,seed\n";
  for (const ResultRow& row : rows) {
    text += row.workload;
    text += ',';
    text += row.difficulty;
    text += ',';
    text += row.system;
    text += ',';
    text += row.metric;
    text += ',';
    text += format_double(row.value);
    text += ',';
    text += std::to_string(row.seed);
    text += '\n';
  }
  write_text_file(path, text);
}

std::vector<ResultRow> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::vector<ResultRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column header
      continue;
    }
    std::array<std::string, 6> fields;
    std::size_t start = 0;
    for (int f = 0; f < 6; ++f) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos && f != 5) throw ConfigError("malformed results row: " + line);
      fields[static_cast<std::size_t>(f)] =
          line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      start = comma + 1;
    }
    ResultRow row;
    row.workload = fields[0];
    row.difficulty = fields[1];
    row.system = fields[2];
    row.metric = fields[3];
    row.value = std::stod(fields[4]);
    row.seed = std::stoull(fields[5]);
    rows.push_back(std::move(row));
  }
  return rows;
}

json run_config_to_json(const RunConfig& c) {
  return json{{"command", c.command},
              {"experiment", c.experiment},
              {"device", c.device_path},
              {"workload", c.workload},
              {"difficulty", c.difficulty},
              {"combos", c.combos},
              {"layouts", c.layouts},
              {"length", c.length},
              {"afuDeltas", c.afu_deltas},
              {"seed", c.seed},
              {"routabilityCap", c.routability_cap},
              {"bandwidthBytesPerSecond", c.bandwidth_bytes_per_second},
              {"energyPerByte", c.energy_per_byte},
              {"afuLogicDemand", c.afu_logic_demand},
              {"calibrationCombos", c.calibration_combos},
              {"exactDelta", c.exact_delta},
              {"threads", c.threads},
              {"outCsv", c.out_csv}};
}

RunConfig run_config_from_json(const json& j) {
  try {
    RunConfig c;
    c.command = j.value("command", c.command);
    c.experiment = j.value("experiment", c.experiment);
    c.device_path = j.value("device", c.device_path);
    c.workload = j.value("workload", c.workload);
    c.difficulty = j.value("difficulty", c.difficulty);
    c.combos = j.value("combos", c.combos);
    c.layouts = j.value("layouts", c.layouts);
    c.length = j.value("length", c.length);
    if (j.contains("afuDeltas")) c.afu_deltas = j.at("afuDeltas").get<std::vector<int>>();
    c.seed = j.value("seed", c.seed);
    c.routability_cap = j.value("routabilityCap", c.routability_cap);
    c.bandwidth_bytes_per_second = j.value("bandwidthBytesPerSecond", c.bandwidth_bytes_per_second);
    c.energy_per_byte = j.value("energyPerByte", c.energy_per_byte);
    c.afu_logic_demand = j.value("afuLogicDemand", c.afu_logic_demand);
    c.calibration_combos = j.value("calibrationCombos", c.calibration_combos);
    c.exact_delta = j.value("exactDelta", c.exact_delta);
    c.threads = j.value("threads", c.threads);
    c.out_csv = j.value("outCsv", c.out_csv);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad manifest: ") + e.what());
  }
}

void save_manifest(const std::string& path, const RunConfig& config) {
  write_text_file(path, run_config_to_json(config).dump(2) + "\n");
}

RunConfig load_manifest(const std::string& path) {
  return run_config_from_json(read_json_file(path));
}

ExperimentOptions experiment_options_from(const RunConfig& config) {
  ExperimentOptions options;
  options.routability_cap = config.routability_cap;
  options.overhead.bandwidth_bytes_per_second = config.bandwidth_bytes_per_second;
  if (config.energy_per_byte > 0.0) options.overhead.energy_per_byte = config.energy_per_byte;
  options.calibration_combos = config.calibration_combos;
  options.sequence.exact_delta = config.exact_delta;
  options.threads = config.threads;
  return options;
}

}  // namespace adpr
