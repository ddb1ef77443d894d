#include "ossa/io.hpp"

#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "ossa/csv.hpp"
#include "ossa/error.hpp"

namespace ossa {

namespace {

using nlohmann::json;

template <typename T>
T field(const json& obj, const char* key, const std::string& source) {
  if (!obj.contains(key)) {
    throw Error(ErrorCode::kMalformedInput,
                source + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput,
                source + ": field '" + key + "': " + e.what());
  }
}

Units non_negative(const json& obj, const char* key, const std::string& source) {
  const auto value = field<std::int64_t>(obj, key, source);
  if (value < 0) {
    throw Error(ErrorCode::kMalformedInput,
                source + ": field '" + key + "' must be non-negative");
  }
  return static_cast<Units>(value);
}

}  // namespace

RawInstance read_instance_json(std::istream& in, const std::string& source) {
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, source + ": " + e.what());
  }
  RawInstance raw;
  raw.p = field<double>(doc, "penalty", source);
  raw.s = non_negative(doc, "supply", source);
  const json sites = field<json>(doc, "sites", source);
  if (!sites.is_array()) {
    throw Error(ErrorCode::kMalformedInput, source + ": sites must be a list");
  }
  for (const auto& entry : sites) {
    SiteSpec site;
    site.site_id = field<std::int64_t>(entry, "id", source);
    site.w = field<double>(entry, "w", source);
    site.c = non_negative(entry, "c", source);
    site.b = non_negative(entry, "b", source);
    raw.sites.push_back(site);
  }
  if (doc.contains("demand")) {
    const json& rows = doc.at("demand");
    if (!rows.is_array()) {
      throw Error(ErrorCode::kMalformedInput, source + ": demand must be a list");
    }
    for (const auto& row : rows) {
      if (!row.is_array()) {
        throw Error(ErrorCode::kMalformedInput,
                    source + ": demand rows must be lists");
      }
      std::vector<Units> units;
      for (const auto& cell : row) {
        if (!cell.is_number_integer()) {
          throw Error(ErrorCode::kMalformedInput,
                      source + ": demand entries must be integers");
        }
        const auto v = cell.get<std::int64_t>();
        if (v < 0) {
          throw Error(ErrorCode::kMalformedInput,
                      source + ": negative demand entry");
        }
        units.push_back(static_cast<Units>(v));
      }
      raw.demand.push_back(std::move(units));
    }
  } else {
    raw.demand.assign(raw.sites.size(), {});
  }
  if (doc.contains("horizon")) {
    raw.horizon = non_negative(doc, "horizon", source);
    raw.horizon_set = true;
  }
  return raw;
}

RawInstance load_instance_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return read_instance_json(in, path);
}

void merge_demand_csv(RawInstance& raw, const std::string& path) {
  const csv::Table table = csv::Table::read_file(path);
  const std::size_t col_t = table.column("t");
  const std::size_t col_site = table.column("site_id");
  const std::size_t col_demand = table.column("demand");

  std::map<std::int64_t, std::size_t> row_of;
  for (std::size_t i = 0; i < raw.sites.size(); ++i) {
    row_of[raw.sites[i].site_id] = i;
  }
  std::size_t horizon = raw.horizon_set ? raw.horizon : 0;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto t = table.as_int(r, col_t);
    if (t < 1) {
      throw Error(ErrorCode::kMalformedInput,
                  path + ": steps are 1-based, got t = " + std::to_string(t));
    }
    if (!raw.horizon_set) horizon = std::max(horizon, static_cast<std::size_t>(t));
  }
  std::vector<std::vector<Units>> demand(raw.sites.size(),
                                         std::vector<Units>(horizon, 0));
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto t = static_cast<std::size_t>(table.as_int(r, col_t));
    const auto id = table.as_int(r, col_site);
    const auto d = table.as_int(r, col_demand);
    auto it = row_of.find(id);
    if (it == row_of.end()) {
      throw Error(ErrorCode::kMalformedInput,
                  path + ": unknown site_id " + std::to_string(id));
    }
    if (d < 0) {
      throw Error(ErrorCode::kMalformedInput, path + ": negative demand");
    }
    if (t > horizon) {
      throw Error(ErrorCode::kMalformedInput,
                  path + ": step " + std::to_string(t) + " beyond horizon");
    }
    demand[it->second][t - 1] += static_cast<Units>(d);
  }
  raw.demand = std::move(demand);
  raw.horizon = horizon;
  raw.horizon_set = true;
}

void write_instance_json(std::ostream& out, const RawInstance& raw) {
  json doc;
  doc["penalty"] = raw.p;
  doc["supply"] = raw.s;
  json sites = json::array();
  for (const auto& site : raw.sites) {
    sites.push_back({{"id", site.site_id}, {"w", site.w}, {"c", site.c}, {"b", site.b}});
  }
  doc["sites"] = std::move(sites);
  doc["demand"] = raw.demand;
  if (raw.horizon_set) doc["horizon"] = raw.horizon;
  out << doc.dump() << '\n';
}

void write_instance_json(std::ostream& out, const Instance& instance) {
  write_instance_json(out, instance.to_raw());
}

void save_instance_json(const std::string& path, const Instance& instance) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  write_instance_json(out, instance);
}

}  // namespace ossa
