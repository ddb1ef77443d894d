#pragma once

// Instance files:
//
//   {"penalty": 1.0, "supply": 3,
//    "sites": [{"id": 1, "w": 0.1, "c": 1, "b": 1}, ...],
//    "demand": [[1, 1, 1], ...]}
//
// Demand rows follow the order of "sites" (validate re-sorts). "demand" may
// be omitted when a demand CSV with columns t,site_id,demand is merged in;
// steps are 1-based there and missing cells are zero. An optional "horizon"
// fixes T explicitly.

#include <iosfwd>
#include <string>

#include "ossa/model.hpp"

namespace ossa {

RawInstance read_instance_json(std::istream& in, const std::string& source);
RawInstance load_instance_json(const std::string& path);

// Replaces raw.demand with the rows of a t,site_id,demand CSV. Repeated
// (t, site_id) rows are summed.
void merge_demand_csv(RawInstance& raw, const std::string& path);

void write_instance_json(std::ostream& out, const RawInstance& raw);
void write_instance_json(std::ostream& out, const Instance& instance);
void save_instance_json(const std::string& path, const Instance& instance);

}  // namespace ossa
