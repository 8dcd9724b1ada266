#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hmaps/closed_forms.hpp"
#include "hmaps/integrator.hpp"
#include "hmaps/verifier.hpp"

namespace hmaps {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<Cell>> rows;
};

using Meta = std::vector<std::pair<std::string, std::string>>;

// Shortest decimal that reads back to the same double; '.' regardless of locale.
std::string format_double(double v);

std::string to_csv(const Table& t);

// {"meta": {...}, "rows": [{header: value, ...}, ...]}. Meta values that
// parse as numbers are emitted as numbers.
std::string to_json(const Table& t, const Meta& meta);

Table solution_table(const ODESolution& sol);  // t,R,Rprime,H,drift
Table map_table(const MapSample& sample);       // x,y,t,R,S
Table embedding_table(const MapSample& sample, Quadric quadric, double c);  // x,y,X,Y,Z
Table report_table(const std::vector<std::pair<std::string, Cell>>& fields);  // quantity,value

// Named scalars of a residual report, for report_table.
std::vector<std::pair<std::string, Cell>> report_fields(const ResidualReport& r);

// Readers for the CSV produced above. Headers must match exactly.
MapSample read_map_csv(std::string_view text);
ODESolution read_solution_csv(std::string_view text);

}  // namespace hmaps
