#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "submatch/instance.hpp"

namespace submatch {

// Text format: a line "n", then n lines of n space-separated costs.
// Binary format: magic "SUBM1", u64 n (little-endian), n*n f64 (little-endian, row-major).
struct CostMatrixData {
  std::size_t n = 0;
  std::vector<double> costs;
};

CostMatrixData read_cost_matrix(const std::string& path);
CostMatrixData read_cost_matrix(std::istream& in);
void write_cost_matrix_text(std::ostream& out, const CostFunction& fn);
void write_cost_matrix_binary(std::ostream& out, const CostFunction& fn);
void write_cost_matrix(const std::string& path, const CostFunction& fn, bool binary);

BipartiteInstance load_instance(const std::string& path);

}  // namespace submatch
