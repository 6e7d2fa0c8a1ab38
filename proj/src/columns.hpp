#pragma once

// Sparse Z/2 column arithmetic shared by the reduction and six-pack code.

#include <cstdint>
#include <vector>

#include "m2s2/complex.hpp"
#include "m2s2/reduction.hpp"

namespace m2s2::detail {

using Column = std::vector<Index>;  // ascending

/// target += source over Z/2. `scratch` is reused storage.
void add_column(Column& target, const Column& source, Column& scratch);

/// Column reduction where the pivot of a column is its largest entry.
/// `row_count` bounds the entries. When `v` is non-null it receives the
/// V matrix (each column ascending, in column-index space).
struct ReducedColumns {
  std::vector<Column> r;
  std::vector<Column> v;
  std::vector<Index> pivot_owner;  // row -> column whose pivot it is, kUnpaired otherwise
};

ReducedColumns reduce_columns(std::vector<Column> columns, std::size_t row_count, bool track_v);

}  // namespace m2s2::detail
