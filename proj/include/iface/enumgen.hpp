#ifndef IFACE_ENUMGEN_HPP_
#define IFACE_ENUMGEN_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "iface/sensor_set.hpp"

namespace iface::enumgen {

/// Cell address in the binary iteration table. The column is the most
/// significant selected bit; the row holds the remaining bits, so row < 2^col.
struct TableCoord {
  int col = 0;
  std::uint64_t row = 0;
};

/// Table cell of the selection code n_s >= 1. The empty set (code 0) has no
/// cell and is handled by callers separately.
TableCoord encode(std::uint64_t n_s);

/// Inverse of encode: 2^col + row.
std::uint64_t decode(const TableCoord& coord);

/// Masks whose supersets must be skipped. Kept minimal: a newly added mask
/// subsuming an older one replaces it, and masks already covered are dropped.
class PruneRegistry {
 public:
  void add(const SensorSet& mask);
  /// True iff some registered mask is a subset of the given mask.
  bool covers(const SensorSet& mask) const;
  const std::vector<SensorSet>& masks() const { return masks_; }
  bool empty() const { return masks_.empty(); }

 private:
  std::vector<SensorSet> masks_;
};

enum class Order {
  kCardinalityFirst,  // popcount groups ascending; first hit is minimum size
  kColumnMajor,       // table reading order, columns left to right
};

struct GeneratorConfig {
  int pool_size = 1;
  std::optional<int> max_cardinality;
  Order order = Order::kCardinalityFirst;
  /// Restricts emission to these columns (parallel sweeps partition columns).
  std::vector<int> columns;
  /// Test hook: disables whole-row skipping, leaving per-cell checks only.
  bool row_skip_enabled = true;
};

/// Exhaustive cursor over nonempty subsets of {0..pool_size-1}. The registry
/// is consulted on every call, so masks registered mid-sweep prune the
/// remainder of the sweep.
class SubsetGenerator {
 public:
  explicit SubsetGenerator(GeneratorConfig config);

  /// Next unpruned mask, or nullopt once exhausted.
  std::optional<SensorSet> next(const PruneRegistry& registry);

  /// Rows skipped wholesale (registry covered the row bits alone), and cells
  /// skipped by the per-cell superset test.
  std::uint64_t rows_skipped() const { return rows_skipped_; }
  std::uint64_t cells_skipped() const { return cells_skipped_; }

 private:
  bool advance_cell();          // moves to the next row within the column
  bool start_column(int col);   // resets the row state for a column
  void seek_start();            // finds the next startable (card, col) pair
  SensorSet row_mask() const;

  GeneratorConfig config_;
  int cap_;
  int card_ = 1;                // current popcount group (cardinality-first)
  std::size_t col_index_ = 0;   // index into config_.columns
  std::vector<int> row_positions_;  // set bit positions of the current row
  std::uint64_t cm_row_ = 0;        // row counter for column-major order
  bool done_ = false;
  std::uint64_t rows_skipped_ = 0;
  std::uint64_t cells_skipped_ = 0;
};

/// Convenience sweep: every unpruned mask, in order.
std::vector<SensorSet> collect_all(GeneratorConfig config,
                                   const PruneRegistry& registry);

}  // namespace iface::enumgen

#endif  // IFACE_ENUMGEN_HPP_
