#include "iface/enumgen.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "iface/errors.hpp"

namespace iface::enumgen {

TableCoord encode(std::uint64_t n_s) {
  if (n_s == 0) throw InputError("empty set not in table");
  TableCoord c;
  c.col = 63 - std::countl_zero(n_s);
  c.row = n_s - (std::uint64_t{1} << c.col);
  return c;
}

std::uint64_t decode(const TableCoord& coord) {
  if (coord.col < 0 || coord.col > 63) {
    throw InputError("table column " + std::to_string(coord.col) +
                     " out of range");
  }
  const std::uint64_t col_bit = std::uint64_t{1} << coord.col;
  if (coord.row >= col_bit) {
    throw InputError("table row " + std::to_string(coord.row) +
                     " must be below 2^" + std::to_string(coord.col));
  }
  return col_bit + coord.row;
}

void PruneRegistry::add(const SensorSet& mask) {
  if (mask.empty()) throw InputError("cannot register the empty mask");
  for (const SensorSet& m : masks_) {
    if (m.subset_of(mask)) return;  // already covered
  }
  std::erase_if(masks_, [&](const SensorSet& m) { return mask.subset_of(m); });
  masks_.push_back(mask);
}

bool PruneRegistry::covers(const SensorSet& mask) const {
  for (const SensorSet& m : masks_) {
    if (m.subset_of(mask)) return true;
  }
  return false;
}

SubsetGenerator::SubsetGenerator(GeneratorConfig config)
    : config_(std::move(config)) {
  if (config_.pool_size < 1 || config_.pool_size > SensorSet::kMaxBits) {
    throw InputError("pool size must be in [1, 128]");
  }
  if (config_.max_cardinality &&
      (*config_.max_cardinality < 0 ||
       *config_.max_cardinality > config_.pool_size)) {
    throw InputError("max_cardinality must be in [0, pool_size]");
  }
  if (config_.order == Order::kColumnMajor && config_.pool_size > 63) {
    throw InputError("column-major order supports pools up to 63 sensors");
  }
  cap_ = config_.max_cardinality.value_or(config_.pool_size);
  if (config_.columns.empty()) {
    config_.columns.resize(static_cast<std::size_t>(config_.pool_size));
    for (int i = 0; i < config_.pool_size; ++i) {
      config_.columns[static_cast<std::size_t>(i)] = i;
    }
  } else {
    for (int c : config_.columns) {
      if (c < 0 || c >= config_.pool_size) {
        throw InputError("column " + std::to_string(c) + " outside the pool");
      }
    }
    std::sort(config_.columns.begin(), config_.columns.end());
    config_.columns.erase(
        std::unique(config_.columns.begin(), config_.columns.end()),
        config_.columns.end());
  }
  if (cap_ < 1) {
    done_ = true;
    return;
  }
  card_ = 1;
  col_index_ = 0;
  seek_start();
}

SensorSet SubsetGenerator::row_mask() const {
  if (config_.order == Order::kColumnMajor) {
    return SensorSet::from_decimal_code(cm_row_);
  }
  SensorSet m;
  for (int p : row_positions_) m.set(p);
  return m;
}

bool SubsetGenerator::start_column(int col) {
  if (config_.order == Order::kColumnMajor) {
    cm_row_ = 0;
    return true;
  }
  const int k = card_ - 1;
  if (k > col) return false;  // not enough bits below this column
  row_positions_.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) row_positions_[static_cast<std::size_t>(i)] = i;
  return true;
}

// Positions the cursor at the first row of the next startable column, moving
// to the next cardinality group when the column list is exhausted.
void SubsetGenerator::seek_start() {
  while (true) {
    if (col_index_ >= config_.columns.size()) {
      if (config_.order == Order::kColumnMajor || card_ >= cap_) {
        done_ = true;
        return;
      }
      ++card_;
      col_index_ = 0;
      continue;
    }
    if (start_column(config_.columns[col_index_])) return;
    ++col_index_;
  }
}

// Advances the row within the current column. Cardinality-first rows walk
// fixed-popcount position sets in colex order, which is ascending numeric
// order of the row value; column-major rows simply count up.
bool SubsetGenerator::advance_cell() {
  const int col = config_.columns[col_index_];
  if (config_.order == Order::kColumnMajor) {
    ++cm_row_;
    return cm_row_ < (std::uint64_t{1} << col);
  }
  const int k = static_cast<int>(row_positions_.size());
  for (int i = 0; i < k; ++i) {
    const int ceiling =
        (i + 1 < k) ? row_positions_[static_cast<std::size_t>(i + 1)] : col;
    if (row_positions_[static_cast<std::size_t>(i)] + 1 < ceiling) {
      ++row_positions_[static_cast<std::size_t>(i)];
      for (int j = 0; j < i; ++j) {
        row_positions_[static_cast<std::size_t>(j)] = j;
      }
      return true;
    }
  }
  return false;
}

std::optional<SensorSet> SubsetGenerator::next(const PruneRegistry& registry) {
  while (!done_) {
    const int col = config_.columns[col_index_];
    const SensorSet row = row_mask();
    const bool cap_ok = config_.order != Order::kColumnMajor ||
                        row.cardinality() + 1 <= cap_;

    std::optional<SensorSet> emit;
    if (cap_ok) {
      if (config_.row_skip_enabled && registry.covers(row)) {
        ++rows_skipped_;
      } else {
        SensorSet cell = row;
        cell.set(col);
        if (registry.covers(cell)) {
          ++cells_skipped_;
        } else {
          emit = cell;
        }
      }
    }

    if (!advance_cell()) {
      ++col_index_;
      seek_start();
    }
    if (emit) return emit;
  }
  return std::nullopt;
}

std::vector<SensorSet> collect_all(GeneratorConfig config,
                                   const PruneRegistry& registry) {
  SubsetGenerator gen(std::move(config));
  std::vector<SensorSet> out;
  while (auto m = gen.next(registry)) out.push_back(*m);
  return out;
}

}  // namespace iface::enumgen
