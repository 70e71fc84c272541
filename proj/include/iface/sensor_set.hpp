#ifndef IFACE_SENSOR_SET_HPP_
#define IFACE_SENSOR_SET_HPP_

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <vector>

#include "iface/errors.hpp"

namespace iface {

/// A subset of a sensor pool, stored as a 128-bit mask over sensor ids.
/// Wide enough for every pool in scope (the 118-bus pool has 54 sensors).
class SensorSet {
 public:
  static constexpr int kMaxBits = 128;

  constexpr SensorSet() = default;

  static SensorSet single(int id) {
    SensorSet s;
    s.set(id);
    return s;
  }

  static SensorSet from_ids(const std::vector<int>& ids) {
    SensorSet s;
    for (int id : ids) s.set(id);
    return s;
  }

  static SensorSet from_ids(std::initializer_list<int> ids) {
    SensorSet s;
    for (int id : ids) s.set(id);
    return s;
  }

  /// The set {0, 1, ..., pool_size-1}.
  static SensorSet full(int pool_size) {
    check_bit(pool_size == 0 ? 0 : pool_size - 1);
    SensorSet s;
    if (pool_size > 64) {
      s.lo_ = ~std::uint64_t{0};
      s.hi_ = (pool_size == 128) ? ~std::uint64_t{0}
                                 : ((std::uint64_t{1} << (pool_size - 64)) - 1);
    } else if (pool_size == 64) {
      s.lo_ = ~std::uint64_t{0};
    } else if (pool_size > 0) {
      s.lo_ = (std::uint64_t{1} << pool_size) - 1;
    }
    return s;
  }

  /// Interprets n as the binary selection code N_S (bit i selects sensor i).
  static SensorSet from_decimal_code(std::uint64_t n) {
    SensorSet s;
    s.lo_ = n;
    return s;
  }

  bool test(int id) const {
    check_bit(id);
    return id < 64 ? (lo_ >> id) & 1u : (hi_ >> (id - 64)) & 1u;
  }

  void set(int id) {
    check_bit(id);
    if (id < 64) {
      lo_ |= std::uint64_t{1} << id;
    } else {
      hi_ |= std::uint64_t{1} << (id - 64);
    }
  }

  void reset(int id) {
    check_bit(id);
    if (id < 64) {
      lo_ &= ~(std::uint64_t{1} << id);
    } else {
      hi_ &= ~(std::uint64_t{1} << (id - 64));
    }
  }

  int cardinality() const { return std::popcount(lo_) + std::popcount(hi_); }
  bool empty() const { return lo_ == 0 && hi_ == 0; }

  bool subset_of(const SensorSet& other) const {
    return (lo_ & other.lo_) == lo_ && (hi_ & other.hi_) == hi_;
  }

  friend SensorSet operator|(SensorSet a, const SensorSet& b) {
    a.lo_ |= b.lo_;
    a.hi_ |= b.hi_;
    return a;
  }
  friend SensorSet operator&(SensorSet a, const SensorSet& b) {
    a.lo_ &= b.lo_;
    a.hi_ &= b.hi_;
    return a;
  }
  /// Set difference a \ b.
  friend SensorSet operator-(SensorSet a, const SensorSet& b) {
    a.lo_ &= ~b.lo_;
    a.hi_ &= ~b.hi_;
    return a;
  }

  friend bool operator==(const SensorSet&, const SensorSet&) = default;

  /// Orders by numeric value of the mask (hi word most significant).
  friend std::strong_ordering operator<=>(const SensorSet& a,
                                          const SensorSet& b) {
    if (auto c = a.hi_ <=> b.hi_; c != 0) return c;
    return a.lo_ <=> b.lo_;
  }

  /// Index of the lowest set bit; -1 if empty.
  int lowest_bit() const {
    if (lo_ != 0) return std::countr_zero(lo_);
    if (hi_ != 0) return 64 + std::countr_zero(hi_);
    return -1;
  }

  /// Index of the highest set bit; -1 if empty.
  int highest_bit() const {
    if (hi_ != 0) return 127 - std::countl_zero(hi_);
    if (lo_ != 0) return 63 - std::countl_zero(lo_);
    return -1;
  }

  std::vector<int> ids() const {
    std::vector<int> out;
    out.reserve(cardinality());
    std::uint64_t w = lo_;
    while (w != 0) {
      out.push_back(std::countr_zero(w));
      w &= w - 1;
    }
    w = hi_;
    while (w != 0) {
      out.push_back(64 + std::countr_zero(w));
      w &= w - 1;
    }
    return out;
  }

  /// Decimal code N_S; defined only while all selected ids fit in 64 bits.
  std::optional<std::uint64_t> decimal_code() const {
    if (hi_ != 0) return std::nullopt;
    return lo_;
  }

  std::uint64_t low_word() const { return lo_; }
  std::uint64_t high_word() const { return hi_; }

 private:
  static void check_bit(int id) {
    if (id < 0 || id >= kMaxBits) {
      throw InputError("sensor id " + std::to_string(id) +
                       " outside supported pool width of 128");
    }
  }

  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
};

struct SensorSetHash {
  std::size_t operator()(const SensorSet& s) const {
    std::uint64_t h = s.low_word() * 0x9e3779b97f4a7c15ull;
    h ^= s.high_word() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace iface

#endif  // IFACE_SENSOR_SET_HPP_
