#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace moddec {

using EdgeId = std::uint32_t;
using CheckId = std::uint32_t;

/// Fixed-length bit-vector over dense ids. The tag keeps edge sets and check
/// sets from being mixed up at compile time.
template <class Tag>
class IndexSet {
 public:
  using Bits = boost::dynamic_bitset<std::uint64_t>;

  IndexSet() = default;
  explicit IndexSet(std::size_t size) : bits_(size) {}
  IndexSet(std::size_t size, std::initializer_list<std::size_t> ids) : bits_(size) {
    for (auto id : ids) set(id);
  }

  template <class Container>
  static IndexSet from_ids(std::size_t size, const Container& ids) {
    IndexSet s(size);
    for (auto id : ids) s.set(static_cast<std::size_t>(id));
    return s;
  }

  static IndexSet all(std::size_t size) {
    IndexSet s(size);
    s.bits_.set();
    return s;
  }

  std::size_t size() const { return bits_.size(); }
  std::size_t count() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool any() const { return bits_.any(); }

  bool test(std::size_t i) const {
    check_index(i);
    return bits_.test(i);
  }
  void set(std::size_t i) {
    check_index(i);
    bits_.set(i);
  }
  void reset(std::size_t i) {
    check_index(i);
    bits_.reset(i);
  }
  void flip(std::size_t i) {
    check_index(i);
    bits_.flip(i);
  }
  void clear() { bits_.reset(); }

  IndexSet& operator^=(const IndexSet& o) {
    require_same_size(o);
    bits_ ^= o.bits_;
    return *this;
  }
  IndexSet& operator&=(const IndexSet& o) {
    require_same_size(o);
    bits_ &= o.bits_;
    return *this;
  }
  IndexSet& operator|=(const IndexSet& o) {
    require_same_size(o);
    bits_ |= o.bits_;
    return *this;
  }
  /// Set difference.
  IndexSet& operator-=(const IndexSet& o) {
    require_same_size(o);
    bits_ -= o.bits_;
    return *this;
  }

  friend IndexSet operator^(IndexSet a, const IndexSet& b) { return a ^= b; }
  friend IndexSet operator&(IndexSet a, const IndexSet& b) { return a &= b; }
  friend IndexSet operator|(IndexSet a, const IndexSet& b) { return a |= b; }
  friend IndexSet operator-(IndexSet a, const IndexSet& b) { return a -= b; }
  friend bool operator==(const IndexSet& a, const IndexSet& b) { return a.bits_ == b.bits_; }

  bool intersects(const IndexSet& o) const {
    require_same_size(o);
    return bits_.intersects(o.bits_);
  }
  bool is_subset_of(const IndexSet& o) const {
    require_same_size(o);
    return bits_.is_subset_of(o.bits_);
  }
  /// Parity of |this ∩ o|.
  bool overlap_parity(const IndexSet& o) const {
    require_same_size(o);
    return ((bits_ & o.bits_).count() & 1U) != 0;
  }

  template <class F>
  void for_each(F&& f) const {
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) f(static_cast<std::uint32_t>(i));
  }

  std::vector<std::uint32_t> ids() const {
    std::vector<std::uint32_t> out;
    out.reserve(count());
    for_each([&](std::uint32_t i) { out.push_back(i); });
    return out;
  }

  const Bits& bits() const { return bits_; }

 private:
  void check_index(std::size_t i) const {
    if (i >= bits_.size()) throw std::out_of_range("index set: id out of range");
  }
  void require_same_size(const IndexSet& o) const {
    if (bits_.size() != o.bits_.size()) throw std::invalid_argument("index set: size mismatch");
  }

  Bits bits_;
};

struct EdgeTag {};
struct CheckTag {};

using EdgeSet = IndexSet<EdgeTag>;
using CheckSet = IndexSet<CheckTag>;

}  // namespace moddec
