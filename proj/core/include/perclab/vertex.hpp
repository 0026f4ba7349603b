#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>

#include <boost/container/small_vector.hpp>

namespace perclab {

using Payload = boost::container::small_vector<std::int64_t, 6>;

// Canonical, family-specific encoding of a vertex: lattice coordinates,
// tree-path digits, or a length-prefixed list of base vertices for covers.
// Equal payloads <=> equal vertices; ordering is lexicographic.
class VertexRef {
 public:
  VertexRef() = default;
  explicit VertexRef(Payload payload) : payload_(std::move(payload)) {}
  VertexRef(std::initializer_list<std::int64_t> values) : payload_(values) {}

  const Payload& payload() const { return payload_; }
  Payload& payload() { return payload_; }
  std::size_t size() const { return payload_.size(); }
  bool empty() const { return payload_.empty(); }
  std::int64_t operator[](std::size_t i) const { return payload_[i]; }

  VertexRef with_appended(std::int64_t value) const {
    VertexRef out = *this;
    out.payload_.push_back(value);
    return out;
  }

  VertexRef truncated(std::size_t length) const {
    return VertexRef(Payload(payload_.begin(), payload_.begin() + length));
  }

  std::uint64_t hash() const;

  // Text form "[a,b,c]" (no whitespace). The empty payload prints as "[]".
  std::string to_string() const;
  static VertexRef parse(std::string_view text);

  friend bool operator==(const VertexRef& a, const VertexRef& b) {
    return a.payload_ == b.payload_;
  }
  friend std::strong_ordering operator<=>(const VertexRef& a, const VertexRef& b) {
    return std::lexicographical_compare_three_way(a.payload_.begin(), a.payload_.end(),
                                                  b.payload_.begin(), b.payload_.end());
  }

 private:
  Payload payload_;
};

// Unordered edge with endpoints stored in lexicographic order.
struct EdgeKey {
  VertexRef lo;
  VertexRef hi;

  static EdgeKey of(const VertexRef& a, const VertexRef& b) {
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
  }

  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

// 64-bit finalizer (splitmix64 / Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace perclab

template <>
struct std::hash<perclab::VertexRef> {
  std::size_t operator()(const perclab::VertexRef& v) const noexcept { return v.hash(); }
};
