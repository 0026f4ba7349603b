#include "perclab/vertex.hpp"

#include <charconv>

#include "perclab/errors.hpp"

namespace perclab {

std::uint64_t VertexRef::hash() const {
  std::uint64_t h = mix64(payload_.size());
  for (std::int64_t x : payload_) h = mix64(h ^ static_cast<std::uint64_t>(x));
  return h;
}

std::string VertexRef::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < payload_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(payload_[i]);
  }
  out += ']';
  return out;
}

VertexRef VertexRef::parse(std::string_view text) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']')
    throw InvalidParameter("malformed vertex encoding: " + std::string(text));
  text = text.substr(1, text.size() - 2);
  Payload payload;
  while (!text.empty()) {
    std::size_t comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw InvalidParameter("malformed vertex component: " + std::string(item));
    payload.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) throw InvalidParameter("trailing comma in vertex encoding");
  }
  return VertexRef(std::move(payload));
}

}  // namespace perclab
