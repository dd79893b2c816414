#pragma once

#include <compare>
#include <cstdint>
#include <optional>

namespace submatch {

enum class Side : std::uint8_t { Left = 0, Right = 1 };

// A vertex is (side, index) packed as index << 1 | side.
class Vertex {
 public:
  constexpr Vertex() = default;

  static constexpr Vertex left(std::uint32_t index) { return Vertex(index << 1); }
  static constexpr Vertex right(std::uint32_t index) { return Vertex((index << 1) | 1u); }
  static constexpr Vertex of(Side side, std::uint32_t index) {
    return side == Side::Left ? left(index) : right(index);
  }
  static constexpr Vertex from_code(std::uint32_t code) { return Vertex(code); }

  constexpr std::uint32_t code() const { return code_; }
  constexpr std::uint32_t index() const { return code_ >> 1; }
  constexpr Side side() const { return (code_ & 1u) ? Side::Right : Side::Left; }
  constexpr bool is_left() const { return (code_ & 1u) == 0; }
  constexpr bool is_right() const { return (code_ & 1u) != 0; }

  friend constexpr auto operator<=>(Vertex, Vertex) = default;

 private:
  constexpr explicit Vertex(std::uint32_t code) : code_(code) {}
  std::uint32_t code_ = 0;
};

using Mate = std::optional<Vertex>;

}  // namespace submatch
