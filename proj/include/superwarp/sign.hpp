#pragma once

// The one place where graded signs come from. Every sign in the library is
// the sign of a reordering of a string of graded symbols.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

namespace superwarp {

enum class Parity : std::uint8_t { even = 0, odd = 1 };

constexpr Parity operator+(Parity a, Parity b) {
  return static_cast<Parity>(static_cast<int>(a) ^ static_cast<int>(b));
}
constexpr int bit(Parity p) { return static_cast<int>(p); }
constexpr Parity parity_of(int n) { return static_cast<Parity>(n & 1); }
inline std::string to_string(Parity p) { return p == Parity::odd ? "odd" : "even"; }

/// Sign picked up when the symbols with the given parities, listed in their
/// current order, are rearranged so that position k holds the symbol that
/// was at `order[k]`. Only pairs of odd symbols that cross contribute.
int reorder_sign(std::span<const Parity> parities, std::span<const int> order);

/// (-1)^{|a||b|}: moving a past b.
inline int swap_sign(Parity a, Parity b) {
  const Parity ps[2] = {a, b};
  const int order[2] = {1, 0};
  return reorder_sign(ps, order);
}

/// Sign of moving a single symbol of parity `mover` past a block of symbols.
int move_past_sign(Parity mover, std::initializer_list<Parity> block);

}  // namespace superwarp
