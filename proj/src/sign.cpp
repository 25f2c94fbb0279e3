#include "superwarp/sign.hpp"

#include <stdexcept>
#include <vector>

namespace superwarp {

int reorder_sign(std::span<const Parity> parities, std::span<const int> order) {
  if (parities.size() != order.size())
    throw std::invalid_argument("reorder_sign: size mismatch");
  // Count inversions among odd symbols in the new arrangement.
  int crossings = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (parities[order[i]] != Parity::odd) continue;
    for (std::size_t j = i + 1; j < order.size(); ++j)
      if (parities[order[j]] == Parity::odd && order[j] < order[i]) ++crossings;
  }
  return crossings % 2 ? -1 : 1;
}

int move_past_sign(Parity mover, std::initializer_list<Parity> block) {
  std::vector<Parity> ps{mover};
  ps.insert(ps.end(), block.begin(), block.end());
  std::vector<int> order;
  for (std::size_t k = 1; k < ps.size(); ++k) order.push_back(static_cast<int>(k));
  order.push_back(0);
  return reorder_sign(ps, order);
}

}  // namespace superwarp
