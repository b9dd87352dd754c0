#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "clq/error.hpp"
#include "clq/field_tower.hpp"

namespace clq {

/// True for the prime powers the construction is defined for.
inline bool is_admissible_q(std::uint32_t q) { return q % 12 == 5 || q % 12 == 9; }

inline void require_admissible(const FieldTower& tower) {
  if (!is_admissible_q(tower.q()))
    throw Error(ErrorCode::InvalidQ, "q=" + std::to_string(tower.q()) + " is not 5 or 9 mod 12");
}

/// S = {a in E* : N(a) = 1, T(a^2) = 0}, ordered by discrete log.
struct SpecialSet {
  std::vector<Element> elements;

  std::size_t size() const { return elements.size(); }
  const Element& operator[](std::size_t i) const { return elements[i]; }
  /// Position of a in S, or size() when absent.
  std::size_t position(Element a) const {
    const auto it = std::find(elements.begin(), elements.end(), a);
    return static_cast<std::size_t>(it - elements.begin());
  }
};

/// Walks the norm-one subgroup <mu>; logs are multiples of q-1, so the list
/// comes out sorted by log without an extra sort.
inline SpecialSet build_special_set(const FieldTower& tower) {
  require_admissible(tower);
  SpecialSet s;
  const std::uint32_t step = tower.q() - 1;
  for (std::uint32_t k = 0; k < tower.order(); k += step) {
    const Element a = tower.exp(k);
    if (tower.trace(tower.square(a)).is_zero()) s.elements.push_back(a);
  }
  if (s.size() != tower.q() + 1)
    throw Error(ErrorCode::SizeMismatch,
                "special set has " + std::to_string(s.size()) + " elements, expected " + std::to_string(tower.q() + 1));
  return s;
}

}  // namespace clq
