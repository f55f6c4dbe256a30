#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

namespace graden {

// Shannon entropy of a count histogram divided by log(alphabet_size), so a
// uniform distribution over the full alphabet gives 1. Empty bins contribute
// nothing (0 log 0 = 0). An all-zero histogram yields 0.
inline double normalized_shannon(std::span<const std::uint64_t> counts,
                                 std::size_t alphabet_size) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0 || alphabet_size < 2) return 0.0;
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  // A single occupied bin gives -1*log(1) = -0.0; report +0.
  return h <= 0.0 ? 0.0 : h / std::log(static_cast<double>(alphabet_size));
}

}  // namespace graden
