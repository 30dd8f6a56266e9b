#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace reachlab {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values
};

// Generalized advantage estimation over one trajectory segment.
// values carries one bootstrap entry more than rewards; terminals marks steps
// that ended an episode (no bootstrap across them).
GaeResult compute_advantages(std::span<const double> rewards, std::span<const double> values,
                             std::span<const std::uint8_t> terminals, double gamma, double lambda);

}  // namespace reachlab
