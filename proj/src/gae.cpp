#include "reachlab/gae.hpp"

#include <stdexcept>

namespace reachlab {

GaeResult compute_advantages(std::span<const double> rewards, std::span<const double> values,
                             std::span<const std::uint8_t> terminals, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n + 1) throw std::invalid_argument("gae: values must have one bootstrap entry more than rewards");
  if (terminals.size() != n) throw std::invalid_argument("gae: terminals length mismatch");

  GaeResult out;
  out.advantages.resize(n);
  out.returns.resize(n);
  double adv = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double nonterminal = terminals[i] ? 0.0 : 1.0;
    const double delta = rewards[i] + gamma * nonterminal * values[i + 1] - values[i];
    adv = delta + gamma * lambda * nonterminal * adv;
    out.advantages[i] = adv;
    out.returns[i] = adv + values[i];
  }
  return out;
}

}  // namespace reachlab
