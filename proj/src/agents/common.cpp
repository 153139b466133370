#include "scjitai/agents/common.hpp"

#include "scjitai/errors.hpp"

namespace scjitai::agents {

int argmax(std::span<const double> values) {
  if (values.empty()) throw ShapeError("argmax of an empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return static_cast<int>(best);
}

int sample_categorical(RngState& rng, std::span<const double> probs) {
  if (probs.empty()) throw ShapeError("categorical over zero outcomes");
  const double u = rng.uniform01();
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return static_cast<int>(i);
  }
  // Rounding left u above the total mass; fall back to the last nonzero entry.
  for (std::size_t i = probs.size(); i-- > 0;)
    if (probs[i] > 0.0) return static_cast<int>(i);
  return static_cast<int>(probs.size() - 1);
}

}  // namespace scjitai::agents
