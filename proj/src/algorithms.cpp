#include "ovpack/algorithms.hpp"

namespace ovp {

void GreedyAlgorithm::observe(const Item& item) {
  const Rational one(1);
  for (const auto& [dim, w] : item.weights.entries()) {
    auto it = load_.find(dim);
    if (it != load_.end() && it->second + w > one) return;
  }
  for (const auto& [dim, w] : item.weights.entries()) load_[dim] += w;
  kept_.insert(item.id);
  items_.push_back(item);
}

}  // namespace ovp
