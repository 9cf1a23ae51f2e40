#include "ovpack/params.hpp"

#include "ovpack/errors.hpp"

namespace ovp {

AlgorithmParams make_params(const Rational& epsilon) {
  const Rational zero(0), one(1);
  if (epsilon <= zero || epsilon >= one) {
    throw ParamError("epsilon must lie strictly between 0 and 1");
  }
  AlgorithmParams p;
  p.epsilon = epsilon;
  p.capacity_margin = one - epsilon;
  p.commit_threshold = sqrt_upper(p.capacity_margin, Rational(1, 1000000000000L));
  p.loss_tolerance = (one - p.capacity_margin / p.commit_threshold) / Rational(2);

  // Guaranteed for every epsilon in (0,1); loss_tolerance < commit_threshold
  // additionally holds whenever epsilon < 8/9 (all shipped experiments).
  if (!(zero < p.loss_tolerance && p.commit_threshold < one &&
        p.capacity_margin < p.commit_threshold &&
        p.commit_threshold * p.commit_threshold >= p.capacity_margin)) {
    throw InternalError("make_params: derived thresholds out of order");
  }
  return p;
}

}  // namespace ovp
