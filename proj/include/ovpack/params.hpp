#pragma once

#include "ovpack/rational.hpp"

namespace ovp {

// The online algorithm's three derived thresholds for a given slack.
//   capacity_margin   — internal per-dimension capacity the fractional
//                       solution respects (1 - epsilon);
//   commit_threshold  — minimum accepted fraction for the integral commit,
//                       sqrt(1 - epsilon) or its rational upper
//                       approximation when irrational;
//   loss_tolerance    — fraction of the newcomer's value its disposal
//                       loss rate may consume, (1 - margin/threshold)/2.
struct AlgorithmParams {
  Rational epsilon;
  Rational commit_threshold;   // alpha
  Rational capacity_margin;    // beta
  Rational loss_tolerance;     // gamma
};

// Builds the parameter set for a slack epsilon in (0, 1). The square root
// is exact when 1 - epsilon is a perfect rational square; otherwise a
// rational r with r^2 >= 1 - epsilon and r within 1e-12 above the true
// root is used, which preserves every inequality the analysis needs.
AlgorithmParams make_params(const Rational& epsilon);

}  // namespace ovp
