#pragma once

#include <iosfwd>
#include <string>

#include "ovpack/generators.hpp"

namespace ovp {

// Line-delimited JSON instance files: one header object, then one object
// per item in arrival order. Exact rationals travel as [num, den] integer
// pairs.
//
//   {"schema":"ovpack-instance-v1","dims":2,"objective":{"type":"modular"},...}
//   {"id":0,"coords":[[0,1,4]],"value":[1,1]}
//   {"id":1,"coords":[[0,1,4]],"value":[10,1]}
//
// Optional header keys: "objective.element_weights" (coverage), "witness"
// {"ids":[...],"value":[num,den]}, "meta" {"generator","params","seed"}.
Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);

void write_instance(const Instance& instance, std::ostream& out);
void write_instance_file(const Instance& instance, const std::string& path);

// Multiplies every weight by an exact factor in (0, 1]; the bi-criteria
// reading of the slack guarantee. Witness and objective are unchanged.
Instance rescale_instance(const Instance& instance, const Rational& factor);

}  // namespace ovp
