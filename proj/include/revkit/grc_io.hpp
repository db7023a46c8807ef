#pragma once

#include <iosfwd>
#include <string>

#include "revkit/grc.hpp"

namespace revkit::grc {

// Line-oriented op files:
//   space 3
//   map 000 000        # input bits -> output bits, most significant first
//   ...                # one map line per state, any order
//   pre 000            # allowed initial states; no pre lines = full space
// '#' starts a comment anywhere on a line.
ConditionedOp read_op(std::istream& in);
ConditionedOp read_op_file(const std::string& path);
void write_op(std::ostream& out, const ConditionedOp& op);

// Distribution files:
//   space 2
//   p 00 0.25          # states omitted carry zero mass
//   p 11 0.75
Distribution read_dist(std::istream& in);
Distribution read_dist_file(const std::string& path);
void write_dist(std::ostream& out, const Distribution& d);

}  // namespace revkit::grc
