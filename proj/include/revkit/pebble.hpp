#pragma once

#include <optional>
#include <span>
#include <vector>

namespace revkit::bennett {

// Checkpointing discipline over a straight-line computation cut into n
// segments. A pebble on segment i means its result is held in memory.
// Segment i may gain or lose its pebble only while segment i-1 holds one;
// segment 1 is always eligible. The goal is a pebble on segment n.

struct PebbleMove {
  bool place;  // false = remove
  int segment;  // 1-based
};

struct PebbleStrategy {
  int chain_length = 0;
  std::vector<PebbleMove> moves;
  int max_pebbles = 0;
  int step_count = 0;
};

struct PebbleReplay {
  bool legal = false;
  bool reaches_goal = false;  // final configuration pebbles segment n
  int max_pebbles = 0;
  int step_count = 0;
  int bad_move = -1;  // index of the first illegal move, or -1
};

// Replays a move list against the rules; never throws on illegal input.
PebbleReplay replay_pebble_moves(int chain_length, std::span<const PebbleMove> moves);

// Breadth-first search over configurations with at most max_pebbles pebbles.
// Returns a minimum-length move sequence, or nullopt when the budget is
// infeasible. Exponential in n; refuses n > 12.
std::optional<PebbleStrategy> pebble_exhaustive(int chain_length, int max_pebbles);

// k-ary checkpointing: advance k sub-chains, then unwind the interior
// checkpoints in reverse. Uses O(k log_k n) pebbles and O(n^(1+eps)) moves,
// trading a polynomial step blow-up for logarithmic memory.
PebbleStrategy pebble_bennett_recursive(int chain_length, int k);

}  // namespace revkit::bennett
