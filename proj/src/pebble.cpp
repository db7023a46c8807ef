#include "revkit/pebble.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <queue>

#include "revkit/errors.hpp"

namespace revkit::bennett {

PebbleReplay replay_pebble_moves(int chain_length,
                                 std::span<const PebbleMove> moves) {
  PebbleReplay r;
  if (chain_length < 1) return r;
  std::vector<char> pebbled(static_cast<std::size_t>(chain_length) + 1, 0);
  int count = 0;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const PebbleMove& m = moves[i];
    if (m.segment < 1 || m.segment > chain_length ||
        (m.segment > 1 && !pebbled[static_cast<std::size_t>(m.segment) - 1]) ||
        pebbled[static_cast<std::size_t>(m.segment)] == (m.place ? 1 : 0)) {
      r.bad_move = static_cast<int>(i);
      return r;
    }
    pebbled[static_cast<std::size_t>(m.segment)] = m.place ? 1 : 0;
    count += m.place ? 1 : -1;
    r.max_pebbles = std::max(r.max_pebbles, count);
  }
  r.legal = true;
  r.step_count = static_cast<int>(moves.size());
  r.reaches_goal = pebbled[static_cast<std::size_t>(chain_length)] != 0;
  return r;
}

std::optional<PebbleStrategy> pebble_exhaustive(int chain_length, int max_pebbles) {
  if (chain_length < 1 || chain_length > 12)
    throw ValidationError("exhaustive pebbling handles chains of 1..12 segments");
  if (max_pebbles < 1) return std::nullopt;

  using Config = std::uint32_t;  // bit i-1 = pebble on segment i
  Config goal_mask = Config{1} << (chain_length - 1);
  std::map<Config, std::pair<Config, int>> parent;  // config -> (prev, segment toggled)
  std::queue<Config> frontier;
  parent[0] = {0, 0};
  frontier.push(0);
  std::optional<Config> goal;

  while (!frontier.empty() && !goal) {
    Config c = frontier.front();
    frontier.pop();
    for (int seg = 1; seg <= chain_length; ++seg) {
      if (seg > 1 && !(c & (Config{1} << (seg - 2)))) continue;
      Config next = c ^ (Config{1} << (seg - 1));
      if (std::popcount(next) > max_pebbles) continue;
      if (parent.count(next)) continue;
      parent[next] = {c, seg};
      if (next & goal_mask) {
        goal = next;
        break;
      }
      frontier.push(next);
    }
  }
  if (!goal) return std::nullopt;

  std::vector<PebbleMove> rev;
  for (Config c = *goal; c != 0 || parent[c].second != 0;) {
    auto [prev, seg] = parent[c];
    rev.push_back({(c & (Config{1} << (seg - 1))) != 0, seg});
    c = prev;
    if (c == 0 && parent[c].second == 0) break;
  }
  std::reverse(rev.begin(), rev.end());

  PebbleStrategy s;
  s.chain_length = chain_length;
  s.moves = std::move(rev);
  auto replay = replay_pebble_moves(chain_length, s.moves);
  s.max_pebbles = replay.max_pebbles;
  s.step_count = replay.step_count;
  return s;
}

namespace {

// Emits the moves that, run forward, pebble segment base+len given a pebble
// on base (base 0 is the chain input, always available). Interior
// checkpoints are unwound before returning, so the net effect is one new
// pebble. With place=false the exact mirror runs, removing that pebble.
void recurse(int base, int len, int k, bool place, std::vector<PebbleMove>& out) {
  if (len <= 0) return;
  if (len == 1) {
    out.push_back({place, base + 1});
    return;
  }
  // Split into k nearly equal parts; leftovers go to the earliest parts.
  std::vector<int> part(static_cast<std::size_t>(k), len / k);
  for (int i = 0; i < len % k; ++i) ++part[static_cast<std::size_t>(i)];
  std::vector<int> cut{base};
  for (int i = 0; i < k; ++i)
    if (part[static_cast<std::size_t>(i)] > 0)
      cut.push_back(cut.back() + part[static_cast<std::size_t>(i)]);
  int parts = static_cast<int>(cut.size()) - 1;

  if (place) {
    for (int j = 1; j <= parts; ++j)
      recurse(cut[static_cast<std::size_t>(j - 1)],
              cut[static_cast<std::size_t>(j)] - cut[static_cast<std::size_t>(j - 1)], k,
              true, out);
    for (int j = parts - 1; j >= 1; --j)
      recurse(cut[static_cast<std::size_t>(j - 1)],
              cut[static_cast<std::size_t>(j)] - cut[static_cast<std::size_t>(j - 1)], k,
              false, out);
  } else {
    // Mirror image of the place sequence.
    for (int j = 1; j <= parts - 1; ++j)
      recurse(cut[static_cast<std::size_t>(j - 1)],
              cut[static_cast<std::size_t>(j)] - cut[static_cast<std::size_t>(j - 1)], k,
              true, out);
    for (int j = parts; j >= 1; --j)
      recurse(cut[static_cast<std::size_t>(j - 1)],
              cut[static_cast<std::size_t>(j)] - cut[static_cast<std::size_t>(j - 1)], k,
              false, out);
  }
}

}  // namespace

PebbleStrategy pebble_bennett_recursive(int chain_length, int k) {
  if (chain_length < 1) throw ValidationError("chain length must be >= 1");
  if (k < 2) throw ValidationError("arity k must be >= 2");
  PebbleStrategy s;
  s.chain_length = chain_length;
  recurse(0, chain_length, k, true, s.moves);
  auto replay = replay_pebble_moves(chain_length, s.moves);
  if (!replay.legal || !replay.reaches_goal)
    throw std::logic_error("recursive pebbling produced an illegal strategy");
  s.max_pebbles = replay.max_pebbles;
  s.step_count = replay.step_count;
  return s;
}

}  // namespace revkit::bennett
