#include "revkit/grc_io.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "revkit/errors.hpp"

namespace revkit::grc {

namespace {

struct LineReader {
  std::istream& in;
  int lineno = 0;

  // Returns the next non-empty line with comments stripped.
  std::optional<std::vector<std::string>> next() {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (!tokens.empty()) return tokens;
    }
    return std::nullopt;
  }
};

std::uint32_t parse_state(const std::string& bits, int width, int lineno) {
  if (static_cast<int>(bits.size()) != width)
    throw ParseError(lineno, 0,
                     "state '" + bits + "' does not match width " +
                         std::to_string(width));
  std::uint32_t packed = 0;
  for (char c : bits) {
    if (c != '0' && c != '1')
      throw ParseError(lineno, 0, "state must be a 0/1 string: " + bits);
    packed = (packed << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return packed;
}

int parse_space_header(LineReader& r) {
  auto tokens = r.next();
  if (!tokens || tokens->size() != 2 || (*tokens)[0] != "space")
    throw ParseError(r.lineno, 0, "expected 'space <width>' header");
  try {
    return std::stoi((*tokens)[1]);
  } catch (const std::exception&) {
    throw ParseError(r.lineno, 0, "bad width: " + (*tokens)[1]);
  }
}

}  // namespace

ConditionedOp read_op(std::istream& in) {
  LineReader r{in};
  int width = parse_space_header(r);
  StateSpace space = [&] {
    try {
      return StateSpace(width);
    } catch (const ValidationError& e) {
      throw ParseError(r.lineno, 0, e.what());
    }
  }();

  std::vector<std::int64_t> table(space.size(), -1);
  std::vector<std::uint8_t> pre;
  bool saw_pre = false;

  while (auto tokens = r.next()) {
    const auto& t = *tokens;
    if (t[0] == "map") {
      if (t.size() != 3)
        throw ParseError(r.lineno, 0, "expected 'map <in> <out>'");
      std::uint32_t from = parse_state(t[1], width, r.lineno);
      std::uint32_t to = parse_state(t[2], width, r.lineno);
      if (table[from] >= 0)
        throw ParseError(r.lineno, 0, "duplicate map entry for " + t[1]);
      table[from] = to;
    } else if (t[0] == "pre") {
      if (t.size() != 2) throw ParseError(r.lineno, 0, "expected 'pre <state>'");
      if (!saw_pre) {
        pre.assign(space.size(), 0);
        saw_pre = true;
      }
      pre[parse_state(t[1], width, r.lineno)] = 1;
    } else {
      throw ParseError(r.lineno, 0, "unknown directive: " + t[0]);
    }
  }

  ConditionedOp op{space, std::vector<std::uint32_t>(space.size()),
                   Precondition::full(space)};
  for (std::uint32_t s = 0; s < space.size(); ++s) {
    if (table[s] < 0)
      throw ParseError(r.lineno, 0,
                       "transition table is missing state " +
                           BitState(s, width).str());
    op.table[s] = static_cast<std::uint32_t>(table[s]);
  }
  if (saw_pre) op.pre.allowed = std::move(pre);
  op.validate();
  return op;
}

ConditionedOp read_op_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open op file: " + path);
  return read_op(f);
}

void write_op(std::ostream& out, const ConditionedOp& op) {
  op.validate();
  out << "space " << op.space.width() << "\n";
  int w = op.space.width();
  for (std::uint32_t s = 0; s < op.space.size(); ++s)
    out << "map " << BitState(s, w).str() << ' '
        << BitState(op.table[s], w).str() << "\n";
  if (op.pre.count() != op.space.size())
    for (std::uint32_t s = 0; s < op.space.size(); ++s)
      if (op.pre.admits(s)) out << "pre " << BitState(s, w).str() << "\n";
}

Distribution read_dist(std::istream& in) {
  LineReader r{in};
  int width = parse_space_header(r);
  StateSpace space = [&] {
    try {
      return StateSpace(width);
    } catch (const ValidationError& e) {
      throw ParseError(r.lineno, 0, e.what());
    }
  }();

  std::vector<double> mass(space.size(), 0.0);
  std::vector<std::uint8_t> seen(space.size(), 0);
  while (auto tokens = r.next()) {
    const auto& t = *tokens;
    if (t[0] != "p" || t.size() != 3)
      throw ParseError(r.lineno, 0, "expected 'p <state> <probability>'");
    std::uint32_t s = parse_state(t[1], width, r.lineno);
    if (seen[s]) throw ParseError(r.lineno, 0, "duplicate mass for " + t[1]);
    seen[s] = 1;
    try {
      std::size_t pos;
      mass[s] = std::stod(t[2], &pos);
      if (pos != t[2].size()) throw std::invalid_argument(t[2]);
    } catch (const std::exception&) {
      throw ParseError(r.lineno, 0, "bad probability: " + t[2]);
    }
  }
  try {
    return Distribution(space, std::move(mass));
  } catch (const ValidationError& e) {
    throw ParseError(r.lineno, 0, e.what());
  }
}

Distribution read_dist_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open distribution file: " + path);
  return read_dist(f);
}

void write_dist(std::ostream& out, const Distribution& d) {
  out << "space " << d.space().width() << "\n";
  out.precision(17);
  for (std::uint32_t s = 0; s < d.space().size(); ++s)
    if (d.mass(s) > 0)
      out << "p " << BitState(s, d.space().width()).str() << ' ' << d.mass(s)
          << "\n";
}

}  // namespace revkit::grc
