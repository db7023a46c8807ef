#include "revkit/dag.hpp"

#include <cctype>
#include <map>
#include <set>

#include "revkit/errors.hpp"

namespace revkit::bennett {

const std::string& GateDAG::name_of(int flat_index) const {
  if (flat_index < num_inputs()) return inputs[static_cast<std::size_t>(flat_index)];
  return nodes[static_cast<std::size_t>(flat_index - num_inputs())].id;
}

namespace {

struct Token {
  std::string text;
  int line;
  int col;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(text[i++]);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(c);
      ++i;
      continue;
    }
    if (c == ';' || c == '=') {
      out.push_back({std::string(1, c), line, col});
      advance(c);
      ++i;
      continue;
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      int start_col = col;
      std::string word;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        word += text[i];
        advance(text[i]);
        ++i;
      }
      out.push_back({word, line, start_col});
      continue;
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }
  return out;
}

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

GateDAG parse_dag(const std::string& text) {
  auto tokens = tokenize(text);

  // Statements are token runs split on ';'.
  std::vector<std::vector<Token>> stmts;
  std::vector<Token> cur;
  for (auto& t : tokens) {
    if (t.text == ";") {
      if (!cur.empty()) stmts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(t);
    }
  }
  if (!cur.empty())
    throw ParseError(cur.front().line, cur.front().col,
                     "statement is missing its terminating ';'");

  GateDAG dag;
  std::map<std::string, int> index;  // name -> flat index
  std::set<std::string> defined_anywhere;
  std::vector<std::string> out_names;
  std::vector<Token> out_tokens;

  // First pass over definitions so use-before-definition can be told apart
  // from a genuinely unknown name.
  for (auto& st : stmts) {
    if (st.size() >= 2 && st[1].text == "=") defined_anywhere.insert(st[0].text);
    if (st[0].text == "in")
      for (std::size_t i = 1; i < st.size(); ++i) defined_anywhere.insert(st[i].text);
  }

  bool saw_out = false;
  for (auto& st : stmts) {
    const Token& head = st[0];
    if (head.text == "in") {
      if (st.size() < 2)
        throw ParseError(head.line, head.col, "'in' needs at least one name");
      for (std::size_t i = 1; i < st.size(); ++i) {
        const Token& t = st[i];
        if (!valid_identifier(t.text))
          throw ParseError(t.line, t.col, "bad identifier: " + t.text);
        if (index.count(t.text))
          throw ParseError(t.line, t.col, "duplicate name: " + t.text);
        index[t.text] = static_cast<int>(dag.inputs.size());
        dag.inputs.push_back(t.text);
      }
      continue;
    }
    if (head.text == "out") {
      if (st.size() < 2)
        throw ParseError(head.line, head.col, "'out' needs at least one name");
      saw_out = true;
      for (std::size_t i = 1; i < st.size(); ++i) {
        out_names.push_back(st[i].text);
        out_tokens.push_back(st[i]);
      }
      continue;
    }

    // Definition: id = OP operand...
    if (st.size() < 2 || st[1].text != "=")
      throw ParseError(head.line, head.col,
                       "expected 'in', 'out', or '<id> = OP ...'");
    if (!valid_identifier(head.text))
      throw ParseError(head.line, head.col, "bad identifier: " + head.text);
    if (index.count(head.text))
      throw ParseError(head.line, head.col, "duplicate name: " + head.text);
    if (st.size() < 3)
      throw ParseError(head.line, head.col, "definition is missing its operator");

    const Token& op_tok = st[2];
    NodeOp op;
    std::size_t want_args;
    if (op_tok.text == "AND") {
      op = NodeOp::And;
      want_args = 2;
    } else if (op_tok.text == "OR") {
      op = NodeOp::Or;
      want_args = 2;
    } else if (op_tok.text == "NOT") {
      op = NodeOp::Not;
      want_args = 1;
    } else {
      throw ParseError(op_tok.line, op_tok.col,
                       "unknown operator: " + op_tok.text);
    }
    if (st.size() - 3 != want_args)
      throw ParseError(op_tok.line, op_tok.col,
                       op_tok.text + " takes " + std::to_string(want_args) +
                           " operand(s), got " + std::to_string(st.size() - 3));

    DagNode node;
    node.id = head.text;
    node.op = op;
    node.line = head.line;
    for (std::size_t i = 3; i < st.size(); ++i) {
      const Token& t = st[i];
      auto it = index.find(t.text);
      if (it == index.end()) {
        if (t.text == head.text || defined_anywhere.count(t.text))
          throw ParseError(t.line, t.col,
                           "cycle: '" + t.text + "' used before its definition");
        throw ParseError(t.line, t.col, "unknown operand: " + t.text);
      }
      node.args.push_back(it->second);
    }
    index[node.id] = dag.num_inputs() + dag.num_gates();
    dag.nodes.push_back(std::move(node));
  }

  if (dag.inputs.empty())
    throw ParseError(1, 0, "netlist declares no inputs");
  if (!saw_out) throw ParseError(1, 0, "netlist declares no outputs");
  for (std::size_t i = 0; i < out_names.size(); ++i) {
    auto it = index.find(out_names[i]);
    if (it == index.end())
      throw ParseError(out_tokens[i].line, out_tokens[i].col,
                       "unknown output: " + out_names[i]);
    dag.outputs.push_back(it->second);
  }
  if (dag.num_inputs() > 24)
    throw ParseError(1, 0, "more than 24 primary inputs");
  return dag;
}

std::uint32_t evaluate_dag(const GateDAG& dag, std::uint32_t input_bits) {
  int n_in = dag.num_inputs();
  std::vector<int> value(static_cast<std::size_t>(n_in + dag.num_gates()));
  for (int i = 0; i < n_in; ++i)
    value[static_cast<std::size_t>(i)] =
        static_cast<int>((input_bits >> (n_in - 1 - i)) & 1u);
  for (std::size_t g = 0; g < dag.nodes.size(); ++g) {
    const DagNode& node = dag.nodes[g];
    int v = 0;
    switch (node.op) {
      case NodeOp::And:
        v = value[static_cast<std::size_t>(node.args[0])] &
            value[static_cast<std::size_t>(node.args[1])];
        break;
      case NodeOp::Or:
        v = value[static_cast<std::size_t>(node.args[0])] |
            value[static_cast<std::size_t>(node.args[1])];
        break;
      case NodeOp::Not:
        v = 1 - value[static_cast<std::size_t>(node.args[0])];
        break;
    }
    value[static_cast<std::size_t>(n_in) + g] = v;
  }
  std::uint32_t out = 0;
  for (int idx : dag.outputs)
    out = (out << 1) | static_cast<std::uint32_t>(value[static_cast<std::size_t>(idx)]);
  return out;
}

}  // namespace revkit::bennett
