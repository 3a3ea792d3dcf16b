#include <istream>
#include <sstream>

#include "ptss/error.hpp"
#include "ptss/tree.hpp"

namespace ptss {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  TreeNode parse() {
    TreeNode root = tree();
    skip_ws();
    if (pos_ != text_.size()) fail_syntax("end of input");
    return root;
  }

 private:
  TreeNode tree() {
    skip_ws();
    const std::size_t start = pos_;
    if (auto op = try_operator()) {
      expect('(');
      std::vector<TreeNode> children;
      children.push_back(tree());
      skip_ws();
      while (peek() == ',') {
        ++pos_;
        children.push_back(tree());
        skip_ws();
      }
      expect(')');
      if (*op == Operator::Loop && children.size() != 2)
        throw ParseError(ParseError::Kind::Arity, start,
                         "loop at position " + std::to_string(start) + " has " +
                             std::to_string(children.size()) +
                             " children, expected exactly 2");
      return TreeNode::op(*op, std::move(children));
    }
    return leaf();
  }

  std::optional<Operator> try_operator() {
    auto rest = text_.substr(pos_);
    auto take = [&](std::size_t n, Operator op) {
      pos_ += n;
      return std::optional<Operator>(op);
    };
    if (rest.starts_with("->")) return take(2, Operator::Sequence);
    if (rest.starts_with("<-")) return take(2, Operator::ReverseSequence);
    if (rest.starts_with("+")) return take(1, Operator::Parallel);
    if (rest.starts_with("*")) return take(1, Operator::Loop);
    // 'X' is only the choice operator when an opening parenthesis follows;
    // otherwise it lexes as an ordinary identifier.
    if (rest.starts_with("X") && (rest.size() == 1 || !is_ident_char(rest[1]))) {
      std::size_t look = pos_ + 1;
      while (look < text_.size() && is_space(text_[look])) ++look;
      if (look < text_.size() && text_[look] == '(') return take(1, Operator::Choice);
    }
    return std::nullopt;
  }

  TreeNode leaf() {
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_]))
      fail_syntax("operator, activity or 'tau'");
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name == kTauToken) {
      skip_ws();
      if (peek() == '(')
        throw ParseError(ParseError::Kind::ReservedToken, start,
                         "'tau' at position " + std::to_string(start) +
                             " is reserved for the silent leaf and cannot "
                             "take children");
      return TreeNode::tau();
    }
    skip_ws();
    if (peek() == '(')
      throw ParseError(ParseError::Kind::Syntax, pos_,
                       "unknown operator '" + name + "' at position " +
                           std::to_string(start) + "; expected one of -> <- X + *");
    return TreeNode::leaf(std::move(name));
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail_syntax(std::string("'") + c + "'");
    ++pos_;
  }

  [[noreturn]] void fail_syntax(const std::string& expected) const {
    std::string found = pos_ < text_.size()
                            ? "'" + std::string(1, text_[pos_]) + "'"
                            : std::string("end of input");
    throw ParseError(ParseError::Kind::Syntax, pos_,
                     "syntax error at position " + std::to_string(pos_) +
                         ": expected " + expected + ", found " + found);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  }
  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void format_into(const ProcessTree& tree, VertexId v, std::string& out) {
  out += tree.label(v).token();
  auto kids = tree.children(v);
  if (kids.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) out += ',';
    format_into(tree, kids[i], out);
  }
  out += ')';
}

}  // namespace

ProcessTree parse_tree(std::string_view text) {
  return ProcessTree::from_nested(Parser(text).parse());
}

std::string format_tree(const ProcessTree& tree) {
  std::string out;
  format_into(tree, tree.root(), out);
  return out;
}

std::vector<ProcessTree> read_trees(std::istream& in) {
  std::vector<ProcessTree> trees;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      trees.push_back(parse_tree(line));
    } catch (const ParseError& e) {
      throw ParseError(e.kind(), e.position(),
                       "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return trees;
}

}  // namespace ptss
