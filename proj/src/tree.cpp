#include "ptss/tree.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "ptss/error.hpp"

namespace ptss {

std::string_view operator_token(Operator op) noexcept {
  switch (op) {
    case Operator::Sequence: return "->";
    case Operator::ReverseSequence: return "<-";
    case Operator::Choice: return "X";
    case Operator::Parallel: return "+";
    case Operator::Loop: return "*";
  }
  return "?";
}

namespace {

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

}  // namespace

bool is_activity_name(std::string_view name) noexcept {
  if (name.empty() || !is_ident_start(name.front())) return false;
  if (!std::all_of(name.begin(), name.end(), is_ident_char)) return false;
  return name != kTauToken;
}

NodeLabel NodeLabel::activity(std::string name) {
  if (!is_activity_name(name))
    throw InvalidTree("invalid activity name '" + name + "'");
  return NodeLabel(Kind::Activity, Operator::Sequence, std::move(name));
}

std::string NodeLabel::token() const {
  switch (kind_) {
    case Kind::Operator: return std::string(operator_token(op_));
    case Kind::Activity: return name_;
    case Kind::Tau: return std::string(kTauToken);
  }
  return {};
}

ProcessTree ProcessTree::from_nested(const TreeNode& root) {
  ProcessTree tree;
  std::deque<std::pair<const TreeNode*, VertexId>> queue{{&root, kNoVertex}};
  while (!queue.empty()) {
    auto [node, parent] = queue.front();
    queue.pop_front();
    auto id = static_cast<VertexId>(tree.labels_.size());
    tree.labels_.push_back(node->label);
    tree.parents_.push_back(parent);
    for (const TreeNode& child : node->children) queue.emplace_back(&child, id);
  }
  tree.index();
  if (auto violations = validate(tree); !violations.empty()) {
    const Violation& first = violations.front();
    throw InvalidTree("vertex " + std::to_string(first.vertex) + ": " +
                      first.message);
  }
  return tree;
}

ProcessTree ProcessTree::from_arrays(std::vector<NodeLabel> labels,
                                     std::vector<VertexId> parents) {
  if (labels.empty()) throw InvalidTree("tree has no vertices");
  if (labels.size() != parents.size())
    throw InvalidTree("label and parent arrays differ in length");
  if (parents[0] != kNoVertex) throw InvalidTree("vertex 0 must be the root");
  for (std::size_t v = 1; v < parents.size(); ++v) {
    if (parents[v] >= v)
      throw InvalidTree("vertex " + std::to_string(v) +
                        ": parent index must be smaller than the child's");
    if (v > 1 && parents[v] < parents[v - 1])
      throw InvalidTree("vertex " + std::to_string(v) +
                        ": indexing is not breadth-first");
  }
  ProcessTree tree;
  tree.labels_ = std::move(labels);
  tree.parents_ = std::move(parents);
  tree.index();
  return tree;
}

void ProcessTree::index() {
  const std::size_t n = labels_.size();
  children_.assign(n, {});
  position_.assign(n, 0);
  desc_.assign(n, {});
  for (VertexId v = 1; v < n; ++v) {
    position_[v] = children_[parents_[v]].size();
    children_[parents_[v]].push_back(v);
  }
  // Children carry larger indices, so a reverse sweep sees them first.
  for (VertexId v = static_cast<VertexId>(n); v-- > 0;) {
    auto& d = desc_[v];
    for (VertexId c : children_[v]) {
      d.push_back(c);
      d.insert(d.end(), desc_[c].begin(), desc_[c].end());
    }
    std::sort(d.begin(), d.end());
  }
}

std::span<const VertexId> ProcessTree::lsib(VertexId v) const {
  VertexId p = parents_.at(v);
  if (p == kNoVertex) return {};
  return std::span<const VertexId>(children_[p]).first(position_[v]);
}

std::span<const VertexId> ProcessTree::rsib(VertexId v) const {
  VertexId p = parents_.at(v);
  if (p == kNoVertex) return {};
  return std::span<const VertexId>(children_[p]).subspan(position_[v] + 1);
}

std::vector<VertexId> ProcessTree::sib(VertexId v) const {
  auto l = lsib(v);
  auto r = rsib(v);
  std::vector<VertexId> out(l.begin(), l.end());
  out.insert(out.end(), r.begin(), r.end());
  return out;
}

TreeNode ProcessTree::to_nested(VertexId v) const {
  TreeNode node{labels_.at(v), {}};
  node.children.reserve(children_[v].size());
  for (VertexId c : children_[v]) node.children.push_back(to_nested(c));
  return node;
}

ProcessTree ProcessTree::subtree(VertexId v) const {
  // Re-indexing the nested form keeps breadth-first order within the subtree.
  ProcessTree tree;
  std::deque<std::pair<VertexId, VertexId>> queue{{v, kNoVertex}};
  while (!queue.empty()) {
    auto [old_id, parent] = queue.front();
    queue.pop_front();
    auto id = static_cast<VertexId>(tree.labels_.size());
    tree.labels_.push_back(labels_[old_id]);
    tree.parents_.push_back(parent);
    for (VertexId c : children_[old_id]) queue.emplace_back(c, id);
  }
  tree.index();
  return tree;
}

std::vector<std::string> ProcessTree::alphabet() const {
  std::set<std::string> names;
  for (const auto& l : labels_)
    if (l.is_activity()) names.insert(l.name());
  return {names.begin(), names.end()};
}

std::size_t ProcessTree::activity_count() const {
  return static_cast<std::size_t>(std::count_if(
      labels_.begin(), labels_.end(), [](const NodeLabel& l) { return l.is_activity(); }));
}

std::vector<Violation> validate(const ProcessTree& tree) {
  std::vector<Violation> out;
  for (VertexId v = 0; v < tree.size(); ++v) {
    const NodeLabel& l = tree.label(v);
    const std::size_t k = tree.children(v).size();
    if (l.is_operator()) {
      if (k == 0)
        out.push_back({v, "operator '" + l.token() + "' has no children"});
      else if (l.op() == Operator::Loop && k != 2)
        out.push_back({v, "loop has " + std::to_string(k) +
                              " children, expected exactly 2"});
    } else {
      if (k != 0)
        out.push_back({v, "leaf label '" + l.token() + "' on a vertex with " +
                              std::to_string(k) + " children"});
      if (l.is_activity() && !is_activity_name(l.name()))
        out.push_back({v, "invalid activity name '" + l.name() + "'"});
    }
  }
  return out;
}

ProcessTree invert(const ProcessTree& tree) {
  std::vector<NodeLabel> labels;
  std::vector<VertexId> parents;
  labels.reserve(tree.size());
  parents.reserve(tree.size());
  for (VertexId v = 0; v < tree.size(); ++v) {
    const NodeLabel& l = tree.label(v);
    if (l.is_operator(Operator::Sequence))
      labels.push_back(NodeLabel::of(Operator::ReverseSequence));
    else if (l.is_operator(Operator::ReverseSequence))
      labels.push_back(NodeLabel::of(Operator::Sequence));
    else
      labels.push_back(l);
    parents.push_back(tree.parent_or_none(v));
  }
  return ProcessTree::from_arrays(std::move(labels), std::move(parents));
}

}  // namespace ptss
