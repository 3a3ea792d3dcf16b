#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ptss {

enum class Operator : std::uint8_t {
  Sequence,         // ->
  ReverseSequence,  // <-
  Choice,           // X
  Parallel,         // +
  Loop,             // *  (do-child, redo-child)
};

/// Short-hand token used by the text grammar.
std::string_view operator_token(Operator op) noexcept;

/// Reserved spelling of the silent leaf.
inline constexpr std::string_view kTauToken = "tau";

/// True if `name` is a legal activity label: [A-Za-z_][A-Za-z0-9_]* and not "tau".
bool is_activity_name(std::string_view name) noexcept;

class NodeLabel {
 public:
  enum class Kind : std::uint8_t { Operator, Activity, Tau };

  static NodeLabel of(Operator op) { return NodeLabel(Kind::Operator, op, {}); }
  /// Throws InvalidTree unless is_activity_name(name).
  static NodeLabel activity(std::string name);
  static NodeLabel tau() { return NodeLabel(Kind::Tau, Operator::Sequence, {}); }

  Kind kind() const noexcept { return kind_; }
  bool is_operator() const noexcept { return kind_ == Kind::Operator; }
  bool is_activity() const noexcept { return kind_ == Kind::Activity; }
  bool is_tau() const noexcept { return kind_ == Kind::Tau; }
  bool is_operator(Operator op) const noexcept {
    return kind_ == Kind::Operator && op_ == op;
  }

  /// Only meaningful when is_operator().
  Operator op() const noexcept { return op_; }
  /// Only meaningful when is_activity().
  const std::string& name() const noexcept { return name_; }

  /// Grammar token: operator symbol, activity name or "tau".
  std::string token() const;

  friend bool operator==(const NodeLabel& a, const NodeLabel& b) noexcept {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case Kind::Operator: return a.op_ == b.op_;
      case Kind::Activity: return a.name_ == b.name_;
      case Kind::Tau: return true;
    }
    return false;
  }

 private:
  NodeLabel(Kind kind, Operator op, std::string name)
      : kind_(kind), op_(op), name_(std::move(name)) {}

  Kind kind_;
  Operator op_;
  std::string name_;
};

/// Dense breadth-first vertex index; the root is 0.
using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

/// Nested form used to build trees (parser, generator, tests).
struct TreeNode {
  NodeLabel label;
  std::vector<TreeNode> children;

  static TreeNode leaf(std::string activity) {
    return {NodeLabel::activity(std::move(activity)), {}};
  }
  static TreeNode tau() { return {NodeLabel::tau(), {}}; }
  static TreeNode op(Operator o, std::vector<TreeNode> children) {
    return {NodeLabel::of(o), std::move(children)};
  }
};

struct Violation {
  VertexId vertex;
  std::string message;
};

/// Immutable rooted, labeled, ordered tree with breadth-first indexing.
///
/// Siblings are numbered left to right and every parent index is smaller
/// than its children's, so lsib/rsib are contiguous slices of the parent's
/// child list. Descendant lists are kept in ascending index order.
class ProcessTree {
 public:
  /// Indexes `root` breadth-first and validates it; throws InvalidTree.
  static ProcessTree from_nested(const TreeNode& root);

  /// Builds from raw arrays without checking the process-tree invariants
  /// (use validate() for that). The arrays must describe a breadth-first
  /// indexed rooted tree: parents[0] == kNoVertex, parents[v] < v and
  /// parents non-decreasing for v >= 1. Throws InvalidTree otherwise.
  static ProcessTree from_arrays(std::vector<NodeLabel> labels,
                                 std::vector<VertexId> parents);

  std::size_t size() const noexcept { return labels_.size(); }
  VertexId root() const noexcept { return 0; }

  const NodeLabel& label(VertexId v) const { return labels_.at(v); }
  bool is_leaf(VertexId v) const { return children_.at(v).empty(); }

  std::optional<VertexId> parent(VertexId v) const {
    VertexId p = parents_.at(v);
    if (p == kNoVertex) return std::nullopt;
    return p;
  }
  /// kNoVertex for the root.
  VertexId parent_or_none(VertexId v) const { return parents_[v]; }

  std::span<const VertexId> children(VertexId v) const { return children_.at(v); }
  /// Position of v among its siblings (0 for the root).
  std::size_t position(VertexId v) const { return position_.at(v); }

  std::span<const VertexId> lsib(VertexId v) const;
  std::span<const VertexId> rsib(VertexId v) const;
  std::vector<VertexId> sib(VertexId v) const;
  std::span<const VertexId> desc(VertexId v) const { return desc_.at(v); }

  /// T restricted to v and its descendants, re-indexed with v as root.
  ProcessTree subtree(VertexId v) const;

  TreeNode to_nested(VertexId v = 0) const;

  /// Distinct activity names, sorted.
  std::vector<std::string> alphabet() const;

  std::size_t activity_count() const;

  friend bool operator==(const ProcessTree& a, const ProcessTree& b) noexcept {
    return a.labels_ == b.labels_ && a.parents_ == b.parents_;
  }

 private:
  ProcessTree() = default;
  void index();

  std::vector<NodeLabel> labels_;
  std::vector<VertexId> parents_;
  std::vector<std::vector<VertexId>> children_;
  std::vector<std::vector<VertexId>> desc_;
  std::vector<std::size_t> position_;
};

/// Empty result means the tree is a valid process tree.
std::vector<Violation> validate(const ProcessTree& tree);

/// Parses the short-hand grammar, e.g. "->(a,X(b,tau),*(c,d))".
/// Throws ParseError (syntax, arity, reserved-token misuse).
ProcessTree parse_tree(std::string_view text);

std::string format_tree(const ProcessTree& tree);

/// Swaps Sequence and ReverseSequence labels; structure and indexing are kept.
ProcessTree invert(const ProcessTree& tree);

/// Reads a `.ptt` stream: one tree per line, `#` comment lines, blank lines
/// ignored. ParseError positions are relative to the offending line; the
/// message names the line number.
std::vector<ProcessTree> read_trees(std::istream& in);

}  // namespace ptss
