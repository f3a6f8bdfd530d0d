#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "seqmeas/errors.hpp"

namespace seqmeas {

// AST for measurement propositions. `&` is the non-commutative sequence
// operator (rightmost factor acts first), `+` the alternative. The tree
// records exactly what the user wrote: sequence order is never reordered and
// `&` is never distributed over `+` (the two writings are not equivalent).
// The only normalization applied is flattening of directly nested
// alternatives, which is plain associativity.
class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct LabelNode {
  std::string name;
};

struct SeqNode {
  ExprPtr left;   // later measurement
  ExprPtr right;  // earlier measurement
};

struct AltNode {
  std::vector<ExprPtr> children;  // >= 2, none of them Alt
};

class Expr {
 public:
  explicit Expr(LabelNode n) : node_(std::move(n)) {}
  explicit Expr(SeqNode n) : node_(std::move(n)) {}
  explicit Expr(AltNode n) : node_(std::move(n)) {}

  bool is_label() const { return std::holds_alternative<LabelNode>(node_); }
  bool is_seq() const { return std::holds_alternative<SeqNode>(node_); }
  bool is_alt() const { return std::holds_alternative<AltNode>(node_); }

  const LabelNode& label() const { return std::get<LabelNode>(node_); }
  const SeqNode& seq() const { return std::get<SeqNode>(node_); }
  const AltNode& alt() const { return std::get<AltNode>(node_); }

  static ExprPtr make_label(std::string name);
  static ExprPtr make_seq(ExprPtr left, ExprPtr right);
  // Flattens children that are themselves alternatives.
  static ExprPtr make_alt(std::vector<ExprPtr> children);

 private:
  std::variant<LabelNode, SeqNode, AltNode> node_;
};

// A proposition conditioned on a preparation: `<expr> | <preparation>`.
struct Query {
  ExprPtr expr;
  std::string preparation;
};

// Grammar:
//   query  := expr '|' LABEL
//   expr   := term ('+' term)*
//   term   := factor ('&' factor)*
//   factor := LABEL | '(' expr ')'
// `&` binds tighter than `+` and parses left-associative; semantically a
// sequence chain reads right to left (rightmost factor is the first
// measurement). Labels are [A-Za-z0-9_]+; whitespace is insignificant.
Query parse(const std::string& text);

// Canonical text that reparses to a structurally identical Query.
std::string render(const Query& q);
std::string render(const ExprPtr& e);

// Distinct measurement labels in left-to-right textual order.
std::vector<std::string> labels_of(const Query& q);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);
bool structurally_equal(const Query& a, const Query& b);

}  // namespace seqmeas
