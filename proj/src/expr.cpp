#include "seqmeas/expr.hpp"

#include <algorithm>
#include <cctype>

namespace seqmeas {

ExprPtr Expr::make_label(std::string name) {
  return std::make_shared<Expr>(LabelNode{std::move(name)});
}

ExprPtr Expr::make_seq(ExprPtr left, ExprPtr right) {
  return std::make_shared<Expr>(SeqNode{std::move(left), std::move(right)});
}

ExprPtr Expr::make_alt(std::vector<ExprPtr> children) {
  std::vector<ExprPtr> flat;
  for (ExprPtr& c : children) {
    if (c->is_alt()) {
      for (const ExprPtr& g : c->alt().children) flat.push_back(g);
    } else {
      flat.push_back(std::move(c));
    }
  }
  if (flat.size() < 2) {
    throw InvariantError("alternative needs at least two children");
  }
  return std::make_shared<Expr>(AltNode{std::move(flat)});
}

namespace {

// ---------------------------------------------------------------------------
// Tokenizer / parser

enum class TokKind { Label, Amp, Plus, Bar, LParen, RParen, End };

struct Token {
  TokKind kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& input) : input_(input) { advance(); }

  const Token& current() const { return current_; }

  void advance() {
    while (pos_ < input_.size() &&
           std::isspace(static_cast<unsigned char>(input_[pos_]))) {
      ++pos_;
    }
    const std::size_t start = pos_;
    if (pos_ >= input_.size()) {
      current_ = {TokKind::End, "", start};
      return;
    }
    const char c = input_[pos_];
    switch (c) {
      case '&': current_ = {TokKind::Amp, "&", start}; ++pos_; return;
      case '+': current_ = {TokKind::Plus, "+", start}; ++pos_; return;
      case '|': current_ = {TokKind::Bar, "|", start}; ++pos_; return;
      case '(': current_ = {TokKind::LParen, "(", start}; ++pos_; return;
      case ')': current_ = {TokKind::RParen, ")", start}; ++pos_; return;
      default: break;
    }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < input_.size() &&
             (std::isalnum(static_cast<unsigned char>(input_[end])) ||
              input_[end] == '_')) {
        ++end;
      }
      current_ = {TokKind::Label, input_.substr(pos_, end - pos_), start};
      pos_ = end;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }

 private:
  const std::string& input_;
  std::size_t pos_ = 0;
  Token current_{TokKind::End, "", 0};
};

class Parser {
 public:
  explicit Parser(const std::string& input) : lexer_(input) {}

  Query parse_query() {
    ExprPtr e = parse_expr();
    if (lexer_.current().kind != TokKind::Bar) {
      throw ParseError("incomplete query: expected '| <preparation>'",
                       lexer_.current().pos);
    }
    lexer_.advance();
    if (lexer_.current().kind != TokKind::Label) {
      throw ParseError("expected preparation label after '|'",
                       lexer_.current().pos);
    }
    const std::string prep = lexer_.current().text;
    const std::size_t prep_pos = lexer_.current().pos;
    lexer_.advance();
    if (lexer_.current().kind != TokKind::End) {
      throw ParseError("unexpected trailing input", lexer_.current().pos);
    }
    Query q{std::move(e), prep};
    for (const std::string& label : labels_of(q)) {
      if (label == q.preparation) {
        throw ParseError("preparation label '" + prep +
                             "' also appears as a measurement label",
                         prep_pos);
      }
    }
    return q;
  }

 private:
  ExprPtr parse_expr() {
    std::vector<ExprPtr> terms;
    terms.push_back(parse_term());
    while (lexer_.current().kind == TokKind::Plus) {
      lexer_.advance();
      terms.push_back(parse_term());
    }
    if (terms.size() == 1) return std::move(terms.front());
    return Expr::make_alt(std::move(terms));
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    while (lexer_.current().kind == TokKind::Amp) {
      lexer_.advance();
      lhs = Expr::make_seq(std::move(lhs), parse_factor());
    }
    return lhs;
  }

  ExprPtr parse_factor() {
    const Token tok = lexer_.current();
    switch (tok.kind) {
      case TokKind::Label:
        lexer_.advance();
        return Expr::make_label(tok.text);
      case TokKind::LParen: {
        lexer_.advance();
        if (lexer_.current().kind == TokKind::RParen) {
          throw ParseError("empty parentheses", lexer_.current().pos);
        }
        ExprPtr inner = parse_expr();
        if (lexer_.current().kind != TokKind::RParen) {
          throw ParseError("expected ')'", lexer_.current().pos);
        }
        lexer_.advance();
        return inner;
      }
      default:
        throw ParseError("expected a label or '('", tok.pos);
    }
  }

  Lexer lexer_;
};

// ---------------------------------------------------------------------------
// Rendering

void render_into(const ExprPtr& e, std::string& out) {
  if (e->is_label()) {
    out += e->label().name;
    return;
  }
  if (e->is_seq()) {
    const SeqNode& s = e->seq();
    // left child: parenthesize alternatives (lower precedence)
    if (s.left->is_alt()) {
      out += '(';
      render_into(s.left, out);
      out += ')';
    } else {
      render_into(s.left, out);
    }
    out += " & ";
    // right child: parenthesize anything that is not a label, so that a
    // right-nested sequence survives the left-associative reparse
    if (s.right->is_label()) {
      render_into(s.right, out);
    } else {
      out += '(';
      render_into(s.right, out);
      out += ')';
    }
    return;
  }
  const AltNode& a = e->alt();
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (i > 0) out += " + ";
    render_into(a.children[i], out);
  }
}

void collect_labels(const ExprPtr& e, std::vector<std::string>& out) {
  if (e->is_label()) {
    if (std::find(out.begin(), out.end(), e->label().name) == out.end()) {
      out.push_back(e->label().name);
    }
    return;
  }
  if (e->is_seq()) {
    collect_labels(e->seq().left, out);
    collect_labels(e->seq().right, out);
    return;
  }
  for (const ExprPtr& c : e->alt().children) collect_labels(c, out);
}

}  // namespace

Query parse(const std::string& text) { return Parser(text).parse_query(); }

std::string render(const ExprPtr& e) {
  std::string out;
  render_into(e, out);
  return out;
}

std::string render(const Query& q) {
  return render(q.expr) + " | " + q.preparation;
}

std::vector<std::string> labels_of(const Query& q) {
  std::vector<std::string> out;
  collect_labels(q.expr, out);
  return out;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->is_label() != b->is_label() || a->is_seq() != b->is_seq()) {
    return false;
  }
  if (a->is_label()) return a->label().name == b->label().name;
  if (a->is_seq()) {
    return structurally_equal(a->seq().left, b->seq().left) &&
           structurally_equal(a->seq().right, b->seq().right);
  }
  const auto& ac = a->alt().children;
  const auto& bc = b->alt().children;
  if (ac.size() != bc.size()) return false;
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (!structurally_equal(ac[i], bc[i])) return false;
  }
  return true;
}

bool structurally_equal(const Query& a, const Query& b) {
  return a.preparation == b.preparation && structurally_equal(a.expr, b.expr);
}

}  // namespace seqmeas
