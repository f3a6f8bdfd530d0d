#include <doctest.h>

#include <random>

#include "seqmeas/expr.hpp"

using namespace seqmeas;

TEST_CASE("parse keeps the user's structure") {
  // atomic writing: sequence of d with an alternative
  const Query atomic = parse("d & (a + b) | s");
  CHECK(atomic.preparation == "s");
  REQUIRE(atomic.expr->is_seq());
  CHECK(atomic.expr->seq().left->label().name == "d");
  REQUIRE(atomic.expr->seq().right->is_alt());
  CHECK(atomic.expr->seq().right->alt().children.size() == 2);

  // distributed writing: alternative of two sequences
  const Query distributed = parse("(d & a) + (d & b) | s");
  REQUIRE(distributed.expr->is_alt());
  CHECK(distributed.expr->alt().children.size() == 2);
  CHECK(distributed.expr->alt().children[0]->is_seq());
  CHECK(distributed.expr->alt().children[1]->is_seq());

  // the two writings are structurally different: no distribution happens
  CHECK_FALSE(structurally_equal(atomic.expr, distributed.expr));

  // indefinite-order writing
  const Query indefinite = parse("k & ((a & b) + (b & a)) | s");
  REQUIRE(indefinite.expr->is_seq());
  REQUIRE(indefinite.expr->seq().right->is_alt());
  for (const ExprPtr& child : indefinite.expr->seq().right->alt().children) {
    CHECK(child->is_seq());
  }
}

TEST_CASE("sequence chains are left-associative, alternatives flatten") {
  const Query chain = parse("d & a & b | s");
  REQUIRE(chain.expr->is_seq());
  CHECK(chain.expr->seq().right->label().name == "b");  // first measurement
  CHECK(chain.expr->seq().left->seq().left->label().name == "d");

  const Query flat = parse("(a + b) + c | s");
  REQUIRE(flat.expr->is_alt());
  CHECK(flat.expr->alt().children.size() == 3);
  for (const ExprPtr& child : flat.expr->alt().children) {
    CHECK(child->is_label());
  }
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse("d & (a + b)"), ParseError);  // missing conditioning
  CHECK_THROWS_AS(parse("d & () | s"), ParseError);   // empty parentheses
  CHECK_THROWS_AS(parse("d & | s"), ParseError);
  CHECK_THROWS_AS(parse("| s"), ParseError);
  CHECK_THROWS_AS(parse("d ^ a | s"), ParseError);
  CHECK_THROWS_AS(parse("a & b | a"), ParseError);  // preparation reused
  CHECK_THROWS_AS(parse("d & a | s t"), ParseError);

  try {
    parse("d & (a ? b) | s");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.position == 7);
  }
}

TEST_CASE("labels_of") {
  CHECK(labels_of(parse("d & (a + b) | s")) ==
        std::vector<std::string>{"d", "a", "b"});
  CHECK(labels_of(parse("d & a & a | s")) ==
        std::vector<std::string>{"d", "a"});
  CHECK(labels_of(parse("(k & i & j) + (k & j & i) | s")) ==
        std::vector<std::string>{"k", "i", "j"});
}

TEST_CASE("render round-trips") {
  for (const char* text : {"d & (a + b) | s", "(d & a) + (d & b) | s",
                           "k & ((a & b) + (b & a)) | s", "a | s",
                           "d & a & b & c | s", "(a + b + c) & x | prep"}) {
    const Query q = parse(text);
    CHECK(structurally_equal(parse(render(q)), q));
  }

  // Alternative children keep their stored order.
  const Query q = parse("(d & b) + (d & a) | s");
  CHECK(render(q) == "d & b + d & a | s");
}

namespace {

ExprPtr random_tree(std::mt19937_64& rng, int depth) {
  const auto label = [&rng] {
    return Expr::make_label(std::string(1, static_cast<char>('a' + rng() % 8)));
  };
  if (depth == 0) return label();
  switch (rng() % 3) {
    case 0:
      return label();
    case 1:
      return Expr::make_seq(random_tree(rng, depth - 1),
                            random_tree(rng, depth - 1));
    default: {
      std::vector<ExprPtr> children;
      const std::size_t n = 2 + rng() % 2;
      for (std::size_t i = 0; i < n; ++i) {
        children.push_back(random_tree(rng, depth - 1));
      }
      return Expr::make_alt(std::move(children));
    }
  }
}

}  // namespace

TEST_CASE("randomized render/parse round-trip") {
  std::mt19937_64 rng(20250811);
  for (int i = 0; i < 1000; ++i) {
    const Query q{random_tree(rng, 5), "prep"};
    const Query back = parse(render(q));
    CHECK(structurally_equal(back, q));
  }
}
