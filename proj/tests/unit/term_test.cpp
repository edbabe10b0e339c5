#include <gtest/gtest.h>

#include "helpers.hpp"
#include "termxform/bindings.hpp"
#include "termxform/reader.hpp"
#include "termxform/term.hpp"

using namespace termxform;
using termxform::testing::T;

TEST(Term, AtomsNumbersAndCompounds) {
  const Term a = Term::atom("hallo");
  EXPECT_TRUE(a.is_atom());
  EXPECT_EQ(a.name(), "hallo");
  EXPECT_EQ(Term::integer(42).int_value(), 42);
  EXPECT_DOUBLE_EQ(Term::real(1.5).float_value(), 1.5);
  const Term f = Term::compound("f", {a, Term::integer(1)});
  EXPECT_EQ(f.arity(), 2u);
  EXPECT_TRUE(f.has_functor("f", 2));
  EXPECT_FALSE(f.has_functor("f", 1));
  EXPECT_TRUE(Term::compound("g", {}).is_atom());
}

TEST(Term, IntAndFloatAreDistinct) {
  EXPECT_FALSE(term_equal(Term::integer(1), Term::real(1.0)));
  EXPECT_TRUE(term_equal(Term::real(2.5), Term::real(2.5)));
}

TEST(Term, ListsRoundTripThroughItems) {
  const Term l = Term::list({Term::atom("a"), Term::atom("b")});
  ASSERT_TRUE(is_list(l));
  auto items = list_items(l);
  ASSERT_TRUE(items);
  ASSERT_EQ(items->size(), 2u);
  EXPECT_EQ((*items)[1].name(), "b");
  EXPECT_TRUE(Term::nil().is_nil());
  const Term partial = Term::cons(Term::atom("a"), Term::variable(0, "T"));
  EXPECT_FALSE(is_list(partial));
  EXPECT_FALSE(list_items(partial).has_value());
}

TEST(Term, GroundnessSeesNestedVariables) {
  EXPECT_TRUE(is_ground(T("f(a,[1,2],g(b))")));
  EXPECT_FALSE(is_ground(T("f(a,[1,X])")));
}

TEST(Term, RenderIsCanonicalAndQuotesWhenNeeded) {
  EXPECT_EQ(render_term(T("f(a+b,[1,2])")), "f(+(a,b),[1,2])");
  EXPECT_EQ(render_term(Term::atom("Hello")), "'Hello'");
  EXPECT_EQ(render_term(Term::atom("it's")), "'it''s'");
  EXPECT_EQ(render_term(Term::atom("a b")), "'a b'");
  EXPECT_EQ(render_term(Term::atom("[]")), "[]");
  EXPECT_EQ(render_term(Term::real(1.3)), "1.3");
  EXPECT_EQ(render_term(Term::integer(-3)), "-3");
  EXPECT_EQ(write_term(Term::atom("Hello")), "Hello");
}

TEST(Term, RenderedTermsReadBack) {
  for (const char* src : {"f(+(a,b),[1,2|X])", "'it''s'", "-(-(1))", "g('a=\"1\"',text('x y'))",
                          "[[a],[]]", "h(-3,- 3,1.0e10)"}) {
    const Term t = T(src);
    const Term back = T(render_term(t));
    EXPECT_EQ(render_term(back), render_term(t)) << src;
  }
}

TEST(Term, FloatFormatRoundTrips) {
  EXPECT_EQ(format_float(1.0), "1.0");
  EXPECT_EQ(format_float(0.1), "0.1");
  EXPECT_EQ(std::stod(format_float(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Attributes, SplitAndBuild) {
  const Term a = attribute_atom("id", "1234");
  EXPECT_EQ(a.name(), "id=\"1234\"");
  auto e = split_attribute(a.name());
  ASSERT_TRUE(e);
  EXPECT_EQ(e->id, "id");
  EXPECT_EQ(e->value, "1234");
  auto q = split_attribute("t=\"say \"hi\"\"");
  ASSERT_TRUE(q);
  EXPECT_EQ(q->value, "say \"hi\"");
  EXPECT_FALSE(split_attribute("noequals"));
  EXPECT_FALSE(split_attribute("=\"x\""));
  EXPECT_FALSE(split_attribute("a=\"unterminated"));
}

TEST(Nodes, ConstructorsValidateNames) {
  const Term e = mk_element("a", {{"id", "1"}}, {mk_text("x")});
  EXPECT_TRUE(is_element(e));
  EXPECT_EQ(render_term(e), "element(a,['id=\"1\"'],[text(x)])");
  EXPECT_THROW(mk_element("1a", {}, {}), ConstructionError);
  EXPECT_THROW(mk_element("a", {{"b c", "1"}}, {}), ConstructionError);
  EXPECT_NO_THROW(mk_element("_u", {}, {}));
  EXPECT_TRUE(is_text(mk_text("t")));
  EXPECT_TRUE(is_comment(mk_comment("c")));
  EXPECT_TRUE(is_pi(mk_pi("p")));
}

TEST(Bindings, UnifyBindsAndUndoes) {
  Bindings b;
  const Term x = b.fresh("X");
  const Term y = b.fresh("Y");
  const auto m = b.mark();
  ASSERT_TRUE(unify(Term::compound("f", {x, Term::atom("b")}), Term::compound("f", {Term::atom("a"), y}), b));
  EXPECT_EQ(render_term(b.resolve(x)), "a");
  EXPECT_EQ(render_term(b.resolve(y)), "b");
  b.undo_to(m);
  EXPECT_TRUE(b.deref(x).is_var());
}

TEST(Bindings, FailedUnifyLeavesNoBindings) {
  Bindings b;
  const Term x = b.fresh("X");
  EXPECT_FALSE(unify(Term::compound("f", {x, Term::atom("a")}), T("f(1,b)"), b));
  EXPECT_TRUE(b.deref(x).is_var());
}

TEST(Bindings, OccursCheck) {
  Bindings b;
  const Term x = b.fresh("X");
  const Term fx = Term::compound("f", {x});
  EXPECT_FALSE(unify(x, fx, b, true));
  EXPECT_TRUE(unify(x, fx, b, false));
}

TEST(Bindings, CopyKeepsSharing) {
  Bindings b;
  const Term x = b.fresh("X");
  const Term t = Term::compound("f", {x, x, Term::atom("a")});
  const Term c = copy_with_fresh_vars(t, b);
  ASSERT_TRUE(c.arg(0).is_var());
  EXPECT_EQ(c.arg(0).var_id(), c.arg(1).var_id());
  EXPECT_NE(c.arg(0).var_id(), x.var_id());
}
