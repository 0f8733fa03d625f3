#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "tqb/error.hpp"
#include "tqb/expr.hpp"

using namespace tqb;

namespace {

double eval(const std::string& s, double x = 0.0) { return evaluate(parse(s), x); }

Errc parse_code(const std::string& s) {
  try {
    parse(s);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error for " << s);
  return Errc::syntax;
}

std::string random_expr(std::mt19937& gen, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 9 : 2);
  std::uniform_int_distribution<int> small(1, 9);
  switch (pick(gen)) {
    case 0: return std::to_string(small(gen));
    case 1: return "x";
    case 2: return "pi";
    case 3: return random_expr(gen, depth - 1) + "+" + random_expr(gen, depth - 1);
    case 4: return random_expr(gen, depth - 1) + "-" + random_expr(gen, depth - 1);
    case 5: return random_expr(gen, depth - 1) + "*" + random_expr(gen, depth - 1);
    case 6: return "(" + random_expr(gen, depth - 1) + ")/" + std::to_string(small(gen));
    case 7: return "sin(" + random_expr(gen, depth - 1) + ")";
    case 8: return "-" + random_expr(gen, depth - 1);
    default: return "sum(k,1," + std::to_string(small(gen)) + ",k*" + random_expr(gen, depth - 1) + ")";
  }
}

}  // namespace

TEST_CASE("arithmetic and precedence") {
  CHECK(eval("2+3*4") == 14);
  CHECK(eval("(2+3)*4") == 20);
  CHECK(eval("2^3^2") == 512);
  CHECK(eval("-2^2") == -4);
  CHECK(eval("8/4/2") == 1);
  CHECK(eval("1 - 2 - 3") == -4);
  CHECK(eval("2*x+1", 3.5) == 8);
  CHECK(eval("1.5e1") == 15);
}

TEST_CASE("functions and constants") {
  CHECK(eval("sin(pi/2)") == doctest::Approx(1.0));
  CHECK(eval("cos(0)") == 1);
  CHECK(eval("exp(1)") == doctest::Approx(std::exp(1.0)));
  CHECK(eval("sin(x)^100", std::numbers::pi / 2) == doctest::Approx(1.0));
}

TEST_CASE("sums") {
  CHECK(eval("sum(j,1,4,j)") == 10);
  CHECK(eval("sum(j,2,2,j^2)") == 4);
  CHECK(eval("sum(i,1,3,sum(j,1,3,i*j))") == 36);
  CHECK(parse_code("sum(i,1,3,sum(j,1,i,j))") == Errc::malformed_sum);
  const Expression e = parse("0.001*sum(j,1,25,cos(2*pi*j*x)/j)");
  for (double x : {-1.0, -0.37, 0.0, 0.21, 0.99}) {
    double loop = 0.0;
    for (int j = 1; j <= 25; ++j) loop += std::cos(2 * std::numbers::pi * j * x) / j;
    CHECK(e(x) == doctest::Approx(0.001 * loop).epsilon(1e-14));
  }
}

TEST_CASE("parse errors carry a code and the offset") {
  try {
    parse("sin(x");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.code() == Errc::syntax);
    CHECK(e.offset() == 5);
  }
  CHECK(parse_code("y+1") == Errc::unknown_identifier);
  CHECK(parse_code("j") == Errc::unknown_identifier);
  CHECK(parse_code("sum(j,1,2.5,j)") == Errc::malformed_sum);
  CHECK(parse_code("sum(j,3,1,j)") == Errc::malformed_sum);
  CHECK(parse_code("sum(j,1,3,j) + j") == Errc::unknown_identifier);
  CHECK(parse_code("2 +") == Errc::syntax);
  CHECK(parse_code("") == Errc::syntax);
  CHECK(parse_code("3 4") == Errc::syntax);
}

TEST_CASE("evaluation domain errors") {
  CHECK_THROWS_AS(eval("1/x", 0.0), Error);
  CHECK_THROWS_AS(eval("(-2)^0.5"), Error);
  CHECK(eval("(-2)^3") == -8);
}

TEST_CASE("rendering parses back to the same function") {
  std::mt19937 gen(7);
  for (int i = 0; i < 300; ++i) {
    const std::string src = random_expr(gen, 4);
    const Expression e = parse(src);
    const Expression back = parse(e.to_string());
    for (double x : {-1.3, 0.0, 0.4, 2.0}) {
      const double a = e(x), b = back(x);
      INFO(src << "  ->  " << e.to_string());
      CHECK(b == doctest::Approx(a).epsilon(1e-12));
    }
  }
}
