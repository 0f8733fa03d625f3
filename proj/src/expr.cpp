#include "tqb/expr.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "tqb/error.hpp"

namespace tqb {

struct Expression::Node {
  enum class Kind { number, x, var, neg, add, sub, mul, div, pow, sin, cos, exp, sum };

  Kind kind = Kind::number;
  double value = 0.0;  // literal
  int slot = 0;        // var slot, or the slot bound by a sum
  long lo = 0;
  long hi = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Kind = Node::Kind;

constexpr long kMaxSumSpan = 10000;
constexpr int kMaxSumDepth = 16;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

bool is_reserved(std::string_view id) {
  return id == "x" || id == "pi" || id == "sin" || id == "cos" || id == "exp" ||
         id == "sum";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ == src_.size()) fail(Errc::syntax, "empty expression");
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ != src_.size())
      fail(Errc::syntax, std::string("unexpected '") + src_[pos_] + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(Errc code, const std::string& msg) const {
    throw ParseError(code, pos_, msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, Errc code = Errc::syntax) {
    if (!accept(c)) fail(code, std::string("expected '") + c + "'");
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = make(Kind::add, lhs, parse_term());
      else if (accept('-'))
        lhs = make(Kind::sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Kind::mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = make(Kind::div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make(Kind::neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make(Kind::pow, base, parse_unary());
    return base;
  }

  std::string_view identifier() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < src_.size() &&
        (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
    }
    return src_.substr(start, pos_ - start);
  }

  NodePtr number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          ++pos_;
      }
    }
    double value = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail(Errc::syntax, "malformed number");
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::number;
    n->value = value;
    return n;
  }

  long integer_bound() {
    skip_ws();
    const std::size_t start = pos_;
    bool negative = accept('-');
    skip_ws();
    const std::size_t digits = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    long value = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + digits, src_.data() + pos_, value);
    if (digits == pos_ || ec != std::errc() || ptr != src_.data() + pos_) {
      pos_ = start;
      fail(Errc::malformed_sum, "sum bounds must be integers");
    }
    return negative ? -value : value;
  }

  NodePtr parse_sum(std::size_t at) {
    expect('(', Errc::malformed_sum);
    const std::size_t var_at = (skip_ws(), pos_);
    const std::string_view var = identifier();
    if (var.empty() || is_reserved(var)) {
      pos_ = var_at;
      fail(Errc::malformed_sum, "sum needs a fresh variable name");
    }
    expect(',', Errc::malformed_sum);
    const long lo = integer_bound();
    expect(',', Errc::malformed_sum);
    const long hi = integer_bound();
    expect(',', Errc::malformed_sum);
    if (lo > hi || hi - lo > kMaxSumSpan) {
      pos_ = at;
      fail(Errc::malformed_sum, "sum bounds need lo <= hi and hi - lo <= 10000");
    }
    if (static_cast<int>(scope_.size()) >= kMaxSumDepth)
      fail(Errc::malformed_sum, "sums nested too deeply");
    scope_.emplace_back(var);
    NodePtr body = parse_expr();
    scope_.pop_back();
    expect(')', Errc::malformed_sum);
    auto n = std::make_shared<Node>();
    n->kind = Kind::sum;
    n->slot = static_cast<int>(scope_.size());
    n->lo = lo;
    n->hi = hi;
    n->lhs = std::move(body);
    return n;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail(Errc::syntax, "unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept('(')) {
      NodePtr inner = parse_expr();
      expect(')');
      return inner;
    }
    const std::size_t at = pos_;
    const std::string_view id = identifier();
    if (id.empty()) fail(Errc::syntax, std::string("unexpected '") + c + "'");
    if (id == "x") return make(Kind::x);
    if (id == "pi") {
      auto n = std::make_shared<Node>();
      n->value = std::numbers::pi;
      return n;
    }
    if (id == "sin" || id == "cos" || id == "exp") {
      const Kind kind = id == "sin" ? Kind::sin : id == "cos" ? Kind::cos : Kind::exp;
      expect('(');
      NodePtr arg = parse_expr();
      expect(')');
      return make(kind, arg);
    }
    if (id == "sum") return parse_sum(at);
    for (std::size_t i = scope_.size(); i-- > 0;) {
      if (scope_[i] == id) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::var;
        n->slot = static_cast<int>(i);
        return n;
      }
    }
    pos_ = at;
    fail(Errc::unknown_identifier, "unknown identifier '" + std::string(id) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<std::string_view> scope_;
};

double eval_node(const Node& n, double x, std::vector<double>& env) {
  switch (n.kind) {
    case Kind::number: return n.value;
    case Kind::x: return x;
    case Kind::var: return env[static_cast<std::size_t>(n.slot)];
    case Kind::neg: return -eval_node(*n.lhs, x, env);
    case Kind::add: return eval_node(*n.lhs, x, env) + eval_node(*n.rhs, x, env);
    case Kind::sub: return eval_node(*n.lhs, x, env) - eval_node(*n.rhs, x, env);
    case Kind::mul: return eval_node(*n.lhs, x, env) * eval_node(*n.rhs, x, env);
    case Kind::div: {
      const double num = eval_node(*n.lhs, x, env);
      const double den = eval_node(*n.rhs, x, env);
      if (den == 0.0) throw Error(Errc::evaluation_domain, "division by zero");
      return num / den;
    }
    case Kind::pow: {
      const double base = eval_node(*n.lhs, x, env);
      const double expo = eval_node(*n.rhs, x, env);
      if (base < 0.0 && std::trunc(expo) != expo)
        throw Error(Errc::evaluation_domain, "negative base with non-integer exponent");
      if (base == 0.0 && expo < 0.0)
        throw Error(Errc::evaluation_domain, "division by zero in power");
      return std::pow(base, expo);
    }
    case Kind::sin: return std::sin(eval_node(*n.lhs, x, env));
    case Kind::cos: return std::cos(eval_node(*n.lhs, x, env));
    case Kind::exp: return std::exp(eval_node(*n.lhs, x, env));
    case Kind::sum: {
      const auto slot = static_cast<std::size_t>(n.slot);
      if (env.size() <= slot) env.resize(slot + 1);
      double total = 0.0;
      for (long j = n.lo; j <= n.hi; ++j) {
        env[slot] = static_cast<double>(j);
        total += eval_node(*n.lhs, x, env);
      }
      return total;
    }
  }
  return 0.0;
}

std::string literal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render(const Node& n, int depth) {
  auto bin = [&](const char* op) {
    return "(" + render(*n.lhs, depth) + op + render(*n.rhs, depth) + ")";
  };
  switch (n.kind) {
    case Kind::number: return literal(n.value);
    case Kind::x: return "x";
    case Kind::var: return "j" + std::to_string(n.slot);
    case Kind::neg: return "(-" + render(*n.lhs, depth) + ")";
    case Kind::add: return bin("+");
    case Kind::sub: return bin("-");
    case Kind::mul: return bin("*");
    case Kind::div: return bin("/");
    case Kind::pow: return bin("^");
    case Kind::sin: return "sin(" + render(*n.lhs, depth) + ")";
    case Kind::cos: return "cos(" + render(*n.lhs, depth) + ")";
    case Kind::exp: return "exp(" + render(*n.lhs, depth) + ")";
    case Kind::sum:
      return "sum(j" + std::to_string(n.slot) + "," + std::to_string(n.lo) + "," +
             std::to_string(n.hi) + "," + render(*n.lhs, depth + 1) + ")";
  }
  return {};
}

}  // namespace

Expression parse(std::string_view source) {
  Parser parser(source);
  return Expression(parser.parse_all(), std::string(source));
}

double Expression::operator()(double x) const {
  if (!root_) throw Error(Errc::invalid_argument, "evaluating an empty expression");
  std::vector<double> env;
  return eval_node(*root_, x, env);
}

std::string Expression::to_string() const {
  return root_ ? render(*root_, 0) : std::string{};
}

double evaluate(const Expression& e, double x) { return e(x); }

}  // namespace tqb
