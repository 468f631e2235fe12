#include "expr.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>

#include "lwb/error.hpp"

namespace lwb::cli {

namespace {

using Fn = std::function<double(double)>;

class Parser {
public:
  explicit Parser(const std::string& s) : s_(s) {}

  Fn parse() {
    Fn f = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("parse_error", what + " at offset " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Fn sum() {
    Fn f = product();
    for (;;) {
      if (eat('+')) f = [a = f, b = product()](double t) { return a(t) + b(t); };
      else if (eat('-')) f = [a = f, b = product()](double t) { return a(t) - b(t); };
      else return f;
    }
  }
  Fn product() {
    Fn f = unary();
    for (;;) {
      if (eat('*')) f = [a = f, b = unary()](double t) { return a(t) * b(t); };
      else if (eat('/')) f = [a = f, b = unary()](double t) { return a(t) / b(t); };
      else return f;
    }
  }
  Fn unary() {
    if (eat('-')) return [a = unary()](double t) { return -a(t); };
    if (eat('+')) return unary();
    return power();
  }
  // Right associative; binds tighter than unary minus on its left operand.
  Fn power() {
    Fn base = atom();
    if (eat('^')) return [a = base, b = unary()](double t) { return std::pow(a(t), b(t)); };
    return base;
  }
  Fn atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      Fn f = sum();
      if (!eat(')')) fail("missing ')'");
      return f;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return [v](double) { return v; };
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
      const std::string name = s_.substr(pos_, end - pos_);
      pos_ = end;
      if (name == "t") return [](double t) { return t; };
      if (name == "pi") return [](double) { return std::numbers::pi; };
      if (name == "e") return [](double) { return std::numbers::e; };
      static const std::map<std::string, double (*)(double)> fns{
          {"sin", [](double x) { return std::sin(x); }},   {"cos", [](double x) { return std::cos(x); }},
          {"tan", [](double x) { return std::tan(x); }},   {"exp", [](double x) { return std::exp(x); }},
          {"log", [](double x) { return std::log(x); }},   {"sqrt", [](double x) { return std::sqrt(x); }},
          {"abs", [](double x) { return std::abs(x); }}};
      const auto it = fns.find(name);
      if (it == fns.end()) fail("unknown name '" + name + "'");
      if (!eat('(')) fail("expected '(' after " + name);
      Fn arg = sum();
      if (!eat(')')) fail("missing ')'");
      return [f = it->second, arg](double t) { return f(arg(t)); };
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

std::function<double(double)> parse_expression(const std::string& text) { return Parser(text).parse(); }

}  // namespace lwb::cli
