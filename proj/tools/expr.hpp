#pragma once

#include <functional>
#include <string>

namespace lwb::cli {

/// Parses a real expression in the variable t: numbers, pi, e, + - * / ^,
/// unary minus, parentheses and sin cos tan exp log sqrt abs.
/// Throws lwb::Error("parse_error").
std::function<double(double)> parse_expression(const std::string& text);

}  // namespace lwb::cli
