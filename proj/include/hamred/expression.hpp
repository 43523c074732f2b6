#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hamred/numeric_core.hpp"

namespace hamred {

/// Arithmetic expression over named variables: numbers, + - * / ^, parentheses,
/// unary minus and the functions sin, cos, exp, sqrt.
class Expression {
public:
    /// Throws ConfigError on syntax errors or unknown names; evaluation throws
    /// DimensionError when the point size differs from the variable count.
    Expression(const std::string& text, const std::vector<std::string>& variables);

    double operator()(const Vec& values) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::string text_;
    Eigen::Index arity_ = 0;
    std::shared_ptr<const Node> root_;
};

/// Expression as a scalar function of a point.
ScalarFn compile_expression(const std::string& text, const std::vector<std::string>& variables);

}  // namespace hamred
