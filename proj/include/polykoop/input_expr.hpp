#pragma once

#include "polykoop/error.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polykoop {

/// Immutable expression tree for entries of the input map g(x) and of B(x).
/// Variables are state indices (0-based, printed as x1, x2, ...).
class InputExpr {
public:
    enum class Kind { Constant, Variable, Sum, Product, Power, Sin, Cos, Exp };

    /// The constant 0.
    InputExpr();

    static InputExpr constant(double value);
    static InputExpr variable(std::size_t index);
    static InputExpr sum(std::vector<InputExpr> terms);
    static InputExpr product(std::vector<InputExpr> factors);
    static InputExpr power(InputExpr base, int exponent);
    static InputExpr sin(InputExpr arg);
    static InputExpr cos(InputExpr arg);
    static InputExpr exp(InputExpr arg);

    Kind kind() const noexcept { return node_->kind; }
    double value() const noexcept { return node_->value; }
    std::size_t index() const noexcept { return node_->index; }
    int exponent() const noexcept { return node_->exponent; }
    const std::vector<InputExpr>& children() const noexcept { return node_->children; }

    bool is_constant() const noexcept { return kind() == Kind::Constant; }
    bool is_zero() const noexcept { return is_constant() && value() == 0.0; }

    /// vars[i] is the value of x_{i+1}. Only the first max_variable()+1 entries are read.
    double evaluate(std::span<const double> vars) const;

    /// Largest variable index occurring in the tree.
    std::optional<std::size_t> max_variable() const;

    friend bool operator==(const InputExpr& a, const InputExpr& b);

private:
    struct Node {
        Kind kind = Kind::Constant;
        double value = 0.0;
        std::size_t index = 0;
        int exponent = 0;
        std::vector<InputExpr> children;
    };

    explicit InputExpr(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
    static InputExpr make(Kind kind, std::vector<InputExpr> children);

    std::shared_ptr<const Node> node_;
};

class ExprSyntaxError : public Error {
public:
    ExprSyntaxError(const std::string& what, std::size_t position)
      : Error(what)
      , position_(position) {}

    /// Byte offset into the parsed text.
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Parses "1", "x1", "x2^2", "sin(x3)", "2*x1 - exp(x2)". Throws ExprSyntaxError.
/// The tree mirrors the text (no simplification), so parse(to_string(e)) == e.
InputExpr parse_expr(std::string_view text);

std::string to_string(const InputExpr& e);

/// Constant folding, flattening of sums and products, merging of like terms and of
/// powers of a common base. Transcendental factors stay symbolic.
InputExpr simplify(const InputExpr& e);

} // namespace polykoop
