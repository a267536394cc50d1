#pragma once

// Small arithmetic expression language for drift terms in scenario files.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('-' | '+') unary | atom
//   atom   := number | 't' | 'x' index | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | exp
//
// State components are 1-based: x1 .. xn.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace fracguide {

class Expression {
public:
    /// Compiles `source` for states of dimension `dim`. Throws DomainError
    /// on malformed text or an out-of-range state index.
    static Expression parse(const std::string& source, int dim);

    [[nodiscard]] double eval(double t, std::span<const double> x) const;
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

private:
    enum class Op : std::uint8_t { Const, Time, State, Neg, Add, Sub, Mul, Div, Sin, Cos, Exp };
    struct Node {
        Op op;
        double value = 0.0;  // Const
        int index = 0;       // State (0-based)
        int lhs = -1;
        int rhs = -1;
    };
    class Parser;

    [[nodiscard]] double eval_node(int id, double t, std::span<const double> x) const;

    std::string source_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace fracguide
