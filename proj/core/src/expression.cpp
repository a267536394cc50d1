#include "fracguide/expression.hpp"

#include "fracguide/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace fracguide {

class Expression::Parser {
public:
    Parser(Expression& out, const std::string& text, int dim) : out_(out), text_(text), dim_(dim) {}

    int parse() {
        const int root = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw DomainError("expression \"" + text_ + "\" at column " + std::to_string(pos_ + 1) +
                                ": " + what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    int add(Node n) {
        out_.nodes_.push_back(n);
        return static_cast<int>(out_.nodes_.size()) - 1;
    }

    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            if (accept('+')) lhs = add({Op::Add, 0.0, 0, lhs, parse_term()});
            else if (accept('-')) lhs = add({Op::Sub, 0.0, 0, lhs, parse_term()});
            else return lhs;
        }
    }

    int parse_term() {
        int lhs = parse_unary();
        for (;;) {
            if (accept('*')) lhs = add({Op::Mul, 0.0, 0, lhs, parse_unary()});
            else if (accept('/')) lhs = add({Op::Div, 0.0, 0, lhs, parse_unary()});
            else return lhs;
        }
    }

    int parse_unary() {
        if (accept('-')) return add({Op::Neg, 0.0, 0, parse_unary(), -1});
        if (accept('+')) return parse_unary();
        return parse_atom();
    }

    int parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            const int inner = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    int parse_number() {
        double value = 0.0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        const auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{}) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return add({Op::Const, value, 0, -1, -1});
    }

    int parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::string name = text_.substr(start, pos_ - start);
        if (name == "t") return add({Op::Time, 0.0, 0, -1, -1});
        if (name == "x") {
            const std::size_t digits = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (digits == pos_) fail("state symbol needs an index, e.g. x1");
            const int index = std::stoi(text_.substr(digits, pos_ - digits));
            if (index < 1 || index > dim_) {
                fail("state index x" + std::to_string(index) + " outside 1.." + std::to_string(dim_));
            }
            return add({Op::State, 0.0, index - 1, -1, -1});
        }
        Op op;
        if (name == "sin") op = Op::Sin;
        else if (name == "cos") op = Op::Cos;
        else if (name == "exp") op = Op::Exp;
        else fail("unknown symbol '" + name + "'");
        if (!accept('(')) fail("expected '(' after " + name);
        const int arg = parse_expr();
        if (!accept(')')) fail("expected ')'");
        return add({op, 0.0, 0, arg, -1});
    }

    Expression& out_;
    const std::string& text_;
    int dim_;
    std::size_t pos_ = 0;
};

Expression Expression::parse(const std::string& source, int dim) {
    Expression out;
    out.source_ = source;
    Parser parser(out, out.source_, dim);
    out.root_ = parser.parse();
    return out;
}

double Expression::eval(double t, std::span<const double> x) const {
    return eval_node(root_, t, x);
}

double Expression::eval_node(int id, double t, std::span<const double> x) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::Time: return t;
        case Op::State: return x[static_cast<std::size_t>(n.index)];
        case Op::Neg: return -eval_node(n.lhs, t, x);
        case Op::Add: return eval_node(n.lhs, t, x) + eval_node(n.rhs, t, x);
        case Op::Sub: return eval_node(n.lhs, t, x) - eval_node(n.rhs, t, x);
        case Op::Mul: return eval_node(n.lhs, t, x) * eval_node(n.rhs, t, x);
        case Op::Div: return eval_node(n.lhs, t, x) / eval_node(n.rhs, t, x);
        case Op::Sin: return std::sin(eval_node(n.lhs, t, x));
        case Op::Cos: return std::cos(eval_node(n.lhs, t, x));
        case Op::Exp: return std::exp(eval_node(n.lhs, t, x));
    }
    return 0.0;
}

}  // namespace fracguide
