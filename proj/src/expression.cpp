#include "hamred/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace hamred {

struct Expression::Node {
    enum class Kind { number, variable, neg, add, sub, mul, div, pow, call } kind;
    double value = 0.0;
    int index = 0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    double eval(const Vec& v) const {
        switch (kind) {
            case Kind::number: return value;
            case Kind::variable: return v(index);
            case Kind::neg: return -lhs->eval(v);
            case Kind::add: return lhs->eval(v) + rhs->eval(v);
            case Kind::sub: return lhs->eval(v) - rhs->eval(v);
            case Kind::mul: return lhs->eval(v) * rhs->eval(v);
            case Kind::div: return lhs->eval(v) / rhs->eval(v);
            case Kind::pow: {
                const double e = rhs->eval(v);
                const double b = lhs->eval(v);
                if (e == std::round(e) && std::abs(e) <= 16) {
                    double r = 1.0;
                    for (int i = 0; i < static_cast<int>(std::abs(e)); ++i) r *= b;
                    return e < 0 ? 1.0 / r : r;
                }
                return std::pow(b, e);
            }
            case Kind::call: return fn(lhs->eval(v));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

    NodePtr parse() {
        NodePtr n = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("expression \"" + s_ + "\": " + msg + " at position " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr sum() {
        NodePtr n = product();
        for (;;) {
            if (accept('+')) n = make(Kind::add, n, product());
            else if (accept('-')) n = make(Kind::sub, n, product());
            else return n;
        }
    }

    NodePtr product() {
        NodePtr n = unary();
        for (;;) {
            if (accept('*')) n = make(Kind::mul, n, unary());
            else if (accept('/')) n = make(Kind::div, n, unary());
            else return n;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Kind::neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Kind::pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (accept('(')) {
            NodePtr n = sum();
            if (!accept(')')) fail("missing ')'");
            return n;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            auto n = std::make_shared<Expression::Node>();
            n->kind = Kind::number;
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            double (*fn)(double) = nullptr;
            if (name == "sin") fn = [](double x) { return std::sin(x); };
            else if (name == "cos") fn = [](double x) { return std::cos(x); };
            else if (name == "exp") fn = [](double x) { return std::exp(x); };
            else if (name == "sqrt") fn = [](double x) { return std::sqrt(x); };
            if (fn) {
                if (!accept('(')) fail("function " + name + " needs '('");
                auto n = std::make_shared<Expression::Node>();
                n->kind = Kind::call;
                n->fn = fn;
                n->lhs = sum();
                if (!accept(')')) fail("missing ')'");
                return n;
            }
            if (name == "pi") {
                auto n = std::make_shared<Expression::Node>();
                n->kind = Kind::number;
                n->value = M_PI;
                return n;
            }
            for (std::size_t i = 0; i < vars_.size(); ++i)
                if (vars_[i] == name) {
                    auto n = std::make_shared<Expression::Node>();
                    n->kind = Kind::variable;
                    n->index = static_cast<int>(i);
                    return n;
                }
            fail("unknown name '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& text, const std::vector<std::string>& variables)
    : text_(text),
      arity_(static_cast<Eigen::Index>(variables.size())),
      root_(Parser(text_, variables).parse()) {}

double Expression::operator()(const Vec& values) const {
    if (values.size() != arity_)
        throw DimensionError("expression \"" + text_ + "\" expects " + std::to_string(arity_) + " values");
    return root_->eval(values);
}

ScalarFn compile_expression(const std::string& text, const std::vector<std::string>& variables) {
    const Expression e(text, variables);
    return [e](const Vec& z) { return e(z); };
}

}  // namespace hamred
