#include "momenta/expr.hpp"

#include <cctype>
#include <map>

#include "momenta/harmonic.hpp"

namespace momenta {

namespace {

struct Token {
    enum Type { Number, Ident, Op, End } type;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void error(const std::string& msg) const {
        fail(ErrorClass::parse_error,
             msg + " at position " + std::to_string(tok_.pos) + " in '" + s_ + "'");
    }

private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
        tok_.pos = i_;
        if (i_ >= s_.size()) {
            tok_ = {Token::End, "", i_};
            return;
        }
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j])))
                ++j;
            tok_ = {Token::Number, s_.substr(i_, j - i_), i_};
            i_ = j;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
                ++j;
            tok_ = {Token::Ident, s_.substr(i_, j - i_), i_};
            i_ = j;
            return;
        }
        static const std::string ops = "+-*/^(),;";
        if (ops.find(c) != std::string::npos) {
            tok_ = {Token::Op, std::string(1, c), i_};
            ++i_;
            return;
        }
        fail(ErrorClass::parse_error,
             std::string("unexpected character '") + c + "' at position " + std::to_string(i_) +
                 " in '" + s_ + "'");
    }

    const std::string& s_;
    std::size_t i_ = 0;
    Token tok_;
};

// ---- rational-function parser ----

class RatParser {
public:
    RatParser(const std::string& text, Var outer) : lex_(text), outer_(outer) {}

    RatFunc parse() {
        RatFunc r = expr();
        if (lex_.peek().type != Token::End)
            lex_.error("trailing input");
        return r;
    }

private:
    RatFunc expr() {
        RatFunc acc = term();
        while (lex_.peek().type == Token::Op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            std::string op = lex_.take().text;
            RatFunc rhs = term();
            acc = (op == "+") ? acc + rhs : acc - rhs;
        }
        return acc;
    }

    RatFunc term() {
        RatFunc acc = factor();
        while (lex_.peek().type == Token::Op &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            std::string op = lex_.take().text;
            RatFunc rhs = factor();
            acc = (op == "*") ? acc * rhs : acc / rhs;
        }
        return acc;
    }

    RatFunc factor() {
        bool neg = false;
        while (lex_.peek().type == Token::Op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            if (lex_.take().text == "-")
                neg = !neg;
        }
        RatFunc b = base();
        if (lex_.peek().type == Token::Op && lex_.peek().text == "^") {
            lex_.take();
            long e = exponent();
            RatFunc p = RatFunc::constant(outer_, 1);
            RatFunc pb = b;
            unsigned long ae = static_cast<unsigned long>(e < 0 ? -e : e);
            for (unsigned long i = 0; i < ae; ++i)
                p = p * pb;
            if (e < 0)
                p = RatFunc::constant(outer_, 1) / p;
            b = p;
        }
        return neg ? -b : b;
    }

    long exponent() {
        bool neg = false;
        if (lex_.peek().type == Token::Op &&
            (lex_.peek().text == "-" || lex_.peek().text == "+"))
            neg = lex_.take().text == "-";
        if (lex_.peek().type == Token::Op && lex_.peek().text == "(") {
            lex_.take();
            long e = exponent();
            expect(")");
            return e;
        }
        if (lex_.peek().type != Token::Number)
            lex_.error("expected integer exponent");
        long e = std::stol(lex_.take().text);
        return neg ? -e : e;
    }

    RatFunc base() {
        const Token& t = lex_.peek();
        if (t.type == Token::Number) {
            Int v(lex_.take().text);
            return RatFunc::constant(outer_, Rational(v));
        }
        if (t.type == Token::Ident) {
            std::string name = lex_.take().text;
            if (name == var_name(outer_))
                return RatFunc::from_poly(BiPoly::monomial(outer_, 1, 0, Rational(1)));
            if (name == "ep")
                return RatFunc::from_poly(BiPoly::monomial(outer_, 0, 1, Rational(1)));
            lex_.error("unknown variable '" + name + "' (expected '" +
                       std::string(var_name(outer_)) + "' or 'ep')");
        }
        if (t.type == Token::Op && t.text == "(") {
            lex_.take();
            RatFunc inner = expr();
            expect(")");
            return inner;
        }
        lex_.error("expected a value");
    }

    void expect(const std::string& op) {
        if (lex_.peek().type != Token::Op || lex_.peek().text != op)
            lex_.error("expected '" + op + "'");
        lex_.take();
    }

    Lexer lex_;
    Var outer_;
};

} // namespace

RatFunc parse_ratfunc(const std::string& text, Var outer) {
    return RatParser(text, outer).parse();
}

BiPoly parse_bipoly(const std::string& text, Var outer) {
    RatFunc r = parse_ratfunc(text, outer);
    if (!r.is_polynomial())
        fail(ErrorClass::parse_error, "expected a polynomial, got '" + text + "'");
    return r.as_poly();
}

Poly parse_poly(const std::string& text, Var outer) {
    BiPoly b = parse_bipoly(text, outer);
    if (b.degree_eps() > 0)
        fail(ErrorClass::parse_error, "'ep' not allowed in '" + text + "'");
    return b.at_eps0();
}

PolyFrac parse_polyfrac(const std::string& text, Var outer) {
    RatFunc r = parse_ratfunc(text, outer);
    if (r.num().degree_eps() > 0 || r.den().degree_eps() > 0)
        fail(ErrorClass::parse_error, "'ep' not allowed in '" + text + "'");
    return PolyFrac(r.num().at_eps0(), r.den().at_eps0());
}

// ---- harmonic expression AST ----

struct HarmonicExpr::Node {
    enum Kind { Const, VarN, Sum, Add, Sub, Mul, Div, Neg, Pow } kind;
    Rational value;                     // Const
    std::vector<long> indices;          // Sum
    std::shared_ptr<const Node> a, b;   // binary / unary
    long exponent = 0;                  // Pow
};

namespace {

using NodePtr = std::shared_ptr<const HarmonicExpr::Node>;

class HarmonicParser {
public:
    explicit HarmonicParser(const std::string& text) : lex_(text) {}

    NodePtr parse() {
        NodePtr r = expr();
        if (lex_.peek().type != Token::End)
            lex_.error("trailing input");
        return r;
    }

private:
    NodePtr make(HarmonicExpr::Node n) {
        return std::make_shared<HarmonicExpr::Node>(std::move(n));
    }

    NodePtr expr() {
        NodePtr acc = term();
        while (lex_.peek().type == Token::Op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            auto kind = lex_.take().text == "+" ? HarmonicExpr::Node::Add : HarmonicExpr::Node::Sub;
            NodePtr rhs = term();
            acc = make({kind, {}, {}, acc, rhs, 0});
        }
        return acc;
    }

    NodePtr term() {
        NodePtr acc = factor();
        while (lex_.peek().type == Token::Op &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            auto kind = lex_.take().text == "*" ? HarmonicExpr::Node::Mul : HarmonicExpr::Node::Div;
            NodePtr rhs = factor();
            acc = make({kind, {}, {}, acc, rhs, 0});
        }
        return acc;
    }

    NodePtr factor() {
        bool neg = false;
        while (lex_.peek().type == Token::Op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            if (lex_.take().text == "-")
                neg = !neg;
        }
        NodePtr b = base();
        if (lex_.peek().type == Token::Op && lex_.peek().text == "^") {
            lex_.take();
            if (lex_.peek().type != Token::Number)
                lex_.error("expected integer exponent");
            long e = std::stol(lex_.take().text);
            b = make({HarmonicExpr::Node::Pow, {}, {}, b, nullptr, e});
        }
        if (neg)
            b = make({HarmonicExpr::Node::Neg, {}, {}, b, nullptr, 0});
        return b;
    }

    NodePtr base() {
        const Token& t = lex_.peek();
        if (t.type == Token::Number) {
            Int v(lex_.take().text);
            return make({HarmonicExpr::Node::Const, Rational(v), {}, nullptr, nullptr, 0});
        }
        if (t.type == Token::Ident) {
            std::string name = lex_.take().text;
            if (name == "n")
                return make({HarmonicExpr::Node::VarN, {}, {}, nullptr, nullptr, 0});
            if (name == "S") {
                expect("(");
                std::vector<long> idx;
                while (true) {
                    bool neg = false;
                    if (lex_.peek().type == Token::Op &&
                        (lex_.peek().text == "-" || lex_.peek().text == "+"))
                        neg = lex_.take().text == "-";
                    if (lex_.peek().type != Token::Number)
                        lex_.error("expected harmonic-sum index");
                    long a = std::stol(lex_.take().text);
                    idx.push_back(neg ? -a : a);
                    if (lex_.peek().type == Token::Op && lex_.peek().text == ",") {
                        lex_.take();
                        continue;
                    }
                    break;
                }
                expect(")");
                return make({HarmonicExpr::Node::Sum, {}, std::move(idx), nullptr, nullptr, 0});
            }
            lex_.error("unknown identifier '" + name + "' (expected n or S(...))");
        }
        if (t.type == Token::Op && t.text == "(") {
            lex_.take();
            NodePtr inner = expr();
            expect(")");
            return inner;
        }
        lex_.error("expected a value");
    }

    void expect(const std::string& op) {
        if (lex_.peek().type != Token::Op || lex_.peek().text != op)
            lex_.error("expected '" + op + "'");
        lex_.take();
    }

    Lexer lex_;
};

// shared cache of harmonic-sum streams while evaluating one request
struct SumCache {
    std::map<std::vector<long>, std::vector<Rational>> streams;
    long mu;

    const std::vector<Rational>& stream(const std::vector<long>& idx) {
        auto it = streams.find(idx);
        if (it != streams.end())
            return it->second;
        auto s = harmonic_sum_stream(idx, mu);
        return streams.emplace(idx, std::move(s)).first->second;
    }
};

Rational eval_node(const HarmonicExpr::Node& node, long n, SumCache& cache) {
    using N = HarmonicExpr::Node;
    switch (node.kind) {
        case N::Const: return node.value;
        case N::VarN: return Rational(n);
        case N::Sum: return cache.stream(node.indices)[static_cast<std::size_t>(n)];
        case N::Add: return eval_node(*node.a, n, cache) + eval_node(*node.b, n, cache);
        case N::Sub: return eval_node(*node.a, n, cache) - eval_node(*node.b, n, cache);
        case N::Mul: return eval_node(*node.a, n, cache) * eval_node(*node.b, n, cache);
        case N::Div: {
            Rational d = eval_node(*node.b, n, cache);
            if (d == 0)
                fail(ErrorClass::degenerate_input,
                     "harmonic expression pole at n = " + std::to_string(n));
            return eval_node(*node.a, n, cache) / d;
        }
        case N::Neg: return -eval_node(*node.a, n, cache);
        case N::Pow: {
            Rational b = eval_node(*node.a, n, cache);
            long e = node.exponent;
            if (e < 0 && b == 0)
                fail(ErrorClass::degenerate_input,
                     "harmonic expression pole at n = " + std::to_string(n));
            Rational acc(1);
            for (long i = 0; i < (e < 0 ? -e : e); ++i)
                acc *= b;
            return e < 0 ? Rational(1) / acc : acc;
        }
    }
    fail(ErrorClass::internal, "bad harmonic expression node");
}

} // namespace

HarmonicExpr HarmonicExpr::parse(const std::string& text) {
    HarmonicExpr e;
    e.text_ = text;
    e.root_ = HarmonicParser(text).parse();
    return e;
}

Rational HarmonicExpr::eval(long n) const {
    SumCache cache{{}, n};
    return eval_node(*root_, n, cache);
}

std::vector<Rational> HarmonicExpr::eval_stream(long mu) const {
    SumCache cache{{}, mu};
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(mu) + 1);
    for (long n = 0; n <= mu; ++n)
        out.push_back(eval_node(*root_, n, cache));
    return out;
}

} // namespace momenta
