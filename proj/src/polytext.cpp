#include "gd/polytext.hpp"

#include <cctype>

namespace gd {

namespace {

std::string coeff_to_text(const GaussianRational& c) {
    if (c.is_real()) return rational_to_string(c.re);
    if (c.re == 0) return "(" + rational_to_string(c.im) + "i)";
    Rational aim = c.im < 0 ? Rational(-c.im) : c.im;
    return "(" + rational_to_string(c.re) + (c.im < 0 ? "-" : "+") + rational_to_string(aim) +
           "i)";
}

std::string monomial_to_text(const StarMonomial& m) {
    std::string out;
    for (const auto& [kappa, exp] : m.factors) {
        if (!out.empty()) out += " * ";
        out += "x" + kappa_index(kappa).get_str();
        if (exp > 1) out += "^" + exp.get_str();
        if (kappa_starred(kappa)) out += "*";
    }
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    StarPoly run() {
        StarPoly p = parse_expr();
        skip_ws();
        if (pos_ < s_.size()) fail("unexpected trailing input");
        return p;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const { throw PolyParseError(pos_, what); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    int peek() const { return pos_ < s_.size() ? static_cast<unsigned char>(s_[pos_]) : -1; }

    bool starts_atom(int c) const {
        return c == 'x' || c == 'i' || c == '(' || std::isdigit(c);
    }

    StarPoly parse_expr() {
        skip_ws();
        bool neg = false;
        while (peek() == '+' || peek() == '-') {
            if (s_[pos_] == '-') neg = !neg;
            ++pos_;
            skip_ws();
        }
        StarPoly acc = parse_product();
        if (neg) acc = -acc;
        for (;;) {
            skip_ws();
            int c = peek();
            if (c != '+' && c != '-') break;
            bool minus = c == '-';
            ++pos_;
            skip_ws();
            while (peek() == '+' || peek() == '-') {
                if (s_[pos_] == '-') minus = !minus;
                ++pos_;
                skip_ws();
            }
            StarPoly t = parse_product();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    StarPoly parse_product() {
        StarPoly acc = StarPoly::one();
        StarPoly last = parse_factor();
        for (;;) {
            skip_ws();
            int c = peek();
            if (c == '*') {
                // lookahead decides: multiplication if a factor follows,
                // involution of the last factor otherwise
                size_t after = pos_ + 1;
                while (after < s_.size() && std::isspace(static_cast<unsigned char>(s_[after])))
                    ++after;
                int c2 = after < s_.size() ? static_cast<unsigned char>(s_[after]) : -1;
                ++pos_;
                if (starts_atom(c2)) {
                    acc = acc * last;
                    last = parse_factor();
                } else {
                    last = last.star();
                }
            } else if (starts_atom(c)) {
                acc = acc * last;
                last = parse_factor();
            } else {
                break;
            }
        }
        return acc * last;
    }

    StarPoly parse_factor() {
        skip_ws();
        StarPoly base = parse_atom();
        for (;;) {
            skip_ws();
            if (peek() != '^') break;
            ++pos_;
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                base = base.star();
                continue;
            }
            if (!std::isdigit(peek())) fail("expected exponent or '*' after '^'");
            Int e = parse_natural();
            StarPoly acc = StarPoly::one();
            if (e > 4096) fail("exponent too large");
            for (Int i = 0; i < e; ++i)
                acc = acc * base;
            base = acc;
        }
        return base;
    }

    StarPoly parse_atom() {
        skip_ws();
        int c = peek();
        if (c == '(') {
            ++pos_;
            StarPoly inner = parse_expr();
            skip_ws();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (c == 'x') {
            ++pos_;
            if (!std::isdigit(peek())) fail("expected indeterminate index after 'x'");
            return StarPoly::variable(parse_natural());
        }
        if (c == 'i') {
            ++pos_;
            return StarPoly::constant(GaussianRational(Rational(0), Rational(1)));
        }
        if (std::isdigit(c)) {
            Rational q = parse_rational();
            // "3i" and "3/4i": attached imaginary unit
            if (peek() == 'i') {
                ++pos_;
                return StarPoly::constant(GaussianRational(Rational(0), q));
            }
            return StarPoly::constant(q);
        }
        fail("expected polynomial atom");
    }

    Int parse_natural() {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (pos_ == start) fail("expected number");
        return Int(s_.substr(start, pos_ - start));
    }

    Rational parse_rational() {
        Int num = parse_natural();
        if (peek() == '/') {
            size_t slash = pos_;
            ++pos_;
            if (!std::isdigit(peek())) {
                pos_ = slash;
                fail("expected denominator after '/'");
            }
            Int den = parse_natural();
            if (den == 0) {
                pos_ = slash;
                fail("zero denominator");
            }
            return make_rational(num, den);
        }
        return Rational(num);
    }
};

} // namespace

std::string poly_to_text(const StarPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : p.terms()) {
        if (!out.empty()) out += " + ";
        out += coeff_to_text(c);
        if (!m.is_one()) out += " * " + monomial_to_text(m);
    }
    return out;
}

StarPoly poly_from_text(const std::string& text) { return Parser(text).run(); }

} // namespace gd
