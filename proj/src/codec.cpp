#include "gd/codec.hpp"

#include <vector>

// Bit layout.
//
// A natural j names the bitstring b with binary(j+1) = "1" + b (so 0 names
// the empty string and every string is named once). The string is a
// sequence of complete terms; a truncated trailing field drops its whole
// term, which keeps decoding total.
//
//   term        := monomial coefficient
//   monomial    := gamma0(V) { gamma0(delta) gamma0(exp-1) } * V
//   coefficient := qcode(re) qcode(im)
//   qcode(q)    := gamma0(zigzag(num q)) gamma0(den q - 1)
//
// gamma0(n) is the Elias gamma code of n+1. Variable factors are keyed by
// kappa = 2*index + starred; the first delta is kappa_0 and each later one
// is kappa_i - kappa_{i-1} - 1, so decoded monomials are always in strictly
// increasing kappa order, i.e. canonical. zigzag maps 0, 1, -1, 2, -2, ...
// to 0, 1, 2, 3, 4, ...

namespace gd {

namespace {

struct BitReader {
    const std::vector<bool>& bits;
    size_t pos = 0;

    bool eof() const { return pos >= bits.size(); }
    int next() { return eof() ? -1 : static_cast<int>(bits[pos++]); }
};

// Elias gamma of n+1; returns false on truncation.
bool read_gamma0(BitReader& r, Int& out) {
    size_t zeros = 0;
    for (;;) {
        int b = r.next();
        if (b < 0) return false;
        if (b) break;
        ++zeros;
    }
    Int v = 1;
    for (size_t i = 0; i < zeros; ++i) {
        int b = r.next();
        if (b < 0) return false;
        v <<= 1;
        if (b) v |= 1;
    }
    out = v - 1;
    return true;
}

void write_gamma0(std::vector<bool>& bits, const Int& n) {
    Int v = n + 1;
    size_t len = mpz_sizeinbase(v.get_mpz_t(), 2);
    for (size_t i = 0; i + 1 < len; ++i)
        bits.push_back(false);
    for (size_t i = len; i-- > 0;)
        bits.push_back(mpz_tstbit(v.get_mpz_t(), i) != 0);
}

Int zigzag(const Int& n) { return n > 0 ? Int(2 * n - 1) : Int(-2 * n); }

Int unzigzag(const Int& m) {
    if (mpz_odd_p(m.get_mpz_t())) return (m + 1) / 2;
    return -(m / 2);
}

bool read_rational(BitReader& r, Rational& out) {
    Int zn, dm;
    if (!read_gamma0(r, zn) || !read_gamma0(r, dm)) return false;
    out = make_rational(unzigzag(zn), dm + 1);
    return true;
}

void write_rational(std::vector<bool>& bits, const Rational& q) {
    write_gamma0(bits, zigzag(q.get_num()));
    write_gamma0(bits, Int(q.get_den() - 1));
}

std::vector<bool> code_to_bits(const Int& code) {
    Int v = code + 1;
    size_t len = mpz_sizeinbase(v.get_mpz_t(), 2);
    std::vector<bool> bits;
    bits.reserve(len - 1);
    for (size_t i = len - 1; i-- > 0;)
        bits.push_back(mpz_tstbit(v.get_mpz_t(), i) != 0);
    return bits;
}

Int bits_to_code(const std::vector<bool>& bits) {
    Int v = 0;
    mpz_setbit(v.get_mpz_t(), bits.size());
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) mpz_setbit(v.get_mpz_t(), bits.size() - 1 - i);
    return v - 1;
}

} // namespace

StarPoly decode(const Int& code) {
    std::vector<bool> bits = code_to_bits(code);
    BitReader r{bits};
    StarPoly p;
    while (!r.eof()) {
        Int nfactors;
        if (!read_gamma0(r, nfactors)) break;
        std::vector<std::pair<Int, Int>> factors;
        Int kappa = -1;
        bool ok = true;
        for (Int i = 0; i < nfactors; ++i) {
            Int delta, em1;
            if (!read_gamma0(r, delta) || !read_gamma0(r, em1)) {
                ok = false;
                break;
            }
            kappa += delta + 1;
            factors.emplace_back(kappa, em1 + 1);
        }
        if (!ok) break;
        Rational re, im;
        if (!read_rational(r, re) || !read_rational(r, im)) break;
        StarMonomial m;
        m.factors = std::move(factors);
        p = p + StarPoly::from_terms({{m, GaussianRational(re, im)}});
    }
    return p;
}

Int encode(const StarPoly& p) {
    std::vector<bool> bits;
    for (const auto& [m, c] : p.terms()) {
        write_gamma0(bits, Int(static_cast<long>(m.factors.size())));
        Int prev = -1;
        for (const auto& [kappa, exp] : m.factors) {
            write_gamma0(bits, Int(kappa - prev - 1));
            write_gamma0(bits, Int(exp - 1));
            prev = kappa;
        }
        write_rational(bits, c.re);
        write_rational(bits, c.im);
    }
    return bits_to_code(bits);
}

CombinedCodes combine_codes(const Int& m, const Int& n) {
    StarPoly p = decode(m), q = decode(n);
    return {encode(p + q), encode(p * q), encode(p.star())};
}

} // namespace gd
