#include "gd/rational.hpp"

namespace gd {

std::string rational_to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::optional<Rational> rational_from_string(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::string num = s, den = "1";
    if (auto slash = s.find('/'); slash != std::string::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
        if (num.empty() || den.empty() || den.find('/') != std::string::npos)
            return std::nullopt;
    }
    try {
        Int n(num), d(den);
        if (d == 0) return std::nullopt;
        return make_rational(n, d);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

Rational round_dyadic(const Rational& q, unsigned bits, int dir) {
    // q * 2^bits = quot + rem/den with 0 <= rem < den
    Int scaled_num;
    mpz_mul_2exp(scaled_num.get_mpz_t(), q.get_num().get_mpz_t(), bits);
    Int quot, rem;
    mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), scaled_num.get_mpz_t(),
                q.get_den().get_mpz_t());
    if (rem != 0) {
        if (dir > 0) {
            quot += 1;
        } else if (dir == 0) {
            if (2 * rem >= q.get_den()) quot += 1;
        }
    }
    Rational out(quot);
    mpz_mul_2exp(out.get_den_mpz_t(), out.get_den_mpz_t(), bits);
    out.canonicalize();
    return out;
}

} // namespace gd
