#pragma once

#include <functional>
#include <vector>

#include "gd/dyadic.hpp"
#include "gd/starpoly.hpp"

namespace gd {

// Chebyshev series on [0,1]: the stored part is sum c[i] * T_i(2t - 1),
// and err is a rigorous sup-norm radius covering everything the stored
// part does not (rounding, truncated tails, fitting residuals). Every
// operation keeps err sound, so a ChebSeries always encloses the function
// it stands for.
struct ChebSeries {
    std::vector<Dy> c;
    Rational err = 0;

    bool stored_zero() const { return c.empty(); }
    size_t degree() const { return c.empty() ? 0 : c.size() - 1; }

    static ChebSeries zero() { return {}; }
    static ChebSeries constant(const Rational& v, unsigned prec);
    // from univariate monomial coefficients (index = power of t), exact
    // conversion then rounding
    static ChebSeries from_monomial(const std::vector<Rational>& mono, unsigned prec);
    static ChebSeries from_rationals(const std::vector<Rational>& cheb, unsigned prec);

    std::vector<Rational> rational_coeffs() const;
    // exact monomial expansion of the stored part (err is not representable)
    std::vector<Rational> monomial_coeffs() const;
    // exact value of the stored part at a rational t
    Rational eval_stored(const Rational& t) const;
    Rational coeff_abs_sum() const;
    Rational sup_upper() const { return coeff_abs_sum() + err; }
};

ChebSeries cheb_add(const ChebSeries& a, const ChebSeries& b);
ChebSeries cheb_sub(const ChebSeries& a, const ChebSeries& b);
ChebSeries cheb_scale(const ChebSeries& a, const Rational& q, unsigned prec);
ChebSeries cheb_add_const(const ChebSeries& a, const Rational& q, unsigned prec);
ChebSeries cheb_mul(const ChebSeries& a, const ChebSeries& b);
ChebSeries cheb_truncate(const ChebSeries& a, size_t max_degree);
ChebSeries cheb_round(const ChebSeries& a, unsigned prec);
// derivative of the stored part with respect to t (err does not survive
// differentiation and is dropped; callers own that reasoning)
ChebSeries cheb_derivative_stored(const ChebSeries& a);
// univariate polynomial composition q(a) by Horner in series arithmetic,
// truncating and rounding every step
ChebSeries cheb_compose_univariate(const std::vector<Rational>& q, const ChebSeries& a,
                                   size_t max_degree, unsigned prec);

// Certified pointwise/box evaluation of a series. Uses fixed-point Clenshaw
// with an a-priori rounding error bound plus first/second derivative data
// for mean-value tightening on boxes.
class ChebEvaluator {
public:
    explicit ChebEvaluator(const ChebSeries& s);

    // enclosure of the represented function over box (t-interval in [0,1])
    QIv enclose(const QIv& box) const;
    QIv at_point(const Rational& t) const;

private:
    std::vector<Int> cfix_, dfix_;
    Rational err_;
    Rational second_sum_; // bound on |f''| in x-units
    Rational efix_, efix1_;
};

// Certified enclosure of sup of fn over domain: returns [lo, hi] with
// hi - lo <= tol, sup in [lo, hi]. fn(box) must enclose the function on box
// and boxes passed in have dyadic endpoints. Throws BudgetError.
struct SupEnclosure {
    Rational lo, hi;
};
using BoxFn = std::function<QIv(const QIv&)>;
SupEnclosure sup_bb(const QIv& domain, const BoxFn& fn, const Rational& tol, size_t budget);

} // namespace gd
