#pragma once

#include <map>
#include <string>
#include <vector>

#include "gd/starpoly.hpp"

namespace gd {

// Enclosure of sqrt(x) with width < 2^-k, x >= 0.
QIv sqrt_enclosure(const Rational& x, unsigned k);

// A concrete compact metric space together with the generators of C(X)
// used as ground truth. Generator 0 is always the constant 1; polynomial
// indeterminate x_j refers to generator j mod gen_count.
struct Space {
    enum class Kind { Finite, Interval, Circle };

    Kind kind;
    std::string name;
    size_t gen_count;
    // Finite only: values[point][generator], exact
    std::vector<std::vector<GaussianRational>> values;

    static Space point();
    static Space two_points();
    static Space three_points();
    static Space interval(); // [0,1] with generators 1, t
    static Space circle();   // S^1 in C with generators 1, z
    static const Space* builtin(const std::string& name);
    static std::vector<std::string> builtin_names();

    size_t finite_count() const { return values.size(); }
    size_t chart_count() const;
    // chart parameter domain: Interval [0,1]; Circle [-1,1] per chart
    QIv chart_domain(size_t chart) const;
    // exact value of generator g at a rational chart parameter
    GaussianRational gen_at(size_t chart, size_t gen, const Rational& param) const;
    // space distance between two params on one chart is at most this times
    // the parameter distance
    Rational chart_metric_lip(size_t chart) const;

    // exact evaluation of a code polynomial at every point of a finite space
    std::vector<GaussianRational> finite_values(const StarPoly& p) const;
    // reduce a code polynomial on the interval space to univariate
    // coefficients in t (index = degree)
    std::vector<GaussianRational> interval_coeffs(const StarPoly& p) const;
    // reduce a code polynomial on the circle to a Laurent polynomial in z
    std::map<long, GaussianRational> circle_laurent(const StarPoly& p) const;

    // exact evaluation at one chart parameter (any kind)
    GaussianRational value_at(const StarPoly& p, size_t chart, const Rational& param) const;

    struct GridPoint {
        size_t chart;
        Rational param;
    };
    // sample points forming a 2^-k net of the space
    std::vector<GridPoint> dense_grid(unsigned k) const;
};

} // namespace gd
