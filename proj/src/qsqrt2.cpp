#include "tricausal/qsqrt2.hpp"

#include "tricausal/errors.hpp"

#include <boost/integer/common_factor_rt.hpp>

namespace tricausal {

using boost::multiprecision::cpp_int;

QSqrt2& QSqrt2::operator/=(const QSqrt2& o) {
    // (a + b r)^-1 = (a - b r) / (a^2 - 2 b^2); the norm vanishes only at zero.
    Rational norm = o.a_ * o.a_ - 2 * o.b_ * o.b_;
    if (norm == 0) throw InputError("division by zero in Q(sqrt2)");
    *this *= QSqrt2(o.a_ / norm, -o.b_ / norm);
    return *this;
}

int QSqrt2::sign() const {
    int sa = a_.sign();
    int sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 with 2 b^2.
    Rational lhs = a_ * a_;
    Rational rhs = 2 * b_ * b_;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sa : sb;
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

double QSqrt2::to_double() const {
    return tricausal::to_double(a_) + tricausal::to_double(b_) * 1.4142135623730950488;
}

std::string QSqrt2::str() const {
    cpp_int da = boost::multiprecision::denominator(a_);
    cpp_int db = boost::multiprecision::denominator(b_);
    cpp_int d = da / boost::multiprecision::gcd(da, db) * db;
    cpp_int na = boost::multiprecision::numerator(a_) * (d / da);
    cpp_int nb = boost::multiprecision::numerator(b_) * (d / db);

    auto sqrt_term = [](const cpp_int& coef) {
        cpp_int mag = coef < 0 ? cpp_int(-coef) : coef;
        std::string s = mag == 1 ? "sqrt2" : mag.str() + "*sqrt2";
        return s;
    };
    std::string num;
    int terms = 0;
    if (na != 0) {
        num = na.str();
        ++terms;
    }
    if (nb != 0) {
        if (terms > 0) num += nb < 0 ? "-" : "+";
        else if (nb < 0) num += "-";
        num += sqrt_term(nb);
        ++terms;
    }
    if (terms == 0) return "0";
    if (d == 1) return num;
    if (terms == 2) return "(" + num + ")/" + d.str();
    return num + "/" + d.str();
}

}  // namespace tricausal
