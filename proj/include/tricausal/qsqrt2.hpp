#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>

namespace tricausal {

using Rational = boost::multiprecision::cpp_rational;

// Exact element a + b*sqrt(2) of the field Q(sqrt 2).
class QSqrt2 {
public:
    QSqrt2() = default;
    QSqrt2(int v) : a_(v) {}
    QSqrt2(Rational a, Rational b = 0) : a_(std::move(a)), b_(std::move(b)) {}

    static QSqrt2 sqrt2() { return {0, 1}; }

    const Rational& rational_part() const { return a_; }
    const Rational& sqrt2_part() const { return b_; }
    bool is_rational() const { return b_ == 0; }

    QSqrt2& operator+=(const QSqrt2& o) { a_ += o.a_; b_ += o.b_; return *this; }
    QSqrt2& operator-=(const QSqrt2& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
    QSqrt2& operator*=(const QSqrt2& o) {
        Rational a = a_ * o.a_ + 2 * b_ * o.b_;
        Rational b = a_ * o.b_ + b_ * o.a_;
        a_ = std::move(a);
        b_ = std::move(b);
        return *this;
    }
    QSqrt2& operator/=(const QSqrt2& o);

    friend QSqrt2 operator+(QSqrt2 x, const QSqrt2& y) { return x += y; }
    friend QSqrt2 operator-(QSqrt2 x, const QSqrt2& y) { return x -= y; }
    friend QSqrt2 operator*(QSqrt2 x, const QSqrt2& y) { return x *= y; }
    friend QSqrt2 operator/(QSqrt2 x, const QSqrt2& y) { return x /= y; }
    QSqrt2 operator-() const { return {-a_, -b_}; }

    // -1, 0 or +1, decided exactly.
    int sign() const;
    friend bool operator==(const QSqrt2& x, const QSqrt2& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend std::strong_ordering operator<=>(const QSqrt2& x, const QSqrt2& y) {
        int s = (x - y).sign();
        return s < 0 ? std::strong_ordering::less
                     : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    double to_double() const;
    // "(2+sqrt2)/32", "-1/16", "sqrt2", ...
    std::string str() const;

private:
    Rational a_{0};
    Rational b_{0};
};

inline double to_double(double x) { return x; }
inline double to_double(const QSqrt2& x) { return x.to_double(); }
double to_double(const Rational& x);

}  // namespace tricausal
