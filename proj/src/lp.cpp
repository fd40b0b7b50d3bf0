#include "tricausal/lp.hpp"

#include "tricausal/errors.hpp"
#include "tricausal/kernels.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tricausal {
namespace {

using boost::multiprecision::cpp_int;

// Dense explicit-inverse revised simplex for phase one:
//   min sum(a)  s.t.  A x + a = b,  x, a >= 0,  b >= 0.
class PhaseOne {
public:
    PhaseOne(const SparseIncidence& a, std::span<const double> b, const LpOptions& opt)
        : a_(a), b_(b.begin(), b.end()), opt_(opt), m_(a.rows), n_(a.cols) {
        max_iter_ = opt.max_iterations ? opt.max_iterations : 50 * (m_ + 1) + 10000;
        refactor_ = opt.refactor_interval > 0
                        ? static_cast<std::uint64_t>(opt.refactor_interval)
                        : std::max<std::uint64_t>(100, m_ / 2);
        segment_ = std::max<std::uint64_t>(n_ / 8, 4096);
        devex_ = opt.pricing == Pricing::Devex ||
                 (opt.pricing == Pricing::Automatic && a.nonzeros() <= 4 * static_cast<std::uint64_t>(m_) * m_);
        if (devex_) weight_.assign(n_, 1.0);
    }

    void run() {
        basis_.resize(m_);
        basic_pos_.assign(n_, -1);
        for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;
        binv_.assign(m_ * m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
        x_ = b_;
        cost_.assign(m_, 1.0);
        pi_.assign(m_, 0.0);
        alpha_.assign(m_, 0.0);

        std::uint64_t since_refactor = 0;
        int degenerate_run = 0;
        bool bland = false;
        for (;;) {
            if (iterations_ >= max_iter_) {
                throw IndeterminateError("simplex iteration limit reached", objective(), 0.0);
            }
            compute_duals();
            std::int64_t q = bland ? price_bland() : devex_ ? price_devex() : price_partial();
            if (q < 0) {
                if (since_refactor == 0) break;
                // Confirm optimality on a fresh factorization.
                refactor();
                since_refactor = 0;
                continue;
            }
            ftran(static_cast<std::uint64_t>(q));
            std::int64_t r = ratio_test(bland);
            if (r < 0) {
                // Phase one is bounded below; this only happens when round-off
                // made a column look improving. Refactor and retry once.
                if (since_refactor == 0) {
                    throw IndeterminateError("unbounded ray in phase one", objective(), 0.0);
                }
                refactor();
                since_refactor = 0;
                continue;
            }
            if (devex_) update_weights(static_cast<std::uint64_t>(q), static_cast<std::size_t>(r));
            double theta = pivot(static_cast<std::uint64_t>(q), static_cast<std::size_t>(r));
            ++iterations_;
            if (theta <= 1e-12) {
                if (++degenerate_run > 50) bland = true;
            } else {
                degenerate_run = 0;
                bland = false;
            }
            if (++since_refactor >= refactor_) {
                refactor();
                since_refactor = 0;
            }
        }
        compute_duals();
    }

    double objective() const {
        double w = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] >= n_) w += x_[i];
        }
        return w;
    }

    std::vector<double> primal() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) x[basis_[i]] = std::max(0.0, x_[i]);
        }
        return x;
    }

    const std::vector<double>& duals() const { return pi_; }
    std::uint64_t iterations() const { return iterations_; }
    std::uint64_t refactorizations() const { return refactorizations_; }

private:
    double* col(std::size_t c) { return binv_.data() + c * m_; }

    void compute_duals() {
        const auto& k = kernels::active();
        for (std::size_t c = 0; c < m_; ++c) pi_[c] = k.dot(cost_.data(), col(c), m_);
    }

    double reduced_cost(std::uint64_t j) const {
        double d = 0.0;
        for (auto p = a_.col_ptr[j]; p < a_.col_ptr[j + 1]; ++p) d -= pi_[a_.row_idx[p]] * a_.values[p];
        return d;
    }

    // Dantzig pricing over cyclic column segments; stops at the first segment
    // that yields an improving column.
    std::int64_t price_partial() {
        std::int64_t best = -1;
        double best_d = -opt_.optimality_tol;
        std::uint64_t scanned = 0;
        while (scanned < n_) {
            std::uint64_t len = std::min(segment_, n_ - scanned);
            for (std::uint64_t t = 0; t < len; ++t) {
                std::uint64_t j = (cursor_ + t) % n_;
                if (basic_pos_[j] >= 0) continue;
                double d = reduced_cost(j);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<std::int64_t>(j);
                }
            }
            cursor_ = (cursor_ + len) % n_;
            scanned += len;
            if (best >= 0) break;
        }
        return best;
    }

    // Largest d_j^2 / w_j over all improving columns.
    std::int64_t price_devex() const {
        std::int64_t best = -1;
        double best_score = 0.0;
        for (std::uint64_t j = 0; j < n_; ++j) {
            if (basic_pos_[j] >= 0) continue;
            const double d = reduced_cost(j);
            if (d >= -opt_.optimality_tol) continue;
            const double score = d * d / weight_[j];
            if (score > best_score) {
                best_score = score;
                best = static_cast<std::int64_t>(j);
            }
        }
        return best;
    }

    // Devex update from the pivot row, before B^-1 changes.
    void update_weights(std::uint64_t q, std::size_t r) {
        row_.resize(m_);
        for (std::size_t c = 0; c < m_; ++c) row_[c] = binv_[c * m_ + r];
        const double arq = alpha_[r];
        const double wq = weight_[q];
        for (std::uint64_t j = 0; j < n_; ++j) {
            if (basic_pos_[j] >= 0 || j == q) continue;
            double a = 0.0;
            for (auto p = a_.col_ptr[j]; p < a_.col_ptr[j + 1]; ++p) a += row_[a_.row_idx[p]] * a_.values[p];
            if (a != 0.0) weight_[j] = std::max(weight_[j], (a / arq) * (a / arq) * wq);
        }
        if (basis_[r] < n_) weight_[basis_[r]] = std::max(wq / (arq * arq), 1.0);
    }

    std::int64_t price_bland() {
        for (std::uint64_t j = 0; j < n_; ++j) {
            if (basic_pos_[j] < 0 && reduced_cost(j) < -opt_.optimality_tol) {
                return static_cast<std::int64_t>(j);
            }
        }
        return -1;
    }

    void ftran(std::uint64_t q) {
        std::fill(alpha_.begin(), alpha_.end(), 0.0);
        const auto& k = kernels::active();
        for (auto p = a_.col_ptr[q]; p < a_.col_ptr[q + 1]; ++p) {
            k.axpy(static_cast<double>(a_.values[p]), col(a_.row_idx[p]), alpha_.data(), m_);
        }
    }

    std::int64_t ratio_test(bool bland) const {
        constexpr double kPivotTol = 1e-9;
        if (bland) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (alpha_[i] > kPivotTol) best = std::min(best, std::max(x_[i], 0.0) / alpha_[i]);
            }
            std::int64_t r = -1;
            for (std::size_t i = 0; i < m_; ++i) {
                if (alpha_[i] <= kPivotTol || std::max(x_[i], 0.0) / alpha_[i] > best + 1e-14) continue;
                if (r < 0 || basis_[i] < basis_[static_cast<std::size_t>(r)]) r = static_cast<std::int64_t>(i);
            }
            return r;
        }
        // Two-pass Harris test: relaxed bound first, then the largest pivot
        // among rows that attain it.
        constexpr double kRelax = 1e-10;
        double bound = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m_; ++i) {
            if (alpha_[i] > kPivotTol) bound = std::min(bound, (std::max(x_[i], 0.0) + kRelax) / alpha_[i]);
        }
        if (!std::isfinite(bound)) return -1;
        std::int64_t r = -1;
        double best_alpha = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (alpha_[i] <= kPivotTol) continue;
            if (std::max(x_[i], 0.0) / alpha_[i] <= bound && alpha_[i] > best_alpha) {
                best_alpha = alpha_[i];
                r = static_cast<std::int64_t>(i);
            }
        }
        return r;
    }

    double pivot(std::uint64_t q, std::size_t r) {
        const double ar = alpha_[r];
        const double theta = std::max(x_[r], 0.0) / ar;
        const auto& k = kernels::active();
        if (theta != 0.0) k.axpy(-theta, alpha_.data(), x_.data(), m_);
        x_[r] = theta;
        for (auto& v : x_) {
            if (v < 0.0 && v > -1e-11) v = 0.0;
        }
        for (std::size_t c = 0; c < m_; ++c) {
            double* bc = col(c);
            double t = bc[r] / ar;
            if (t != 0.0) {
                k.axpy(-t, alpha_.data(), bc, m_);
                bc[r] = t;
            }
        }
        if (basis_[r] < n_) basic_pos_[basis_[r]] = -1;
        basis_[r] = q;
        basic_pos_[q] = static_cast<std::int64_t>(r);
        cost_[r] = 0.0;
        return theta;
    }

    void refactor() {
        ++refactorizations_;
        Eigen::MatrixXd bmat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
        for (std::size_t i = 0; i < m_; ++i) {
            auto v = basis_[i];
            if (v >= n_) {
                bmat(static_cast<Eigen::Index>(v - n_), static_cast<Eigen::Index>(i)) = 1.0;
            } else {
                for (auto p = a_.col_ptr[v]; p < a_.col_ptr[v + 1]; ++p) {
                    bmat(a_.row_idx[p], static_cast<Eigen::Index>(i)) = a_.values[p];
                }
            }
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(bmat);
        Eigen::MatrixXd inv = lu.inverse();
        // Eigen is column-major, matching the layout of binv_.
        std::copy(inv.data(), inv.data() + m_ * m_, binv_.begin());
        std::fill(x_.begin(), x_.end(), 0.0);
        const auto& k = kernels::active();
        for (std::size_t c = 0; c < m_; ++c) {
            if (b_[c] != 0.0) k.axpy(b_[c], col(c), x_.data(), m_);
        }
        for (auto& v : x_) {
            if (v < 0.0 && v > -1e-9) v = 0.0;
        }
    }

    const SparseIncidence& a_;
    std::vector<double> b_;
    LpOptions opt_;
    std::size_t m_;
    std::uint64_t n_;
    std::uint64_t max_iter_ = 0;
    std::uint64_t refactor_ = 0;
    std::uint64_t segment_ = 0;
    std::uint64_t cursor_ = 0;
    std::uint64_t iterations_ = 0;
    std::uint64_t refactorizations_ = 0;
    bool devex_ = false;
    std::vector<double> weight_;  // Devex reference weights per structural column
    std::vector<double> row_;     // pivot row of B^-1

    std::vector<std::uint64_t> basis_;     // row -> variable (>= n_ is artificial)
    std::vector<std::int64_t> basic_pos_;  // structural variable -> row or -1
    std::vector<double> binv_;             // column-major B^-1
    std::vector<double> x_;
    std::vector<double> cost_;
    std::vector<double> pi_;
    std::vector<double> alpha_;
};

struct Reduced {
    SparseIncidence matrix;
    std::vector<double> rhs;
    std::vector<std::uint64_t> rows;  // reduced row -> original row
    std::vector<std::uint64_t> cols;  // reduced col -> original col
};

// Rows with zero right-hand side force every column touching them to zero;
// drop both.
Reduced presolve(const FeasibilityProblem& p) {
    const auto& a = p.matrix;
    std::vector<std::int64_t> row_map(a.rows, -1);
    Reduced red;
    for (std::uint64_t i = 0; i < a.rows; ++i) {
        if (p.rhs[i] > 0.0) {
            row_map[i] = static_cast<std::int64_t>(red.rows.size());
            red.rows.push_back(i);
            red.rhs.push_back(p.rhs[i]);
        }
    }
    red.matrix.rows = red.rows.size();
    for (std::uint64_t j = 0; j < a.cols; ++j) {
        bool keep = true;
        for (auto k = a.col_ptr[j]; k < a.col_ptr[j + 1] && keep; ++k) {
            if (a.values[k] != 0 && row_map[a.row_idx[k]] < 0) keep = false;
        }
        if (!keep) continue;
        red.cols.push_back(j);
        for (auto k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) {
            if (a.values[k] == 0) continue;
            red.matrix.row_idx.push_back(static_cast<std::uint32_t>(row_map[a.row_idx[k]]));
            red.matrix.values.push_back(a.values[k]);
        }
        red.matrix.col_ptr.push_back(red.matrix.row_idx.size());
    }
    red.matrix.cols = red.cols.size();
    return red;
}

__int128 column_dot(const SparseIncidence& a, std::uint64_t j, const std::vector<std::int64_t>& y) {
    __int128 s = 0;
    for (auto k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) {
        s += static_cast<__int128>(y[a.row_idx[k]]) * a.values[k];
    }
    return s;
}

void divide_by_gcd(std::vector<std::int64_t>& y) {
    std::int64_t g = 0;
    for (auto v : y) g = std::gcd(g, v < 0 ? -v : v);
    if (g > 1) {
        for (auto& v : y) v /= g;
    }
}

std::int64_t ceil_div(__int128 num, __int128 den) {
    if (num <= 0) return 0;
    __int128 q = (num + den - 1) / den;
    if (q > std::numeric_limits<std::int64_t>::max() / 4) {
        throw VerificationError("certificate repair overflows 64-bit coefficients");
    }
    return static_cast<std::int64_t>(q);
}

// Raises every reduced-row coefficient by delta so that y^T A_j >= 0 for
// every column; all columns of an incidence matrix have positive sums.
void repair(std::vector<std::int64_t>& y, const SparseIncidence& a) {
    __int128 deficit = 0;
    __int128 min_sum = std::numeric_limits<std::int64_t>::max();
    for (std::uint64_t j = 0; j < a.cols; ++j) {
        deficit = std::max(deficit, -column_dot(a, j, y));
        __int128 s = 0;
        for (auto k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) s += a.values[k];
        min_sum = std::min(min_sum, s);
    }
    if (deficit <= 0) return;
    if (min_sum <= 0) return;
    std::int64_t delta = ceil_div(deficit, min_sum);
    for (auto& v : y) v += delta;
}

double dot_rhs(const std::vector<std::int64_t>& y, std::span<const double> rhs, double& scale) {
    long double s = 0.0L;
    std::int64_t mx = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        s += static_cast<long double>(y[i]) * rhs[i];
        mx = std::max(mx, y[i] < 0 ? -y[i] : y[i]);
    }
    scale = static_cast<double>(mx);
    return static_cast<double>(s);
}

}  // namespace

std::pair<std::int64_t, std::int64_t> snap_rational(double x, std::int64_t max_den) {
    if (!std::isfinite(x)) throw InputError("cannot snap a non-finite value");
    bool neg = x < 0;
    long double v = std::fabs(static_cast<long double>(x));
    // Convergents h/k of the continued fraction, with the semiconvergent
    // check at the bound (same rule as Python's Fraction.limit_denominator).
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    long double r = v;
    for (int it = 0; it < 64; ++it) {
        long double a = std::floor(r);
        if (a > 4e18L) break;
        auto ai = static_cast<std::int64_t>(a);
        std::int64_t k2 = k0 + ai * k1;
        if (k2 > max_den) {
            std::int64_t t = (max_den - k0) / k1;
            std::int64_t hb = h0 + t * h1, kb = k0 + t * k1;
            long double err_a = std::fabs(v - static_cast<long double>(h1) / k1);
            long double err_b = std::fabs(v - static_cast<long double>(hb) / kb);
            if (err_b < err_a) {
                h1 = hb;
                k1 = kb;
            }
            break;
        }
        std::int64_t h2 = h0 + ai * h1;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        long double frac = r - a;
        if (frac < 1e-18L) break;
        r = 1.0L / frac;
    }
    return {neg ? -h1 : h1, k1};
}

std::vector<std::int64_t> snap_to_integers(std::span<const double> y) {
    double scale = 0.0;
    for (double v : y) scale = std::max(scale, std::fabs(v));
    std::vector<std::int64_t> out(y.size(), 0);
    if (scale == 0.0) return out;
    constexpr std::int64_t kMaxDen = 1000000;
    std::vector<std::pair<std::int64_t, std::int64_t>> fr(y.size());
    cpp_int lcm = 1;
    const cpp_int limit = cpp_int(1) << 40;
    bool fixed_point = false;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double r = y[i] / scale;
        fr[i] = std::fabs(r) < 1e-9 ? std::pair<std::int64_t, std::int64_t>{0, 1} : snap_rational(r, kMaxDen);
        if (!fixed_point) {
            lcm = lcm / boost::multiprecision::gcd(lcm, cpp_int(fr[i].second)) * fr[i].second;
            if (lcm > limit) fixed_point = true;
        }
    }
    if (fixed_point) {
        for (std::size_t i = 0; i < y.size(); ++i) {
            out[i] = std::llround(y[i] / scale * 1073741824.0);
        }
    } else {
        auto l = lcm.convert_to<std::int64_t>();
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = fr[i].first * (l / fr[i].second);
    }
    divide_by_gcd(out);
    return out;
}

std::optional<VerifiedCertificate> certify_columns(
    std::vector<std::int64_t> y, std::uint64_t cols,
    const std::function<__int128(std::uint64_t)>& column_value, std::span<const double> rhs,
    double margin) {
    if (y.size() != rhs.size()) throw InputError("certificate length differs from rhs length");
    for (std::uint64_t j = 0; j < cols; ++j) {
        if (column_value(j) < 0) return std::nullopt;
    }
    double scale = 0.0;
    double value = dot_rhs(y, rhs, scale);
    if (scale == 0.0 || !(value / scale < -margin)) return std::nullopt;
    return VerifiedCertificate(std::move(y), value / scale);
}

std::optional<VerifiedCertificate> certify(std::vector<std::int64_t> y, const SparseIncidence& m,
                                           std::span<const double> rhs, double margin) {
    if (y.size() != m.rows) throw InputError("certificate length differs from row count");
    const std::vector<std::int64_t> yy = y;
    auto col = [&](std::uint64_t j) { return column_dot(m, j, yy); };
    return certify_columns(std::move(y), m.cols, col, rhs, margin);
}

CertificateCheck verify_certificate(std::span<const double> y, const SparseIncidence& m,
                                    std::span<const double> rhs, double margin) {
    if (y.size() != m.rows || rhs.size() != m.rows) throw InputError("certificate dimension mismatch");
    auto yi = snap_to_integers(y);
    for (std::uint64_t j = 0; j < m.cols; ++j) {
        if (column_dot(m, j, yi) < 0) return CertificateCheck::SnappingFailed;
    }
    double scale = 0.0;
    double value = dot_rhs(yi, rhs, scale);
    if (scale == 0.0 || !(value / scale < -margin)) return CertificateCheck::NotCertificate;
    return CertificateCheck::Valid;
}

FeasibilityResult solve_feasibility(const FeasibilityProblem& problem, const LpOptions& options,
                                    LpStats* stats) {
    const auto& a = problem.matrix;
    if (problem.rhs.size() != a.rows) throw InputError("rhs length differs from row count");
    for (double v : problem.rhs) {
        if (!(v >= 0.0)) throw InputError("rhs must be nonnegative");
    }
    for (std::uint64_t j = 0; j + 1 < a.col_ptr.size(); ++j) {
        for (auto k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) {
            if (a.values[k] < 0) throw InputError("incidence entries must be nonnegative");
        }
    }

    Reduced red = presolve(problem);
    PhaseOne lp(red.matrix, red.rhs, options);
    lp.run();
    if (stats) {
        stats->iterations = lp.iterations();
        stats->refactorizations = lp.refactorizations();
        stats->reduced_rows = red.matrix.rows;
        stats->reduced_cols = red.matrix.cols;
    }

    // Witness over the original columns.
    std::vector<double> x(a.cols, 0.0);
    auto xr = lp.primal();
    for (std::size_t j = 0; j < xr.size(); ++j) x[red.cols[j]] = xr[j];
    auto mx = a.multiply(x);
    double residual = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) residual = std::max(residual, std::fabs(mx[i] - problem.rhs[i]));
    if (residual <= options.feasibility_tol) return Feasible{std::move(x), residual};

    // Certificate: y = -pi on the reduced rows, repaired to exact validity,
    // then extended to the dropped zero rows.
    std::vector<double> yd(lp.duals().size());
    for (std::size_t i = 0; i < yd.size(); ++i) yd[i] = -lp.duals()[i];
    auto yr = snap_to_integers(yd);
    repair(yr, red.matrix);

    std::vector<std::int64_t> y(a.rows, 0);
    for (std::size_t i = 0; i < yr.size(); ++i) y[red.rows[i]] = yr[i];
    std::int64_t big = 0;
    std::vector<char> is_zero_row(a.rows, 0);
    for (std::uint64_t i = 0; i < a.rows; ++i) is_zero_row[i] = problem.rhs[i] > 0.0 ? 0 : 1;
    for (std::uint64_t j = 0; j < a.cols; ++j) {
        __int128 partial = 0, weight = 0;
        for (auto k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) {
            if (is_zero_row[a.row_idx[k]]) weight += a.values[k];
            else partial += static_cast<__int128>(y[a.row_idx[k]]) * a.values[k];
        }
        if (weight > 0 && partial < 0) big = std::max(big, ceil_div(-partial, weight));
    }
    for (std::uint64_t i = 0; i < a.rows; ++i) {
        if (is_zero_row[i]) y[i] = big;
    }
    divide_by_gcd(y);

    double scale = 0.0;
    double value = dot_rhs(y, problem.rhs, scale);
    auto cert = certify(std::move(y), a, problem.rhs, options.certificate_margin);
    if (!cert) {
        throw IndeterminateError("neither a feasible point nor a verified certificate was found", residual,
                                 scale > 0 ? value / scale : 0.0);
    }
    return Infeasible{std::move(*cert), lp.objective()};
}

}  // namespace tricausal
