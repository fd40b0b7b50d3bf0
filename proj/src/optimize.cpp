#include "tricausal/optimize.hpp"

#include "tricausal/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

namespace tricausal {

namespace {

// Counts evaluations and rejects non-finite values.
class Counted {
public:
    Counted(const Objective& f, std::uint64_t budget) : f_(f), budget_(budget) {}

    double operator()(const std::vector<double>& x) {
        ++count_;
        const double v = f_(x);
        if (!std::isfinite(v)) throw ObjectiveError("objective is not finite at a point with " + std::to_string(x.size()) + " coordinates");
        return v;
    }
    // Whether k more evaluations fit into the budget (the first one is free).
    bool can(std::uint64_t k) const { return count_ + k <= budget_ + 1; }
    std::uint64_t count() const { return count_; }
    void add(std::uint64_t k) { count_ += k; }
    const Objective& raw() const { return f_; }

private:
    const Objective& f_;
    std::uint64_t budget_;
    std::atomic<std::uint64_t> count_{0};
};

std::vector<double> axpy(const std::vector<double>& x, double a, const std::vector<double>& d) {
    std::vector<double> out(x);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += a * d[i];
    return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> gradient(Counted& f, const std::vector<double>& x, double h, unsigned workers) {
    auto checked = [&](const std::vector<double>& p) {
        const double v = f.raw()(p);
        if (!std::isfinite(v)) throw ObjectiveError("objective is not finite during differentiation");
        return v;
    };
    auto g = fd_gradient(checked, x, h, workers);
    f.add(2 * x.size());
    return g;
}

}  // namespace

std::string to_string(OptStatus s) {
    switch (s) {
        case OptStatus::Converged: return "converged";
        case OptStatus::BudgetExhausted: return "budget-exhausted";
        case OptStatus::LineSearchFailed: return "line-search-failed";
    }
    return "unknown";
}

std::vector<double> fd_gradient(const Objective& f, const std::vector<double>& x, double h, unsigned workers) {
    const std::size_t n = x.size();
    std::vector<double> g(n);
    auto work = [&](std::size_t begin, std::size_t end) {
        std::vector<double> p = x;
        for (std::size_t i = begin; i < end; ++i) {
            p[i] = x[i] + h;
            const double up = f(p);
            p[i] = x[i] - h;
            const double down = f(p);
            p[i] = x[i];
            g[i] = (up - down) / (2 * h);
        }
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    if (workers == 1) {
        work(0, n);
        return g;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                work(n * w / workers, n * (w + 1) / workers);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return g;
}

OptResult nelder_mead(const Objective& fn, const std::vector<double>& x0, const LocalOptions& opts) {
    Counted f(fn, opts.max_evaluations);
    const std::size_t n = x0.size();
    OptResult res;
    res.x = x0;
    res.f = f(x0);
    res.trace.push_back(res.f);
    if (n == 0) return res;
    if (!f.can(n)) {
        res.status = OptStatus::BudgetExhausted;
        res.evaluations = f.count();
        return res;
    }
    const double dn = static_cast<double>(n);
    const double alpha = 1.0, gamma = 1.0 + 2.0 / dn, rho = 0.75 - 1.0 / (2.0 * dn), sigma = 1.0 - 1.0 / dn;

    std::vector<std::vector<double>> v{x0};
    std::vector<double> fv{res.f};
    for (std::size_t i = 0; i < n; ++i) {
        auto p = x0;
        p[i] += opts.initial_step;
        fv.push_back(f(p));
        v.push_back(std::move(p));
    }
    std::vector<std::size_t> order(n + 1);
    res.status = OptStatus::BudgetExhausted;
    for (;;) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        {
            std::vector<std::vector<double>> v2;
            std::vector<double> f2;
            for (auto k : order) {
                v2.push_back(std::move(v[k]));
                f2.push_back(fv[k]);
            }
            v = std::move(v2);
            fv = std::move(f2);
        }
        res.trace.push_back(std::min(res.trace.back(), fv[0]));
        double diameter = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t k = 0; k < n; ++k) diameter = std::max(diameter, std::abs(v[i][k] - v[0][k]));
        }
        if (diameter < opts.xtol || fv[n] - fv[0] < opts.ftol) {
            res.status = OptStatus::Converged;
            break;
        }
        if (!f.can(2)) break;

        std::vector<double> c(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) c[k] += v[i][k] / dn;
        }
        auto toward = [&](const std::vector<double>& p, double t) {
            std::vector<double> out(n);
            for (std::size_t k = 0; k < n; ++k) out[k] = c[k] + t * (p[k] - c[k]);
            return out;
        };
        auto xr = toward(v[n], -alpha);
        const double fr = f(xr);
        if (fr < fv[0]) {
            auto xe = toward(xr, gamma);
            const double fe = f(xe);
            if (fe < fr) {
                v[n] = std::move(xe);
                fv[n] = fe;
            } else {
                v[n] = std::move(xr);
                fv[n] = fr;
            }
            continue;
        }
        if (fr < fv[n - 1]) {
            v[n] = std::move(xr);
            fv[n] = fr;
            continue;
        }
        const bool outside = fr < fv[n];
        auto xc = outside ? toward(xr, rho) : toward(v[n], rho);
        const double fc = f(xc);
        if (fc < (outside ? fr : fv[n])) {
            v[n] = std::move(xc);
            fv[n] = fc;
            continue;
        }
        if (!f.can(n)) break;
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t k = 0; k < n; ++k) v[i][k] = v[0][k] + sigma * (v[i][k] - v[0][k]);
            fv[i] = f(v[i]);
        }
    }
    const auto best = std::min_element(fv.begin(), fv.end()) - fv.begin();
    if (fv[best] < res.f) {
        res.x = v[best];
        res.f = fv[best];
    }
    res.evaluations = f.count();
    return res;
}

OptResult bfgs_fd(const Objective& fn, const std::vector<double>& x0, const LocalOptions& opts) {
    Counted f(fn, opts.max_evaluations);
    const std::size_t n = x0.size();
    OptResult res;
    res.x = x0;
    res.f = f(x0);
    res.trace.push_back(res.f);
    const std::uint64_t grad_cost = 2 * n;
    if (n == 0) return res;
    if (!f.can(grad_cost)) {
        res.status = OptStatus::BudgetExhausted;
        res.evaluations = f.count();
        return res;
    }
    const double c1 = 1e-4, c2 = 0.9;
    auto x = x0;
    double fx = res.f;
    auto g = gradient(f, x, opts.fd_step, opts.workers);
    // Inverse Hessian approximation, row-major.
    std::vector<double> H(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
    bool first = true;
    res.status = OptStatus::BudgetExhausted;

    for (;;) {
        if (max_abs(g) < opts.gtol) {
            res.status = OptStatus::Converged;
            break;
        }
        std::vector<double> d(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) d[i] -= H[i * n + k] * g[k];
        }
        double slope = dot(g, d);
        if (!(slope < 0)) {
            std::fill(H.begin(), H.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
            slope = dot(g, d);
        }

        // Strong Wolfe line search with bracketing and bisection zoom.
        const double a0 = first ? std::min(1.0, 1.0 / std::sqrt(dot(d, d))) : 1.0;
        double a_lo = 0.0, f_lo = fx;
        double a_hi = std::numeric_limits<double>::infinity();
        double a = a0;
        bool found = false, out_of_budget = false;
        std::vector<double> x_new, g_new;
        double f_new = fx;
        for (int it = 0; it < 60; ++it) {
            if (!f.can(1 + grad_cost)) {
                out_of_budget = true;
                break;
            }
            auto xt = axpy(x, a, d);
            const double ft = f(xt);
            if (ft > fx + c1 * a * slope || ft >= f_lo) {
                a_hi = a;
            } else {
                auto gt = gradient(f, xt, opts.fd_step, opts.workers);
                const double st = dot(gt, d);
                if (std::abs(st) <= -c2 * slope) {
                    x_new = std::move(xt);
                    g_new = std::move(gt);
                    f_new = ft;
                    found = true;
                    break;
                }
                if (st > 0) {
                    a_hi = a_lo;
                }
                a_lo = a;
                f_lo = ft;
                x_new = std::move(xt);
                g_new = std::move(gt);
                f_new = ft;
            }
            if (std::isinf(a_hi)) {
                a *= 2.0;
            } else {
                a = 0.5 * (a_lo + a_hi);
                if (std::abs(a_hi - a_lo) < 1e-16 * std::max(1.0, a)) break;
            }
        }
        // Accept a sufficient-decrease point even without the curvature condition.
        if (!found && !x_new.empty() && f_new < fx) found = true;
        if (!found) {
            res.status = out_of_budget ? OptStatus::BudgetExhausted : OptStatus::LineSearchFailed;
            break;
        }

        std::vector<double> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        const double ys = dot(y, s);
        const double df = fx - f_new;
        x = std::move(x_new);
        g = std::move(g_new);
        fx = f_new;
        res.trace.push_back(fx);
        if (ys > 1e-300) {
            if (first) {
                const double scale = ys / dot(y, y);
                for (auto& h : H) h *= scale;
            }
            const double r = 1.0 / ys;
            std::vector<double> Hy(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t k = 0; k < n; ++k) Hy[i] += H[i * n + k] * y[k];
            }
            const double yHy = dot(y, Hy);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t k = 0; k < n; ++k) {
                    H[i * n + k] += (1.0 + r * yHy) * r * s[i] * s[k] - r * (Hy[i] * s[k] + s[i] * Hy[k]);
                }
            }
        }
        first = false;
        if (df <= 1e-16 * std::max(1.0, std::abs(fx)) && max_abs(s) < 1e-14) {
            res.status = OptStatus::Converged;
            break;
        }
    }
    res.x = x;
    res.f = fx;
    res.evaluations = f.count();
    return res;
}

OptResult basin_hopping(const Objective& f, const std::vector<double>& x0, const BasinHoppingOptions& opts) {
    auto local = [&](const std::vector<double>& x) {
        return opts.local == LocalMethod::Bfgs ? bfgs_fd(f, x, opts.local_options)
                                               : nelder_mead(f, x, opts.local_options);
    };
    OptResult cur = local(x0);
    OptResult best = cur;
    std::uint64_t evaluations = cur.evaluations;
    std::vector<double> trace{best.f};
    if (opts.step > 0.0) {
        std::mt19937_64 rng(opts.seed);
        std::normal_distribution<double> noise(0.0, opts.step);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int hop = 0; hop < opts.hops; ++hop) {
            auto x = cur.x;
            for (auto& v : x) v += noise(rng);
            const double u = unit(rng);
            OptResult r;
            try {
                r = local(x);
            } catch (const ObjectiveError&) {
                trace.push_back(best.f);
                continue;
            }
            evaluations += r.evaluations;
            const bool accept = r.f < cur.f ||
                                (opts.temperature > 0.0 && u < std::exp(-(r.f - cur.f) / opts.temperature));
            if (r.f < best.f) best = r;
            if (accept) cur = std::move(r);
            trace.push_back(best.f);
        }
    }
    best.evaluations = evaluations;
    best.trace = std::move(trace);
    return best;
}

std::vector<double> random_strategy_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> rot(0.0, std::numbers::pi / 2);
    std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
    std::vector<double> x(kStrategyParams);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = i < 9 || (i - 9) % 2 == 1 ? rot(rng) : phase(rng);
    return x;
}

std::vector<bool> support_pattern(const Distribution& p, double threshold) {
    std::vector<bool> out(p.probs().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = p.probs()[i] > threshold;
    return out;
}

ViolationResult maximize_violation(const PolynomialInequality& ineq, const std::vector<double>& seed,
                                   const ViolationOptions& opts) {
    if (seed.size() != kStrategyParams) throw InputError("seed must have 81 strategy parameters");
    auto value_at = [&](const std::vector<double>& x) {
        return evaluate(ineq, triangle_distribution(strategy_from_params(wrap_strategy_params(x))));
    };
    // Surface evaluation errors on the seed rather than inside an optimizer.
    const double seed_value = value_at(seed);

    OptResult r;
    if (opts.basin.local_options.max_evaluations == 0) {
        r.x = seed;
        r.f = seed_value;
        r.evaluations = 1;
        r.trace = {seed_value};
    } else if (opts.optimizer == OptimizerKind::NelderMead) {
        r = nelder_mead(value_at, seed, opts.basin.local_options);
    } else if (opts.optimizer == OptimizerKind::Bfgs) {
        r = bfgs_fd(value_at, seed, opts.basin.local_options);
    } else {
        r = basin_hopping(value_at, seed, opts.basin);
    }
    ViolationResult out;
    out.params = wrap_strategy_params(r.f <= seed_value ? r.x : seed);
    out.distribution = triangle_distribution(strategy_from_params(out.params));
    out.violation = -evaluate(ineq, out.distribution);
    out.seed_violation = -seed_value;
    out.evaluations = r.evaluations;
    out.status = r.status;
    for (double v : r.trace) out.violation_trace.push_back(-v);

    const Distribution fritz = fritz_distribution().to_double();
    auto matches = [&](double t) { return support_pattern(out.distribution, t) == support_pattern(fritz, t); };
    out.support = support_pattern(out.distribution, opts.support_threshold);
    out.matches_fritz_support = matches(opts.support_threshold);
    out.support_match_stable = matches(opts.support_threshold * 10) == out.matches_fritz_support &&
                               matches(opts.support_threshold / 10) == out.matches_fritz_support;
    return out;
}

}  // namespace tricausal
