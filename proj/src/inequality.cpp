#include "tricausal/inequality.hpp"

#include "tricausal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tricausal {
namespace {

Factor canonical_factor(Factor f) {
    if (f.vars.size() != f.outcomes.size()) throw InputError("factor arity mismatch");
    std::vector<std::size_t> order(f.vars.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f.vars[a] < f.vars[b]; });
    Factor out;
    for (auto i : order) {
        if (!out.vars.empty() && out.vars.back() == f.vars[i]) {
            throw InputError("factor repeats variable " + f.vars[i].str());
        }
        out.vars.push_back(f.vars[i]);
        out.outcomes.push_back(f.outcomes[i]);
    }
    return out;
}

NodeId rename_one(const NodeId& v, const std::map<NodeId, NodeId>& rename) {
    if (auto it = rename.find(v); it != rename.end()) return it->second;
    const auto& b = v.base;
    if (!v.copy && b.size() > 2 && b[b.size() - 2] == '_' && (b.back() == 'l' || b.back() == 'r')) {
        if (auto it = rename.find(NodeId::parse(b.substr(0, b.size() - 2))); it != rename.end()) {
            return NodeId{it->second.str() + b.substr(b.size() - 2)};
        }
    }
    return v;
}

template <typename T>
T from_rational(const Rational& r) {
    if constexpr (std::is_same_v<T, double>) {
        return to_double(r);
    } else {
        return T(r);
    }
}

}  // namespace

PolynomialInequality::PolynomialInequality(std::vector<Term> terms) {
    for (auto& t : terms) {
        for (auto& f : t.factors) f = canonical_factor(std::move(f));
        std::sort(t.factors.begin(), t.factors.end());
    }
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.factors < b.factors; });
    for (auto& t : terms) {
        if (!terms_.empty() && terms_.back().factors == t.factors) {
            terms_.back().coefficient += t.coefficient;
        } else {
            terms_.push_back(std::move(t));
        }
    }
    terms_.erase(std::remove_if(terms_.begin(), terms_.end(), [](const Term& t) { return t.coefficient == 0; }),
                 terms_.end());
}

std::size_t PolynomialInequality::degree() const {
    std::size_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.factors.size());
    return d;
}

NodeSet PolynomialInequality::variables() const {
    NodeSet out;
    for (const auto& t : terms_) {
        for (const auto& f : t.factors) out.insert(f.vars.begin(), f.vars.end());
    }
    return out;
}

PolynomialInequality PolynomialInequality::negated() const {
    auto terms = terms_;
    for (auto& t : terms) t.coefficient = -t.coefficient;
    return PolynomialInequality(std::move(terms));
}

PolynomialInequality PolynomialInequality::relabeled(const std::map<NodeId, NodeId>& rename) const {
    auto terms = terms_;
    for (auto& t : terms) {
        for (auto& f : t.factors) {
            for (auto& v : f.vars) v = rename_one(v, rename);
        }
    }
    return PolynomialInequality(std::move(terms));
}

bool PolynomialInequality::operator==(const PolynomialInequality& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].coefficient != o.terms_[i].coefficient || terms_[i].factors != o.terms_[i].factors) {
            return false;
        }
    }
    return true;
}

template <typename T>
T evaluate(const PolynomialInequality& ineq, const BasicDistribution<T>& p) {
    if (ineq.is_zero()) return T(0);
    auto needed = ineq.variables();
    const BasicDistribution<T>* source = &p;
    BasicDistribution<T> bits;
    bool direct = std::all_of(needed.begin(), needed.end(), [&](const NodeId& v) { return p.space().contains(v); });
    if (!direct) {
        bool all_quaternary = std::all_of(p.space().cardinalities().begin(), p.space().cardinalities().end(),
                                          [](int c) { return c == 4; });
        if (!all_quaternary) throw InputError("inequality uses variables missing from the distribution");
        bits = bit_coarse_grain(p);
        for (const auto& v : needed) {
            if (!bits.space().contains(v)) throw InputError("distribution lacks variable " + v.str());
        }
        source = &bits;
    }
    std::map<std::vector<NodeId>, BasicDistribution<T>> cache;
    T total(0);
    for (const auto& t : ineq.terms()) {
        T mono = from_rational<T>(t.coefficient);
        for (const auto& f : t.factors) {
            auto it = cache.find(f.vars);
            if (it == cache.end()) {
                it = cache.emplace(f.vars, marginalize(*source, NodeSet(f.vars.begin(), f.vars.end()))).first;
            }
            mono *= it->second.prob(f.outcomes);
        }
        total += mono;
    }
    return total;
}

template double evaluate(const PolynomialInequality&, const Distribution&);
template QSqrt2 evaluate(const PolynomialInequality&, const ExactDistribution&);

PolynomialInequality wagon_wheel_inequality() {
    auto f = [](std::vector<const char*> names, const char* bits) {
        Factor out;
        for (std::size_t k = 0; k < names.size(); ++k) {
            out.vars.push_back(NodeId{names[k]});
            out.outcomes.push_back(bits[k] - '0');
        }
        return out;
    };
    const std::vector<const char*> ab{"A_l", "B_l"};
    const std::vector<const char*> cc{"C_l", "C_r"};
    const std::vector<const char*> abcc{"A_l", "B_l", "C_l", "C_r"};
    const std::vector<const char*> all{"A_l", "A_r", "B_l", "B_r", "C_l", "C_r"};
    // Published form, <= 0.
    std::vector<Term> terms{
        {1, {f(ab, "11")}},
        {-1, {f(abcc, "1111")}},
        {1, {f(ab, "00"), f(cc, "11")}},
        {1, {f(cc, "01"), f(cc, "10")}},
        {-1, {f(cc, "11"), f(all, "000000")}},
        {-1, {f(cc, "11"), f(all, "010100")}},
        {-1, {f(cc, "10"), f(all, "001001")}},
        {-1, {f(cc, "10"), f(all, "011101")}},
        {-1, {f(cc, "01"), f(all, "100110")}},
        {-1, {f(cc, "01"), f(all, "110010")}},
        {1, {f(cc, "00"), f(all, "101111")}},
        {1, {f(cc, "00"), f(all, "111011")}},
    };
    return PolynomialInequality(std::move(terms)).negated();
}

namespace {

EventSpace abc_space() { return EventSpace({"A", "B", "C"}, {4, 4, 4}); }

}  // namespace

ExactDistribution fritz_distribution() {
    const QSqrt2 hi = QSqrt2(Rational(2, 32), Rational(1, 32));
    const QSqrt2 lo = QSqrt2(Rational(2, 32), Rational(-1, 32));
    const int high[][3] = {{0, 0, 0}, {1, 1, 0}, {0, 2, 1}, {1, 3, 1}, {2, 0, 2}, {3, 1, 2}, {2, 3, 3}, {3, 2, 3}};
    const int low[][3] = {{0, 1, 0}, {1, 0, 0}, {0, 3, 1}, {1, 2, 1}, {2, 1, 2}, {3, 0, 2}, {2, 2, 3}, {3, 3, 3}};
    EventSpace space = abc_space();
    std::vector<QSqrt2> probs(space.event_count());
    for (const auto& e : high) probs[space.encode(e)] = hi;
    for (const auto& e : low) probs[space.encode(e)] = lo;
    return ExactDistribution(std::move(space), std::move(probs));
}

ExactDistribution uniform_abc() {
    EventSpace space = abc_space();
    std::vector<QSqrt2> probs(space.event_count(), QSqrt2(Rational(1, 64)));
    return ExactDistribution(std::move(space), std::move(probs));
}

Distribution random_triangle_distribution(std::mt19937_64& rng, int latent_cardinality, bool deterministic) {
    const int k = latent_cardinality;
    if (k < 1) throw InputError("latent cardinality must be positive");
    std::exponential_distribution<double> expo(1.0);
    std::uniform_int_distribution<int> pick(0, 3);
    auto simplex = [&](int n) {
        std::vector<double> v(n);
        double sum = 0.0;
        for (auto& x : v) sum += x = expo(rng);
        for (auto& x : v) x /= sum;
        return v;
    };
    auto responses = [&] {
        std::vector<std::vector<double>> r(k * k);
        for (auto& t : r) {
            if (deterministic) {
                t.assign(4, 0.0);
                t[pick(rng)] = 1.0;
            } else {
                t = simplex(4);
            }
        }
        return r;
    };
    const auto px = simplex(k), py = simplex(k), pz = simplex(k);
    const auto ra = responses(), rb = responses(), rc = responses();
    std::vector<double> probs(64, 0.0);
    for (int x = 0; x < k; ++x) {
        for (int y = 0; y < k; ++y) {
            for (int z = 0; z < k; ++z) {
                const double w = px[x] * py[y] * pz[z];
                const auto &a = ra[x * k + y], &b = rb[y * k + z], &c = rc[z * k + x];
                for (int i = 0; i < 64; ++i) probs[i] += w * a[i / 16] * b[i / 4 % 4] * c[i % 4];
            }
        }
    }
    return Distribution(abc_space(), std::move(probs), 1e-9);
}

template <typename T>
T chsh_triangle(const BasicDistribution<T>& p) {
    const auto& space = p.space();
    if (!(space == abc_space())) throw InputError("chsh_triangle needs A, B, C with 4 outcomes");
    T total(0);
    for (int c = 0; c < 4; ++c) {
        T pc(0), corr(0);
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                int e[3] = {a, b, c};
                const T& v = p.prob(e);
                pc += v;
                if (((a & 1) ^ (b & 1)) == 0) corr += v;
                else corr -= v;
            }
        }
        if (pc == T(0)) throw InputError("chsh_triangle: P(C=" + std::to_string(c) + ") is zero");
        T term = corr / pc;
        if (c == 3) total -= term;
        else total += term;
    }
    return total;
}

template double chsh_triangle(const Distribution&);
template QSqrt2 chsh_triangle(const ExactDistribution&);

bool c_tracks_left_bits(const Distribution& p, double tol) {
    if (!(p.space() == abc_space())) throw InputError("expected A, B, C with 4 outcomes");
    double off = 0.0;
    for (std::uint64_t j = 0; j < p.space().event_count(); ++j) {
        auto e = p.space().decode(j);
        if ((e[2] >> 1) != (e[0] >> 1) || (e[2] & 1) != (e[1] >> 1)) off += p.at(j);
    }
    return off <= tol;
}

NoisyFamily fritz_noisy_family() { return {fritz_distribution(), uniform_abc()}; }

ExactDistribution noisy_member(const NoisyFamily& f, const Rational& eps) {
    if (eps < 0 || eps > 1) throw InputError("noise parameter must lie in [0, 1]");
    if (!(f.base.space() == f.mixer.space())) throw InputError("noisy family spaces differ");
    std::vector<QSqrt2> probs(f.base.probs().size());
    const QSqrt2 e(eps), keep(1 - eps);
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = keep * f.base.at(i) + e * f.mixer.at(i);
    return ExactDistribution(f.base.space(), std::move(probs));
}

Distribution noisy_member(const NoisyFamily& f, double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw InputError("noise parameter must lie in [0, 1]");
    if (!(f.base.space() == f.mixer.space())) throw InputError("noisy family spaces differ");
    std::vector<double> probs(f.base.probs().size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        probs[i] = (1.0 - eps) * f.base.at(i).to_double() + eps * f.mixer.at(i).to_double();
    }
    return Distribution(f.base.space(), std::move(probs), 1e-10);
}

NoiseThreshold noise_threshold(const PolynomialInequality& ineq, const NoisyFamily& f, double tol, int grid) {
    if (grid < 1) throw InputError("noise scan needs at least one grid step");
    if (!(tol > 0.0)) throw InputError("noise tolerance must be positive");
    auto value = [&](double eps) { return evaluate(ineq, noisy_member(f, eps)); };
    if (!(evaluate(ineq, f.base).sign() < 0)) {
        throw InputError("the base distribution does not violate the inequality");
    }
    NoiseThreshold out;
    double prev = 0.0;
    int crossing = -1;
    for (int k = 1; k <= grid; ++k) {
        double eps = static_cast<double>(k) / grid;
        if (value(eps) >= 0.0) {
            crossing = k;
            break;
        }
        prev = eps;
    }
    if (crossing < 0) {
        out.violated_at_one = true;
        out.epsilon = out.lower = out.upper = 1.0;
        return out;
    }
    double lo = prev, hi = static_cast<double>(crossing) / grid;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (value(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    out.lower = lo;
    out.upper = hi;
    out.epsilon = 0.5 * (lo + hi);
    for (int k = crossing + 1; k <= grid; ++k) {
        if (value(static_cast<double>(k) / grid) < 0.0) {
            out.non_monotone = true;
            break;
        }
    }
    return out;
}

}  // namespace tricausal
