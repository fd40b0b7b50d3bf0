#include "tricausal/quantum.hpp"

#include "tricausal/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace tricausal {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRangeTol = 1e-12;

double fold_rotation(double x) {
    double t = std::fmod(x, kPi);
    if (t < 0) t += kPi;
    return t > kPi / 2 ? kPi - t : t;
}

double fold_phase(double x) {
    double t = std::fmod(x, 2 * kPi);
    return t < 0 ? t + 2 * kPi : t;
}

// X <- X * exp(i lambda P_n)
void right_phase(CMatrix& x, int n, double lambda) {
    if (lambda != 0.0) x.col(n) *= std::polar(1.0, lambda);
}

// X <- X * exp(i lambda sigma_{m,n})
void right_rotation(CMatrix& x, int m, int n, double lambda) {
    if (lambda == 0.0) return;
    const double c = std::cos(lambda), s = std::sin(lambda);
    CVector cm = x.col(m);
    x.col(m) = c * cm - s * x.col(n);
    x.col(n) = s * cm + c * x.col(n);
}

// The m-th block prod_{n>m} exp(i P_n l(n,m)) exp(i sigma_{m,n} l(m,n)).
CMatrix block_factor(const UnitaryParams& p, int m) {
    const int d = p.dimension();
    CMatrix x = CMatrix::Identity(d, d);
    for (int n = m + 1; n < d; ++n) {
        right_phase(x, n, p(n, m));
        right_rotation(x, m, n, p(m, n));
    }
    return x;
}

void check_ranges(const UnitaryParams& p) {
    const int d = p.dimension();
    if (d < 1) throw InputError("unitary dimension must be positive");
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const double v = p(i, j);
            const double hi = i < j ? kPi / 2 : 2 * kPi;
            if (!std::isfinite(v) || v < -kRangeTol || v > hi + kRangeTol) {
                throw InputError("unitary parameter (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") out of range: " + std::to_string(v));
            }
        }
    }
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CVector basis(int d, int k) {
    CVector v = CVector::Zero(d);
    v(k) = 1.0;
    return v;
}

}  // namespace

std::vector<double> UnitaryParams::packed() const {
    std::vector<double> out;
    for (int m = 0; m < d_; ++m) {
        for (int n = m + 1; n < d_; ++n) {
            out.push_back((*this)(n, m));
            out.push_back((*this)(m, n));
        }
    }
    return out;
}

UnitaryParams UnitaryParams::unpack(int d, const std::vector<double>& values) {
    if (values.size() != static_cast<std::size_t>(d) * (d - 1)) throw InputError("packed unitary parameter count mismatch");
    UnitaryParams p(d);
    std::size_t k = 0;
    for (int m = 0; m < d; ++m) {
        for (int n = m + 1; n < d; ++n) {
            p(n, m) = values[k++];
            p(m, n) = values[k++];
        }
    }
    return p;
}

UnitaryParams UnitaryParams::wrapped() const {
    UnitaryParams p(d_);
    for (int i = 0; i < d_; ++i) {
        for (int j = 0; j < d_; ++j) p(i, j) = i < j ? fold_rotation((*this)(i, j)) : fold_phase((*this)(i, j));
    }
    return p;
}

CMatrix rotation_factor(int d, int m, int n, double lambda) {
    if (!(0 <= m && m < n && n < d)) throw InputError("rotation factor needs 0 <= m < n < d");
    CMatrix x = CMatrix::Identity(d, d);
    right_rotation(x, m, n, lambda);
    return x;
}

CMatrix phase_factor(int d, int n, double lambda) {
    if (!(0 <= n && n < d)) throw InputError("phase factor index out of range");
    CMatrix x = CMatrix::Identity(d, d);
    right_phase(x, n, lambda);
    return x;
}

CMatrix spengler_unitary(const UnitaryParams& p) {
    check_ranges(p);
    const int d = p.dimension();
    CMatrix x = CMatrix::Identity(d, d);
    for (int m = 0; m + 1 < d; ++m) {
        for (int n = m + 1; n < d; ++n) {
            right_phase(x, n, p(n, m));
            right_rotation(x, m, n, p(m, n));
        }
    }
    for (int l = 0; l < d; ++l) right_phase(x, l, p(l, l));
    return x;
}

UnitaryParams unitary_params_from_matrix(const CMatrix& v) {
    const int d = static_cast<int>(v.rows());
    if (v.cols() != d) throw InputError("matrix is not square");
    if ((v.adjoint() * v - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9) {
        throw InputError("matrix is not unitary");
    }
    UnitaryParams p(d);
    CMatrix w = v;
    for (int m = 0; m + 1 < d; ++m) {
        // Column m of w equals block m applied to e_m, up to a phase.
        if (std::abs(w(m, m)) > 0.0) w.col(m) *= std::polar(1.0, -std::arg(w(m, m)));
        const CVector u = w.col(m);
        double r = std::abs(u(m));
        for (int n = m + 1; n < d; ++n) {
            const double a = std::abs(u(n));
            const double next = std::hypot(r, a);
            p(m, n) = std::atan2(a, r);
            p(n, m) = a > 0.0 ? fold_phase(std::arg(-u(n))) : 0.0;
            r = next;
        }
        w = block_factor(p, m).adjoint() * w;
    }
    return p;
}

std::vector<double> hyperspherical_weights(const std::vector<double>& angles) {
    std::vector<double> p;
    double rest = 1.0;
    for (double t : angles) {
        const double c = std::cos(t), s = std::sin(t);
        p.push_back(rest * c * c);
        rest *= s * s;
    }
    p.push_back(rest);
    return p;
}

CMatrix density_from_params(const std::vector<double>& angles, const UnitaryParams& u) {
    const int d = u.dimension();
    if (angles.size() + 1 != static_cast<std::size_t>(d)) throw InputError("need d-1 eigenvalue angles");
    for (double t : angles) {
        if (!std::isfinite(t)) throw InputError("eigenvalue angle is not finite");
    }
    const CMatrix U = spengler_unitary(u);
    const auto p = hyperspherical_weights(angles);
    CMatrix rho = CMatrix::Zero(d, d);
    for (int j = 0; j < d; ++j) rho += p[j] * U.col(j) * U.col(j).adjoint();
    return rho;
}

std::vector<CMatrix> pvm_from_params(const UnitaryParams& u) {
    const CMatrix U = spengler_unitary(u);
    std::vector<CMatrix> out;
    for (int j = 0; j < u.dimension(); ++j) out.push_back(U.col(j) * U.col(j).adjoint());
    return out;
}

void QuantumStrategy::validate(double state_tol, double pvm_tol) const {
    for (const auto& rho : states) {
        if (rho.rows() != 4 || rho.cols() != 4) throw InputError("edge states must be 4x4");
        if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > state_tol) throw VerificationError("state is not Hermitian");
        if (std::abs(rho.trace() - cd(1.0)) > state_tol) throw VerificationError("state trace differs from 1");
        Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
        if (es.eigenvalues().minCoeff() < -state_tol) throw VerificationError("state has a negative eigenvalue");
    }
    for (const auto& party : measurements) {
        CMatrix sum = CMatrix::Zero(4, 4);
        std::array<CMatrix, 4> proj;
        for (int k = 0; k < 4; ++k) {
            if (party[k].size() != 4) throw InputError("measurement vectors must have length 4");
            proj[k] = party[k] * party[k].adjoint();
            if ((proj[k] * proj[k] - proj[k]).norm() > pvm_tol) throw VerificationError("projector is not idempotent");
            sum += proj[k];
        }
        for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
                if ((proj[i] * proj[j]).norm() > pvm_tol) throw VerificationError("projectors are not orthogonal");
            }
        }
        if ((sum - CMatrix::Identity(4, 4)).norm() > pvm_tol) throw VerificationError("projectors do not sum to identity");
    }
    std::array<bool, 6> seen{};
    for (int t : tau) {
        if (t < 0 || t > 5 || seen[t]) throw InputError("tau is not a permutation of six qubits");
        seen[t] = true;
    }
}

Distribution triangle_distribution(const QuantumStrategy& s) {
    s.validate();
    const CMatrix rho = kron(s.states[0], kron(s.states[1], s.states[2]));
    // Columns: measurement vectors in state qubit order, one per (a, b, c).
    std::array<int, 64> to_state{};
    for (int k = 0; k < 64; ++k) {
        int idx = 0;
        for (int q = 0; q < 6; ++q) {
            if (k >> (5 - q) & 1) idx |= 1 << (5 - s.tau[q]);
        }
        to_state[k] = idx;
    }
    CMatrix phi = CMatrix::Zero(64, 64);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = 0; c < 4; ++c) {
                const int col = 16 * a + 4 * b + c;
                for (int i = 0; i < 4; ++i) {
                    const cd va = s.measurements[0][a](i);
                    if (va == cd(0)) continue;
                    for (int j = 0; j < 4; ++j) {
                        const cd vab = va * s.measurements[1][b](j);
                        if (vab == cd(0)) continue;
                        for (int k = 0; k < 4; ++k) {
                            phi(to_state[16 * i + 4 * j + k], col) = vab * s.measurements[2][c](k);
                        }
                    }
                }
            }
        }
    }
    const CMatrix rho_phi = rho * phi;
    std::vector<double> probs(64);
    for (int col = 0; col < 64; ++col) {
        const double v = phi.col(col).dot(rho_phi.col(col)).real();
        probs[col] = v < 0.0 && v > -1e-12 ? 0.0 : v;
    }
    return Distribution(EventSpace({"A", "B", "C"}, {4, 4, 4}), std::move(probs), 1e-10);
}

QuantumStrategy strategy_from_params(const std::vector<double>& x) {
    if (x.size() != kStrategyParams) throw InputError("strategy parameter vector must have 81 entries");
    QuantumStrategy s;
    for (int e = 0; e < 3; ++e) {
        std::vector<double> angles(x.begin() + 3 * e, x.begin() + 3 * e + 3);
        std::vector<double> packed(x.begin() + 9 + 12 * e, x.begin() + 21 + 12 * e);
        s.states[e] = density_from_params(angles, UnitaryParams::unpack(4, packed));
    }
    for (int party = 0; party < 3; ++party) {
        std::vector<double> packed(x.begin() + 45 + 12 * party, x.begin() + 57 + 12 * party);
        const CMatrix U = spengler_unitary(UnitaryParams::unpack(4, packed));
        for (int k = 0; k < 4; ++k) s.measurements[party][k] = U.col(k);
    }
    return s;
}

std::vector<double> wrap_strategy_params(const std::vector<double>& x) {
    if (x.size() != kStrategyParams) throw InputError("strategy parameter vector must have 81 entries");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < 9; ++i) out[i] = fold_rotation(x[i]);
    for (std::size_t i = 9; i < x.size(); ++i) {
        // Packed pairs alternate (phase, rotation).
        out[i] = (i - 9) % 2 == 0 ? fold_phase(x[i]) : fold_rotation(x[i]);
    }
    return out;
}

QuantumStrategy fritz_strategy() {
    QuantumStrategy s;
    const double h = 1.0 / std::sqrt(2.0);
    CVector phi_plus = CVector::Zero(4);
    phi_plus(0) = h;
    phi_plus(3) = h;
    s.states[0] = phi_plus * phi_plus.adjoint();
    CMatrix classical = CMatrix::Zero(4, 4);
    classical(0, 0) = 0.5;
    classical(3, 3) = 0.5;
    s.states[1] = classical;
    s.states[2] = classical;

    // A on (A_Y, A_X): the shared bit A_X selects Z or X on A_Y.
    s.measurements[0] = {basis(4, 0), basis(4, 2), CVector((basis(4, 1) + basis(4, 3)) * h),
                         CVector((basis(4, 1) - basis(4, 3)) * h)};
    // B on (B_Y, B_Z): the shared bit B_Z selects a real basis on B_Y at +-pi/8.
    for (int bl = 0; bl < 2; ++bl) {
        const double t = bl == 0 ? kPi / 8 : -kPi / 8;
        const double c = std::cos(t), sn = std::sin(t);
        const std::array<std::array<double, 2>, 2> v{{{c, sn}, {-sn, c}}};
        for (int br = 0; br < 2; ++br) {
            CVector m = CVector::Zero(4);
            m(0 * 2 + bl) = v[br][0];
            m(1 * 2 + bl) = v[br][1];
            s.measurements[1][2 * bl + br] = m;
        }
    }
    // C on (C_Z, C_X): outputs the C_X bit on the left and the C_Z bit on the right.
    for (int cl = 0; cl < 2; ++cl) {
        for (int cr = 0; cr < 2; ++cr) s.measurements[2][2 * cl + cr] = basis(4, 2 * cr + cl);
    }
    return s;
}

std::vector<double> fritz_strategy_params() {
    const QuantumStrategy s = fritz_strategy();
    std::vector<double> x(kStrategyParams, 0.0);
    const double h = 1.0 / std::sqrt(2.0);
    // Edge AB: pure Phi+; eigen-angles (0,0,0) select column 0.
    CMatrix u_ab = CMatrix::Zero(4, 4);
    u_ab(0, 0) = h;
    u_ab(3, 0) = h;
    u_ab(0, 1) = h;
    u_ab(3, 1) = -h;
    u_ab(1, 2) = 1.0;
    u_ab(2, 3) = 1.0;
    // Edges BC, CA: equal weight on |00> and |11>.
    CMatrix u_cl = CMatrix::Zero(4, 4);
    u_cl(0, 0) = 1.0;
    u_cl(3, 1) = 1.0;
    u_cl(1, 2) = 1.0;
    u_cl(2, 3) = 1.0;
    const std::array<CMatrix, 3> state_u{u_ab, u_cl, u_cl};
    const std::array<std::array<double, 3>, 3> angles{{{0, 0, 0}, {kPi / 4, 0, 0}, {kPi / 4, 0, 0}}};
    for (int e = 0; e < 3; ++e) {
        for (int k = 0; k < 3; ++k) x[3 * e + k] = angles[e][k];
        const auto packed = unitary_params_from_matrix(state_u[e]).packed();
        std::copy(packed.begin(), packed.end(), x.begin() + 9 + 12 * e);
    }
    for (int party = 0; party < 3; ++party) {
        CMatrix u(4, 4);
        for (int k = 0; k < 4; ++k) u.col(k) = s.measurements[party][k];
        const auto packed = unitary_params_from_matrix(u).packed();
        std::copy(packed.begin(), packed.end(), x.begin() + 45 + 12 * party);
    }
    return x;
}

}  // namespace tricausal
