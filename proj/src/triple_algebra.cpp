#include "hsflow/triple_algebra.hpp"

#include <cmath>
#include <string>

namespace hsflow {

namespace {

constexpr int eps3(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0;
    // parity of (i,j,k) as a permutation of (0,1,2)
    return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

/// Antisymmetric 4x4 coefficient matrix W with w = 1/2 W_ab e^a ^ e^b.
Eigen::Matrix4d to_antisym(const Two4Form& w) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 1) = w.c01;
    m(0, 2) = w.c02;
    m(0, 3) = w.c03;
    m(2, 3) = w.c23;
    m(3, 1) = w.c31;
    m(1, 2) = w.c12;
    return m - m.transpose();
}

Two4Form from_antisym(const Eigen::Matrix4d& m) {
    return {m(0, 1), m(0, 2), m(0, 3), m(2, 3), m(3, 1), m(1, 2)};
}

// lex index <-> Two4Form slot, with the sign e^31 = -e^13
constexpr std::array<int, 6> kLexToSlot{0, 1, 2, 5, 4, 3};
constexpr std::array<double, 6> kLexSign{1, 1, 1, 1, -1, 1};

}  // namespace

ext::Form<4, 2> Two4Form::to_lex() const {
    const auto c = coeffs();
    ext::Form<4, 2> f;
    for (int i = 0; i < 6; ++i) f.c[i] = kLexSign[i] * c[kLexToSlot[i]];
    return f;
}

Two4Form Two4Form::from_lex(const ext::Form<4, 2>& f) {
    std::array<double, 6> c{};
    for (int i = 0; i < 6; ++i) c[kLexToSlot[i]] = kLexSign[i] * f.c[i];
    return from_coeffs(c);
}

Two4Form& Two4Form::operator+=(const Two4Form& o) {
    c01 += o.c01;
    c02 += o.c02;
    c03 += o.c03;
    c23 += o.c23;
    c31 += o.c31;
    c12 += o.c12;
    return *this;
}

Two4Form& Two4Form::operator-=(const Two4Form& o) { return *this += -1.0 * o; }

Two4Form& Two4Form::operator*=(double a) {
    c01 *= a;
    c02 *= a;
    c03 *= a;
    c23 *= a;
    c31 *= a;
    c12 *= a;
    return *this;
}

double Two4Form::max_abs() const {
    double m = 0.0;
    for (double v : coeffs()) m = std::fmax(m, std::fabs(v));
    return m;
}

double Triple::max_abs_diff(const Triple& o) const {
    double m = 0.0;
    for (int i = 0; i < 3; ++i) m = std::fmax(m, ((*this)[i] - o[i]).max_abs());
    return m;
}

VolumeCoeff::VolumeCoeff(double m) : m_(m) {
    if (!(m > 0.0) || !std::isfinite(m)) throw ValidationError("volume coefficient must be positive, got " + std::to_string(m));
}

Triple standard_triple() {
    Triple t;
    t[0].c01 = 1.0;
    t[0].c23 = 1.0;
    t[1].c02 = 1.0;
    t[1].c31 = 1.0;
    t[2].c03 = 1.0;
    t[2].c12 = 1.0;
    return t;
}

double wedge22(const Two4Form& a, const Two4Form& b) {
    return a.c01 * b.c23 + a.c23 * b.c01 + a.c02 * b.c31 + a.c31 * b.c02 + a.c03 * b.c12 + a.c12 * b.c03;
}

SymMat3 gram(const Triple& t, VolumeCoeff mu) {
    SymMat3 q;
    const double s = 0.5 / mu.m();
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) q(i, j) = s * wedge22(t[i], t[j]);
    return q;
}

bool is_positive(const SymMat3& q, double tol) {
    const double m1 = q(0, 0);
    const double m2 = q(0, 0) * q(1, 1) - q(0, 1) * q(0, 1);
    return m1 > tol && m2 > tol && det3(q) > tol;
}

double det3(const SymMat3& s) {
    return s(0, 0) * (s(1, 1) * s(2, 2) - s(1, 2) * s(1, 2)) - s(0, 1) * (s(0, 1) * s(2, 2) - s(1, 2) * s(0, 2)) +
           s(0, 2) * (s(0, 1) * s(1, 2) - s(1, 1) * s(0, 2));
}

double det3(const Mat3& s) {
    return s[0][0] * (s[1][1] * s[2][2] - s[1][2] * s[2][1]) - s[0][1] * (s[1][0] * s[2][2] - s[1][2] * s[2][0]) +
           s[0][2] * (s[1][0] * s[2][1] - s[1][1] * s[2][0]);
}

SymMat3 adj3(const SymMat3& s) {
    SymMat3 a;
    a(0, 0) = s(1, 1) * s(2, 2) - s(1, 2) * s(1, 2);
    a(1, 1) = s(0, 0) * s(2, 2) - s(0, 2) * s(0, 2);
    a(2, 2) = s(0, 0) * s(1, 1) - s(0, 1) * s(0, 1);
    a(0, 1) = s(0, 2) * s(1, 2) - s(0, 1) * s(2, 2);
    a(0, 2) = s(0, 1) * s(1, 2) - s(0, 2) * s(1, 1);
    a(1, 2) = s(0, 1) * s(0, 2) - s(0, 0) * s(1, 2);
    return a;
}

SymMat3 inv3(const SymMat3& s) {
    const double d = det3(s);
    if (d == 0.0 || !std::isfinite(d)) throw SingularMatrix("inv3: matrix is singular");
    return (1.0 / d) * adj3(s);
}

double levi_civita_det_check(const Mat3& s) {
    const double det = det3(s);
    double worst = 0.0;
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
            for (int l = 0; l < 3; ++l) {
                double sum = 0.0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        for (int k = 0; k < 3; ++k) {
                            const int e = eps3(i, j, k);
                            if (e != 0) sum += e * s[i][p] * s[j][q] * s[k][l];
                        }
                worst = std::fmax(worst, std::fabs(sum - det * eps3(p, q, l)));
            }
    return worst;
}

double levi_civita_det_check(const SymMat3& s) {
    Mat3 m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = s(i, j);
    return levi_civita_det_check(m);
}

Triple combine(const Mat3& a, const Triple& t) {
    Triple out;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) out[i] += a[i][k] * t[k];
    return out;
}

Triple combine(const SymMat3& a, const Triple& t) {
    Triple out;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) out[i] += a(i, k) * t[k];
    return out;
}

Triple dual_triple(const Triple& t, const SymMat3& q) { return combine(inv3(q), t); }

Metric4 metric_density(const Triple& t) {
    // (u ^ v) ^ w_k = u^T C_k v with C_k the antisymmetric matrix of e^cd ^ w_k;
    // with u = W_i(a,.), v = W_j(b,.) the eps-sum over (i,j) is X + X^T,
    // X = W_i C_k W_j^T for (i,j,k) cyclic.
    std::array<Eigen::Matrix4d, 3> w;
    std::array<Eigen::Matrix4d, 3> c;
    for (int i = 0; i < 3; ++i) {
        w[i] = to_antisym(t[i]);
        // e^cd ^ w picks the complementary coefficient: e^01 <-> w_23, e^02 <-> w_31, ...
        const Two4Form& f = t[i];
        c[i] = to_antisym(Two4Form{f.c23, f.c31, f.c12, f.c01, f.c02, f.c03});
    }
    Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
    for (int k = 0; k < 3; ++k) {
        const Eigen::Matrix4d x = w[(k + 1) % 3] * c[k] * w[(k + 2) % 3].transpose();
        acc += x + x.transpose();
    }
    return Metric4::from_dense(acc / 6.0);
}

TripleMetric metric_from_triple(const Triple& t, VolumeCoeff mu) {
    const Metric4 r = metric_density(t);
    const double det_r = r.dense().determinant();
    if (!(det_r > 0.0)) throw NotPositive("metric_from_triple: det R = " + std::to_string(det_r) + " <= 0");
    const double root = std::pow(det_r, 1.0 / 6.0);
    Metric4 g = (1.0 / root) * r;
    Eigen::LLT<Eigen::Matrix4d> llt(g.dense());
    if (llt.info() != Eigen::Success) throw NotPositive("metric_from_triple: induced metric is not positive definite");
    // anti-self-dual triples also induce a definite metric; Q decides orientation
    if (!is_positive(gram(t, VolumeCoeff{1.0}), 0.0)) throw NotPositive("metric_from_triple: Gram matrix is not positive definite");
    // mu_w = det(Q_mu)^(1/3) mu does not depend on the reference mu
    (void)mu;
    return {g, VolumeCoeff{root}};
}

Normalized normalize(const Triple& t, VolumeCoeff mu) {
    const TripleMetric tm = metric_from_triple(t, mu);
    return {gram(t, tm.mu), tm.mu};
}

Eigen::Matrix<double, 6, 6> hodge2_matrix(const Metric4& g, VolumeCoeff mu_g) {
    const Eigen::Matrix4d gd = g.dense();
    Eigen::LLT<Eigen::Matrix4d> llt(gd);
    if (llt.info() != Eigen::Success) throw NotPositive("hodge2: metric is not positive definite");
    const auto lex = ext::hodge_matrix<4, 2>(gd.inverse().eval(), mu_g.m());
    // conjugate by the signed permutation lex -> slot
    Eigen::Matrix<double, 6, 6> out;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) out(kLexToSlot[i], kLexToSlot[j]) = kLexSign[i] * kLexSign[j] * lex(i, j);
    return out;
}

Two4Form hodge2(const Two4Form& b, const Metric4& g, VolumeCoeff mu_g) {
    const auto h = hodge2_matrix(g, mu_g);
    const auto c = b.coeffs();
    std::array<double, 6> out{};
    for (int r = 0; r < 6; ++r)
        for (int j = 0; j < 6; ++j) out[r] += h(r, j) * c[j];
    return Two4Form::from_coeffs(out);
}

double inner2(const Two4Form& b, const Two4Form& c, const Metric4& g) {
    return ext::inner<4, 2>(b.to_lex(), c.to_lex(), g);
}

Triple rescale_triple(const Triple& t, const SymMat3& a) {
    if (det3(a) == 0.0) throw SingularMatrix("rescale_triple: matrix is singular");
    return combine(a, t);
}

Two4Form pullback(const Two4Form& b, const Eigen::Matrix4d& e) {
    return from_antisym(e.transpose() * to_antisym(b) * e);
}

Triple pullback(const Triple& t, const Eigen::Matrix4d& e) {
    Triple out;
    for (int i = 0; i < 3; ++i) out[i] = pullback(t[i], e);
    return out;
}

}  // namespace hsflow
