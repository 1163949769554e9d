#include "hsflow/fiber_g2.hpp"

#include <cmath>
#include <string>

namespace hsflow {

namespace {

constexpr int kX4Offset = 3;

}  // namespace

Two7Form embed_x4(const Two4Form& w) {
    const auto lex = w.to_lex();
    Two7Form out;
    for (int i = 0; i < ext::Form<4, 2>::size; ++i) out.at_mask(ext::Form<4, 2>::masks[i] << kX4Offset) = lex.c[i];
    return out;
}

ext::Form<7, 3> embed_x4(const Three4Form& w) {
    ext::Form<7, 3> out;
    for (int i = 0; i < Three4Form::size; ++i) out.at_mask(Three4Form::masks[i] << kX4Offset) = w.c[i];
    return out;
}

ext::Form<7, 4> embed_volume(double coeff) { return ext::Form<7, 4>::basis(0xFu << kX4Offset, coeff); }

One7Form dt(int i) { return One7Form::basis(1u << i); }

Three7Form build_phi(const Triple& t) {
    Three7Form phi = Three7Form::basis(0b111u);
    for (int i = 0; i < 3; ++i) phi -= ext::wedge(dt(i), embed_x4(t[i]));
    return phi;
}

Four7Form build_psi(const Triple& sigma, VolumeCoeff mu_sigma) {
    Four7Form psi = embed_volume(mu_sigma.m());
    psi -= ext::wedge(ext::wedge(dt(0), dt(1)), embed_x4(sigma[2]));
    psi -= ext::wedge(ext::wedge(dt(2), dt(0)), embed_x4(sigma[1]));
    psi -= ext::wedge(ext::wedge(dt(1), dt(2)), embed_x4(sigma[0]));
    return psi;
}

Metric7 phi_metric_density(const Three7Form& phi) {
    std::array<Two7Form, 7> contracted;
    for (int a = 0; a < 7; ++a) contracted[a] = ext::interior(a, phi);
    Metric7 b;
    for (int a = 0; a < 7; ++a)
        for (int c = a; c < 7; ++c) b(a, c) = ext::wedge(ext::wedge(contracted[a], contracted[c]), phi).c[0] / 6.0;
    return b;
}

G2Metric metric_from_phi(const Three7Form& phi) {
    const Metric7 b = phi_metric_density(phi);
    const double det_b = b.dense().determinant();
    if (!(det_b > 0.0)) throw NotPositive("metric_from_phi: det B = " + std::to_string(det_b) + " <= 0");
    const double root = std::pow(det_b, 1.0 / 9.0);
    Metric7 g = (1.0 / root) * b;
    Eigen::LLT<Eigen::Matrix<double, 7, 7>> llt(g.dense());
    if (llt.info() != Eigen::Success) throw NotPositive("metric_from_phi: induced metric is not positive definite");
    return {g, VolumeCoeff{root}};
}

Metric7 block_metric(const SymMat3& q, const Metric4& gx) {
    Metric7 g;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) g(i, j) = q(i, j);
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) g(a + kX4Offset, b + kX4Offset) = gx(a, b);
    return g;
}

T3Coeffs star3_T3(int degree, const T3Coeffs& c, const SymMat3& q) {
    const double det = det3(q);
    if (std::fabs(det - 1.0) > 1e-8) throw DetNotOne("star3_T3: det Q = " + std::to_string(det));
    if (degree == 1) {
        const SymMat3 qi = inv3(q);
        // *dt^1 = Q^13 dt^12 + Q^11 dt^23 + Q^21 dt^31, and cyclically
        T3Coeffs out{};
        out[0] = c[0] * qi(0, 0) + c[1] * qi(1, 0) + c[2] * qi(2, 0);
        out[1] = c[0] * qi(1, 0) + c[1] * qi(1, 1) + c[2] * qi(2, 1);
        out[2] = c[0] * qi(0, 2) + c[1] * qi(1, 2) + c[2] * qi(2, 2);
        return out;
    }
    if (degree == 2) {
        // *dt^23 = Q_1k dt^k, *dt^31 = Q_2k dt^k, *dt^12 = Q_3k dt^k
        T3Coeffs out{};
        for (int k = 0; k < 3; ++k) out[k] = c[0] * q(0, k) + c[1] * q(1, k) + c[2] * q(2, k);
        return out;
    }
    throw ValidationError("star3_T3: degree must be 1 or 2");
}

Four7Form hodge7(const Three7Form& f, const Metric7& g) {
    Eigen::LLT<Eigen::Matrix<double, 7, 7>> llt(g.dense());
    if (llt.info() != Eigen::Success) throw NotPositive("hodge7: metric is not positive definite");
    return ext::hodge(f, g);
}

Three7Form hodge7(const Four7Form& f, const Metric7& g) {
    Eigen::LLT<Eigen::Matrix<double, 7, 7>> llt(g.dense());
    if (llt.info() != Eigen::Success) throw NotPositive("hodge7: metric is not positive definite");
    return ext::hodge(f, g);
}

double check_star7(const Three7Form& phi, const Four7Form& psi, const Metric7& g) {
    return (hodge7(psi, g) - phi).max_abs();
}

Four7Form assemble_dphi(const std::array<Three4Form, 3>& domega) {
    Four7Form out;
    for (int j = 0; j < 3; ++j) out += ext::wedge(dt(j), embed_x4(domega[j]));
    return out;
}

double torsion_trace(const Three7Form& phi, const Four7Form& dphi, const Metric7& g) {
    const Seven7Form top = ext::wedge(phi, dphi);
    return 0.25 * ext::hodge(top, g).c[0];
}

FiberLift lift(const Triple& t) {
    const TripleMetric tm = metric_from_triple(t);
    const SymMat3 q = gram(t, tm.mu);
    const Triple sigma = dual_triple(t, q);
    const Three7Form phi = build_phi(t);
    return {q, tm.mu, tm.g, sigma, phi, build_psi(sigma, tm.mu), metric_from_phi(phi)};
}

}  // namespace hsflow
