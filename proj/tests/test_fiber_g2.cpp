#include <doctest.h>

#include <cmath>

#include "hsflow/errors.hpp"
#include "hsflow/fiber_g2.hpp"
#include "hsflow/sampling.hpp"
#include "oracles.hpp"

using namespace hsflow;

namespace {

template <int N, int K>
std::vector<double> as_vec(const ext::Form<N, K>& f) {
    return {f.c.begin(), f.c.end()};
}

template <int N, int K>
ext::Form<N, K> random_form(Rng& rng) {
    ext::Form<N, K> f;
    for (auto& v : f.c) v = uniform(rng, -1.0, 1.0);
    return f;
}

Metric7 random_metric7(Rng& rng) {
    Eigen::Matrix<double, 7, 7> a;
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) a(i, j) = uniform(rng, -1.0, 1.0);
    return Metric7::from_dense(a * a.transpose() + 0.5 * Eigen::Matrix<double, 7, 7>::Identity());
}

// Lifts a form on R^3 (dt) or R^4 (e) into the 7-dimensional coframe.
template <int K>
ext::Form<7, K> lift_t3(const ext::Form<3, K>& f) {
    ext::Form<7, K> out;
    for (int i = 0; i < f.size; ++i) out.at_mask(ext::Form<3, K>::masks[i]) = f.c[i];
    return out;
}

template <int K>
ext::Form<7, K> lift_x4(const ext::Form<4, K>& f) {
    ext::Form<7, K> out;
    for (int i = 0; i < f.size; ++i) out.at_mask(ext::Form<4, K>::masks[i] << 3) = f.c[i];
    return out;
}

template <int L, int K>
void check_split(Rng& rng) {
    const SymMat3 q = random_det1_spd(rng);
    Eigen::Matrix4d a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = uniform(rng, -1.0, 1.0);
    const Metric4 gx = Metric4::from_dense(a * a.transpose() + Eigen::Matrix4d::Identity());
    const Metric7 g = block_metric(q, gx);
    const auto alpha = random_form<3, L>(rng);
    const auto beta = random_form<4, K>(rng);
    const auto lhs = ext::hodge(ext::wedge(lift_t3(alpha), lift_x4(beta)), g);
    const auto rhs = ext::wedge(lift_t3(ext::hodge(alpha, q)), lift_x4(ext::hodge(beta, gx)));
    const double sign = ((K * (3 - L)) % 2 == 0) ? 1.0 : -1.0;
    CHECK((lhs - sign * rhs).max_abs() <= 1e-10 * std::fmax(1.0, rhs.max_abs()));
}

}  // namespace

TEST_CASE("phi and psi of the standard triple") {
    const Triple t = standard_triple();
    const Three7Form phi = build_phi(t);
    int nonzero = 0;
    for (double v : phi.c) nonzero += (v != 0.0);
    CHECK(nonzero == 7);
    CHECK(phi.at_mask(0b111u) == 1.0);
    // -dt^1 ^ e^01
    CHECK(phi.at_mask(0b1u | (0b11u << 3)) == -1.0);
    // -dt^1 ^ e^23
    CHECK(phi.at_mask(0b1u | (0b1100u << 3)) == -1.0);

    const Four7Form psi = build_psi(t, VolumeCoeff{1.0});
    nonzero = 0;
    for (double v : psi.c) nonzero += (v != 0.0);
    CHECK(nonzero == 7);
    CHECK(psi.at_mask(0b1111u << 3) == 1.0);
}

TEST_CASE("metric_from_phi") {
    const G2Metric flat = metric_from_phi(build_phi(standard_triple()));
    CHECK(flat.g.max_abs_diff(Metric7::identity()) < 1e-14);
    CHECK(flat.vol.m() == doctest::Approx(1.0));

    // (2 w1, w2, w3) normalises to Q = diag(4,1,1)/4^(1/3)
    Triple t = standard_triple();
    t[0] = 2.0 * t[0];
    const FiberLift fl = lift(t);
    const double s = std::cbrt(4.0);
    CHECK(fl.q.max_abs_diff(SymMat3::diagonal({4.0 / s, 1.0 / s, 1.0 / s})) < 1e-14);
    CHECK(fl.g7.g.max_abs_diff(block_metric(fl.q, fl.g4)) < 1e-13);
    CHECK(std::sqrt(fl.g4.dense().determinant()) == doctest::Approx(fl.mu.m()).epsilon(1e-13));

    Rng rng(61);
    for (int k = 0; k < 5; ++k) {
        const Three7Form phi = build_phi(random_positive_triple(rng));
        const Eigen::MatrixXd b = oracle::phi_density(as_vec(phi));
        CHECK((phi_metric_density(phi).dense() - b).cwiseAbs().maxCoeff() < 1e-12 * b.cwiseAbs().maxCoeff());
    }
    CHECK_THROWS_AS(metric_from_phi(Three7Form{}), NotPositive);
}

TEST_CASE("lift gives the block metric for random triples") {
    Rng rng(67);
    for (int s = 0; s < 100; ++s) {
        const FiberLift fl = lift(random_positive_triple(rng));
        CHECK(fl.g7.g.max_abs_diff(block_metric(fl.q, fl.g4)) <= 1e-9 * fl.g7.g.max_abs());
        CHECK(std::fabs(det3(fl.q) - 1.0) < 1e-10);
    }
}

TEST_CASE("star3 on T3") {
    const SymMat3 id = SymMat3::identity();
    const T3Coeffs e1{1.0, 0.0, 0.0};
    // *dt^1 = dt^23 and *dt^23 = dt^1
    CHECK(star3_T3(1, e1, id) == e1);
    CHECK(star3_T3(2, e1, id) == e1);
    CHECK(star3_T3(1, {0.0, 0.0, 1.0}, id) == T3Coeffs{0.0, 0.0, 1.0});

    const SymMat3 d = SymMat3::diagonal({4.0, 0.5, 0.5});
    const T3Coeffs s1 = star3_T3(1, e1, d);
    CHECK(s1[0] == doctest::Approx(0.25));
    CHECK(s1[1] == 0.0);
    CHECK(star3_T3(2, e1, d)[0] == doctest::Approx(4.0));

    Rng rng(71);
    for (int s = 0; s < 200; ++s) {
        const SymMat3 q = random_det1_spd(rng);
        const T3Coeffs a{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
        const auto two = oracle::hodge(3, 1, {a[0], a[1], a[2]}, q.dense());
        // lex (12,13,23) -> (23,31,12)
        const T3Coeffs ref{two[2], -two[1], two[0]};
        const T3Coeffs got = star3_T3(1, a, q);
        for (int i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-12).scale(1.0));
        const auto one = oracle::hodge(3, 2, {a[2], -a[1], a[0]}, q.dense());
        const T3Coeffs got2 = star3_T3(2, a, q);
        for (int i = 0; i < 3; ++i) CHECK(got2[i] == doctest::Approx(one[i]).epsilon(1e-12).scale(1.0));
        // ** = 1 in dimension 3
        const T3Coeffs back = star3_T3(2, got, q);
        for (int i = 0; i < 3; ++i) CHECK(back[i] == doctest::Approx(a[i]).epsilon(1e-12).scale(1.0));
    }
    CHECK_THROWS_AS(star3_T3(1, e1, SymMat3::diagonal({2.0, 1.0, 1.0})), DetNotOne);
    CHECK_THROWS_AS(star3_T3(3, e1, id), ValidationError);
}

TEST_CASE("hodge7 against the tensor formula") {
    CHECK((hodge7(build_phi(standard_triple()), Metric7::identity()) - build_psi(standard_triple(), VolumeCoeff{1.0}))
              .max_abs() < 1e-15);
    Rng rng(73);
    for (int s = 0; s < 5; ++s) {
        const Metric7 g = random_metric7(rng);
        const auto f = random_form<7, 3>(rng);
        const auto ref = oracle::hodge(7, 3, as_vec(f), g.dense());
        const auto got = hodge7(f, g);
        for (int i = 0; i < got.size; ++i) CHECK(got.c[i] == doctest::Approx(ref[i]).epsilon(1e-10).scale(1.0));
        // ** = +1 in odd dimension
        CHECK((hodge7(got, g) - f).max_abs() <= 1e-10 * std::fmax(1.0, f.max_abs()));
    }
    Metric7 bad = Metric7::identity();
    bad(0, 0) = -1.0;
    CHECK_THROWS_AS(hodge7(Three7Form{}, bad), NotPositive);
}

TEST_CASE("hodge7 splits on block metrics") {
    Rng rng(79);
    for (int s = 0; s < 20; ++s) {
        check_split<0, 3>(rng);
        check_split<1, 2>(rng);
        check_split<2, 1>(rng);
        check_split<3, 0>(rng);
    }
}

TEST_CASE("star psi = phi on the lift") {
    const FiberLift flat = lift(standard_triple());
    CHECK(check_star7(flat.phi, flat.psi, flat.g7.g) < 1e-15);
    Rng rng(83);
    double worst = 0.0;
    for (int s = 0; s < 200; ++s) {
        const FiberLift fl = lift(random_positive_triple(rng));
        worst = std::fmax(worst, check_star7(fl.phi, fl.psi, fl.g7.g) / std::fmax(1.0, fl.phi.max_abs()));
    }
    CHECK(worst <= 1e-9);

    // negative control: psi built from w instead of the dual triple
    Triple t = standard_triple();
    t[0] = 3.0 * t[0];
    const FiberLift fl = lift(t);
    const Four7Form wrong = build_psi(t, fl.mu);
    CHECK(check_star7(fl.phi, wrong, fl.g7.g) > 0.1);
}

TEST_CASE("assemble_dphi and the torsion trace") {
    // d w_1 = e^123 gives d phi = dt^1 ^ e^123
    std::array<Three4Form, 3> dw{};
    dw[0] = Three4Form::basis(0b1110u);
    const Four7Form dphi = assemble_dphi(dw);
    CHECK(dphi.at_mask(0b1u | (0b1110u << 3)) == 1.0);
    double rest = 0.0;
    for (double v : dphi.c) rest += std::fabs(v);
    CHECK(rest == 1.0);

    // dt^j ^ dw_j pairs with dt^123 only through a repeated dt, so the trace vanishes
    Rng rng(89);
    for (int s = 0; s < 50; ++s) {
        const FiberLift fl = lift(random_positive_triple(rng));
        std::array<Three4Form, 3> d{};
        for (auto& f : d) f = random_form<4, 3>(rng);
        CHECK(std::fabs(torsion_trace(fl.phi, assemble_dphi(d), fl.g7.g)) < 1e-12);
    }

    // an X4-volume component c e^0123 gives phi ^ dphi = c vol, so Tr T = c/4
    const FiberLift flat = lift(standard_triple());
    const double c = 0.8;
    CHECK(torsion_trace(flat.phi, embed_volume(c), flat.g7.g) == doctest::Approx(c / 4.0));
    // with g = lambda I the volume is lambda^(7/2)
    const double lam = 1.5;
    CHECK(torsion_trace(flat.phi, embed_volume(c), lam * Metric7::identity())
          == doctest::Approx(c / 4.0 / std::pow(lam, 3.5)));
}
