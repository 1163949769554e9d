#include "hsflow/sampling.hpp"

#include <cmath>
#include <limits>

namespace hsflow {

namespace {

template <int N>
double condition_number(const Eigen::Matrix<double, N, N>& m) {
    // singular values are square roots of the eigenvalues of M^T M
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> es(m.transpose() * m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    if (!(ev(0) > 0.0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(ev(N - 1) / ev(0));
}

}  // namespace

double uniform(Rng& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

Mat3 random_mat3(Rng& rng, double lo, double hi) {
    Mat3 m{};
    for (auto& row : m)
        for (auto& v : row) v = uniform(rng, lo, hi);
    return m;
}

Mat3 random_invertible(Rng& rng, double max_cond) {
    while (true) {
        Mat3 m = random_mat3(rng);
        Eigen::Matrix3d e;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) e(i, j) = m[i][j];
        if (condition_number<3>(e) > max_cond) continue;
        if (det3(m) < 0.0) m[0] = {-m[0][0], -m[0][1], -m[0][2]};
        return m;
    }
}

Eigen::Matrix4d random_coframe(Rng& rng, double max_cond) {
    while (true) {
        Eigen::Matrix4d e;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) e(i, j) = uniform(rng, -1.0, 1.0);
        if (condition_number<4>(e) > max_cond) continue;
        if (e.determinant() < 0.0) e.row(0) *= -1.0;
        return e;
    }
}

Triple random_combination_triple(Rng& rng, double max_cond) {
    return combine(random_invertible(rng, max_cond), standard_triple());
}

Triple random_positive_triple(Rng& rng, double max_cond) {
    const Mat3 m = random_invertible(rng, max_cond);
    return combine(m, pullback(standard_triple(), random_coframe(rng)));
}

SymMat3 random_det1_spd(Rng& rng, double spread) {
    Eigen::Matrix3d a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = uniform(rng, -spread, spread);
    Eigen::Matrix3d s = a * a.transpose() + 0.2 * Eigen::Matrix3d::Identity();
    s /= std::cbrt(s.determinant());
    return SymMat3::from_dense(s);
}

}  // namespace hsflow
