#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Dense>

namespace hsflow {

/// Symmetric N x N matrix storing only the upper triangle (row-major packing).
/// Symmetry is structural: (i,j) and (j,i) address the same slot.
template <int N>
class SymMat {
public:
    static constexpr int dim = N;
    static constexpr std::size_t packed_size = static_cast<std::size_t>(N * (N + 1) / 2);

    constexpr SymMat() = default;

    static SymMat identity() {
        SymMat s;
        for (int i = 0; i < N; ++i) s(i, i) = 1.0;
        return s;
    }

    static SymMat diagonal(const std::array<double, N>& d) {
        SymMat s;
        for (int i = 0; i < N; ++i) s(i, i) = d[i];
        return s;
    }

    /// Builds from a dense matrix, averaging (i,j) and (j,i).
    static SymMat from_dense(const Eigen::Matrix<double, N, N>& m) {
        SymMat s;
        for (int i = 0; i < N; ++i)
            for (int j = i; j < N; ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
        return s;
    }

    constexpr double& operator()(int i, int j) { return data_[slot(i, j)]; }
    constexpr double operator()(int i, int j) const { return data_[slot(i, j)]; }

    const std::array<double, packed_size>& packed() const { return data_; }
    std::array<double, packed_size>& packed() { return data_; }

    Eigen::Matrix<double, N, N> dense() const {
        Eigen::Matrix<double, N, N> m;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) m(i, j) = (*this)(i, j);
        return m;
    }

    SymMat& operator*=(double a) {
        for (auto& v : data_) v *= a;
        return *this;
    }
    friend SymMat operator*(double a, SymMat s) { return s *= a; }
    friend SymMat operator*(SymMat s, double a) { return s *= a; }
    friend SymMat operator+(SymMat a, const SymMat& b) {
        for (std::size_t k = 0; k < packed_size; ++k) a.data_[k] += b.data_[k];
        return a;
    }
    friend SymMat operator-(SymMat a, const SymMat& b) {
        for (std::size_t k = 0; k < packed_size; ++k) a.data_[k] -= b.data_[k];
        return a;
    }

    /// Ascending eigenvalues.
    Eigen::Matrix<double, N, 1> eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> es(dense(), Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }

    double min_eigenvalue() const { return eigenvalues()(0); }
    double max_eigenvalue() const { return eigenvalues()(N - 1); }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = v > m ? v : (-v > m ? -v : m);
        return m;
    }

    double max_abs_diff(const SymMat& o) const {
        double m = 0.0;
        for (std::size_t k = 0; k < packed_size; ++k) {
            const double d = data_[k] > o.data_[k] ? data_[k] - o.data_[k] : o.data_[k] - data_[k];
            if (d > m) m = d;
        }
        return m;
    }

private:
    static constexpr std::size_t slot(int i, int j) {
        if (i > j) {
            const int t = i;
            i = j;
            j = t;
        }
        // rows above i contribute N, N-1, ..., N-i+1 entries
        return static_cast<std::size_t>(i * N - i * (i - 1) / 2 + (j - i));
    }

    std::array<double, packed_size> data_{};
};

using SymMat3 = SymMat<3>;
/// Metric on R^4 in the coordinate coframe (e^0..e^3); orientation e^{0123} is positive.
using Metric4 = SymMat<4>;
/// Metric on R^7 in the coframe (dt^1, dt^2, dt^3, e^0, e^1, e^2, e^3).
using Metric7 = SymMat<7>;

/// General (not necessarily symmetric) 3 x 3 matrix.
using Mat3 = std::array<std::array<double, 3>, 3>;

}  // namespace hsflow
