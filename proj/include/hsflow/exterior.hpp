#pragma once

// Dense exterior algebra on R^N with the lexicographic basis of Lambda^K.
// A basis K-form e^{i1...iK} (i1 < ... < iK) is addressed by the bitmask
// with bits i1..iK set. All signs are derived from the fixed coframe order.

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>

#include <Eigen/Dense>

#include "hsflow/symmat.hpp"

namespace hsflow::ext {

constexpr int binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    int r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Sign of e^A ^ e^B relative to e^{A|B}, for disjoint masks.
constexpr int wedge_sign(unsigned a, unsigned b) {
    int inversions = 0;
    for (unsigned j = 0; j < 32; ++j) {
        if (b & (1u << j)) inversions += std::popcount(a & ~((2u << j) - 1u));
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

template <int N, int K>
constexpr std::array<unsigned, binom(N, K)> lex_masks() {
    std::array<unsigned, binom(N, K)> out{};
    if constexpr (K == 0) {
        out[0] = 0u;
    } else {
        std::array<int, K> idx{};
        for (int i = 0; i < K; ++i) idx[i] = i;
        int pos = 0;
        while (true) {
            unsigned m = 0;
            for (int i = 0; i < K; ++i) m |= 1u << idx[i];
            out[pos++] = m;
            int i = K - 1;
            while (i >= 0 && idx[i] == N - K + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < K; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

template <int N, int K>
struct Form {
    static_assert(N > 0 && N <= 16 && K >= 0 && K <= N);
    static constexpr int dim = N;
    static constexpr int degree = K;
    static constexpr int size = binom(N, K);
    static constexpr std::array<unsigned, size> masks = lex_masks<N, K>();
    static constexpr unsigned top_mask = (1u << N) - 1u;

    std::array<double, size> c{};

    static constexpr int index_of(unsigned mask) {
        for (int i = 0; i < size; ++i)
            if (masks[i] == mask) return i;
        return -1;
    }

    static Form basis(unsigned mask, double value = 1.0) {
        Form f;
        f.c[index_of(mask)] = value;
        return f;
    }

    double& operator[](int i) { return c[i]; }
    double operator[](int i) const { return c[i]; }
    double& at_mask(unsigned mask) { return c[index_of(mask)]; }
    double at_mask(unsigned mask) const { return c[index_of(mask)]; }

    Form& operator+=(const Form& o) {
        for (int i = 0; i < size; ++i) c[i] += o.c[i];
        return *this;
    }
    Form& operator-=(const Form& o) {
        for (int i = 0; i < size; ++i) c[i] -= o.c[i];
        return *this;
    }
    Form& operator*=(double a) {
        for (auto& v : c) v *= a;
        return *this;
    }
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator-(Form a) { return a *= -1.0; }
    friend Form operator*(double s, Form a) { return a *= s; }
    friend Form operator*(Form a, double s) { return a *= s; }

    double max_abs() const {
        double m = 0.0;
        for (double v : c) m = std::fmax(m, std::fabs(v));
        return m;
    }
};

template <int N, int K1, int K2>
Form<N, K1 + K2> wedge(const Form<N, K1>& a, const Form<N, K2>& b) {
    Form<N, K1 + K2> out;
    for (int i = 0; i < Form<N, K1>::size; ++i) {
        if (a.c[i] == 0.0) continue;
        const unsigned ma = Form<N, K1>::masks[i];
        for (int j = 0; j < Form<N, K2>::size; ++j) {
            const unsigned mb = Form<N, K2>::masks[j];
            if (ma & mb) continue;
            out.at_mask(ma | mb) += wedge_sign(ma, mb) * a.c[i] * b.c[j];
        }
    }
    return out;
}

/// Interior product of the coordinate vector e_a with a K-form.
template <int N, int K>
Form<N, K - 1> interior(int a, const Form<N, K>& f) {
    static_assert(K >= 1);
    Form<N, K - 1> out;
    const unsigned bit = 1u << a;
    for (int i = 0; i < Form<N, K>::size; ++i) {
        const unsigned m = Form<N, K>::masks[i];
        if (!(m & bit)) continue;
        const int before = std::popcount(m & (bit - 1u));
        out.at_mask(m & ~bit) += ((before % 2 == 0) ? 1.0 : -1.0) * f.c[i];
    }
    return out;
}

namespace detail {

template <int N, int K>
struct MaskIndexTable {
    std::array<std::array<int, (K > 0 ? K : 1)>, binom(N, K)> idx{};
};

template <int N, int K>
constexpr MaskIndexTable<N, K> make_mask_indices() {
    MaskIndexTable<N, K> t;
    const auto masks = lex_masks<N, K>();
    for (int m = 0; m < binom(N, K); ++m) {
        int k = 0;
        for (int i = 0; i < N; ++i)
            if (masks[m] & (1u << i)) t.idx[m][k++] = i;
    }
    return t;
}

template <int N, int K>
inline constexpr MaskIndexTable<N, K> kMaskIndices = make_mask_indices<N, K>();

/// Minor of m with rows/columns given by the lex positions of two K-masks.
template <int N, int K>
double minor_det(const Eigen::Matrix<double, N, N>& m, int row_form, int col_form) {
    if constexpr (K == 0) {
        return 1.0;
    } else {
        const auto& r = kMaskIndices<N, K>.idx[row_form];
        const auto& c = kMaskIndices<N, K>.idx[col_form];
        if constexpr (K == 1) {
            return m(r[0], c[0]);
        } else if constexpr (K == 2) {
            return m(r[0], c[0]) * m(r[1], c[1]) - m(r[0], c[1]) * m(r[1], c[0]);
        } else if constexpr (K == 3) {
            return m(r[0], c[0]) * (m(r[1], c[1]) * m(r[2], c[2]) - m(r[1], c[2]) * m(r[2], c[1])) -
                   m(r[0], c[1]) * (m(r[1], c[0]) * m(r[2], c[2]) - m(r[1], c[2]) * m(r[2], c[0])) +
                   m(r[0], c[2]) * (m(r[1], c[0]) * m(r[2], c[1]) - m(r[1], c[1]) * m(r[2], c[0]));
        } else {
            Eigen::Matrix<double, K, K> sub;
            for (int i = 0; i < K; ++i)
                for (int j = 0; j < K; ++j) sub(i, j) = m(r[i], c[j]);
            return sub.determinant();
        }
    }
}

/// For each K-form basis element: row of its complement and the sign of e^I ^ e^{I^c}.
template <int N, int K>
struct ComplementTable {
    std::array<int, binom(N, K)> row{};
    std::array<int, binom(N, K)> sign{};
};

template <int N, int K>
constexpr ComplementTable<N, K> make_complements() {
    ComplementTable<N, K> t;
    const auto masks = lex_masks<N, K>();
    const auto cmasks = lex_masks<N, N - K>();
    constexpr unsigned top = (1u << N) - 1u;
    for (int i = 0; i < binom(N, K); ++i) {
        const unsigned comp = top & ~masks[i];
        for (int j = 0; j < binom(N, N - K); ++j)
            if (cmasks[j] == comp) t.row[i] = j;
        t.sign[i] = wedge_sign(masks[i], comp);
    }
    return t;
}

template <int N, int K>
inline constexpr ComplementTable<N, K> kComplements = make_complements<N, K>();

}  // namespace detail

/// Gram matrix of the induced inner product on Lambda^K, given the inverse metric.
template <int N, int K>
Eigen::Matrix<double, binom(N, K), binom(N, K)> form_gram(const Eigen::Matrix<double, N, N>& ginv) {
    constexpr int S = binom(N, K);
    Eigen::Matrix<double, S, S> G;
    for (int i = 0; i < S; ++i)
        for (int j = i; j < S; ++j) {
            G(i, j) = detail::minor_det<N, K>(ginv, i, j);
            G(j, i) = G(i, j);
        }
    return G;
}

/// Matrix of the Hodge star Lambda^K -> Lambda^{N-K} defined by
/// a ^ *b = <a,b>_g vol_g, with vol_g = vol_coeff * e^{0..N-1}.
template <int N, int K>
Eigen::Matrix<double, binom(N, N - K), binom(N, K)> hodge_matrix(const Eigen::Matrix<double, N, N>& ginv,
                                                                   double vol_coeff) {
    constexpr int S = binom(N, K);
    const auto G = form_gram<N, K>(ginv);
    Eigen::Matrix<double, binom(N, N - K), S> H;
    const auto& comp = detail::kComplements<N, K>;
    for (int i = 0; i < S; ++i) {
        const double s = comp.sign[i] * vol_coeff;
        for (int j = 0; j < S; ++j) H(comp.row[i], j) = s * G(i, j);
    }
    return H;
}

template <int N, int K>
Form<N, N - K> hodge(const Form<N, K>& f, const SymMat<N>& g) {
    const Eigen::Matrix<double, N, N> gd = g.dense();
    const double vol = std::sqrt(gd.determinant());
    const auto H = hodge_matrix<N, K>(gd.inverse().eval(), vol);
    Form<N, N - K> out;
    for (int r = 0; r < Form<N, N - K>::size; ++r) {
        double acc = 0.0;
        for (int j = 0; j < Form<N, K>::size; ++j) acc += H(r, j) * f.c[j];
        out.c[r] = acc;
    }
    return out;
}

template <int N, int K>
double inner(const Form<N, K>& a, const Form<N, K>& b, const SymMat<N>& g) {
    const auto G = form_gram<N, K>(g.dense().inverse().eval());
    double acc = 0.0;
    for (int i = 0; i < Form<N, K>::size; ++i)
        for (int j = 0; j < Form<N, K>::size; ++j) acc += a.c[i] * G(i, j) * b.c[j];
    return acc;
}

}  // namespace hsflow::ext
