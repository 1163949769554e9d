#pragma once

// Slow reference implementations built on full antisymmetric tensors and
// textbook index formulas. They share no code with the library's
// minor-based exterior algebra.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "hsflow/triple_algebra.hpp"

namespace oracle {

/// Sign of the permutation taking idx to sorted order; 0 on a repeated index.
inline int perm_sign(std::vector<int> idx) {
    int sign = 1;
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j) {
            if (idx[i] == idx[j]) return 0;
            if (idx[i] > idx[j]) sign = -sign;
        }
    return sign;
}

/// Increasing k-tuples of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> combos(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

/// Full antisymmetric rank-k tensor in dimension n, flat row-major.
struct Tensor {
    int n = 0;
    int k = 0;
    std::vector<double> a;

    Tensor(int n_, int k_) : n(n_), k(k_), a(static_cast<std::size_t>(std::pow(n_, k_)), 0.0) {}

    std::size_t flat(const std::vector<int>& idx) const {
        std::size_t f = 0;
        for (int i : idx) f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
        return f;
    }
    std::vector<int> unflat(std::size_t f) const {
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (int i = k - 1; i >= 0; --i) {
            idx[static_cast<std::size_t>(i)] = static_cast<int>(f % static_cast<std::size_t>(n));
            f /= static_cast<std::size_t>(n);
        }
        return idx;
    }
};

/// Coefficients on the lexicographic basis -> components T_{i1..ik}, with
/// beta = sum_{i1<..<ik} beta_I e^I = (1/k!) T_{i1..ik} e^{i1} ^ .. ^ e^{ik}.
inline Tensor expand(int n, int k, const std::vector<double>& lex) {
    Tensor t(n, k);
    const auto cs = combos(n, k);
    for (std::size_t f = 0; f < t.a.size(); ++f) {
        auto idx = t.unflat(f);
        const int s = perm_sign(idx);
        if (s == 0) continue;
        std::sort(idx.begin(), idx.end());
        const auto pos = std::find(cs.begin(), cs.end(), idx) - cs.begin();
        t.a[f] = s * lex[static_cast<std::size_t>(pos)];
    }
    return t;
}

inline std::vector<double> contract_lex(const Tensor& t) {
    std::vector<double> out;
    for (const auto& c : combos(t.n, t.k)) out.push_back(t.a[t.flat(c)]);
    return out;
}

/// (*beta)_J = sqrt(det g)/k! beta^{I} eps_{I J}, indices raised with g^{-1}.
inline std::vector<double> hodge(int n, int k, const std::vector<double>& lex, const Eigen::MatrixXd& g) {
    const Eigen::MatrixXd gi = g.inverse();
    const Tensor low = expand(n, k, lex);
    Tensor up(n, k);
    for (std::size_t f = 0; f < up.a.size(); ++f) {
        const auto I = up.unflat(f);
        double acc = 0.0;
        for (std::size_t h = 0; h < low.a.size(); ++h) {
            if (low.a[h] == 0.0) continue;
            const auto J = low.unflat(h);
            double w = low.a[h];
            for (int m = 0; m < k; ++m) w *= gi(I[static_cast<std::size_t>(m)], J[static_cast<std::size_t>(m)]);
            acc += w;
        }
        up.a[f] = acc;
    }
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    const double vol = std::sqrt(g.determinant());
    std::vector<double> out;
    for (const auto& J : combos(n, n - k)) {
        double acc = 0.0;
        for (std::size_t f = 0; f < up.a.size(); ++f) {
            if (up.a[f] == 0.0) continue;
            auto idx = up.unflat(f);
            idx.insert(idx.end(), J.begin(), J.end());
            const int s = perm_sign(idx);
            if (s != 0) acc += s * up.a[f];
        }
        out.push_back(vol * acc / fact);
    }
    return out;
}

/// Antisymmetric coefficient matrix of a 2-form in the (01,02,03,23,31,12) basis.
inline Eigen::Matrix4d antisym(const hsflow::Two4Form& w) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    const std::array<std::array<int, 2>, 6> pairs{{{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 1}, {1, 2}}};
    const auto c = w.coeffs();
    for (int s = 0; s < 6; ++s) {
        m(pairs[s][0], pairs[s][1]) = c[s];
        m(pairs[s][1], pairs[s][0]) = -c[s];
    }
    return m;
}

/// a ^ b on e^0123 by summing all 36 basis products with explicit permutation signs.
inline double wedge22(const hsflow::Two4Form& a, const hsflow::Two4Form& b) {
    const std::array<std::array<int, 2>, 6> pairs{{{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 1}, {1, 2}}};
    const auto ca = a.coeffs();
    const auto cb = b.coeffs();
    double acc = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            acc += ca[i] * cb[j] * perm_sign({pairs[i][0], pairs[i][1], pairs[j][0], pairs[j][1]});
    return acc;
}

/// R_ab = 1/6 eps_ijk (e_a -| w_i) ^ (e_b -| w_j) ^ w_k, coefficient on e^0123.
inline Eigen::Matrix4d metric_density(const hsflow::Triple& t) {
    std::array<Eigen::Matrix4d, 3> w;
    for (int i = 0; i < 3; ++i) w[i] = antisym(t[i]);
    Eigen::Matrix4d r = Eigen::Matrix4d::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k) {
                        const int e = perm_sign({i, j, k});
                        if (e == 0) continue;
                        // u ^ v ^ W = 1/2 eps_cdef u_c v_d W_ef
                        double acc = 0.0;
                        for (int c = 0; c < 4; ++c)
                            for (int d = 0; d < 4; ++d)
                                for (int ee = 0; ee < 4; ++ee)
                                    for (int f = 0; f < 4; ++f) {
                                        const int s = perm_sign({c, d, ee, f});
                                        if (s) acc += s * w[i](a, c) * w[j](b, d) * w[k](ee, f);
                                    }
                        r(a, b) += e * 0.5 * acc / 6.0;
                    }
    return r;
}

/// B_ab = 1/6 (e_a -| phi) ^ (e_b -| phi) ^ phi on R^7, from full tensors.
inline Eigen::MatrixXd phi_density(const std::vector<double>& phi_lex) {
    const Tensor p = expand(7, 3, phi_lex);
    auto P = [&](int a, int b, int c) { return p.a[(static_cast<std::size_t>(a) * 7 + b) * 7 + c]; };
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(7, 7);
    std::vector<int> perm{0, 1, 2, 3, 4, 5, 6};
    // sum over permutations sigma of eps(sigma) * X_{s0 s1} Y_{s2 s3} P_{s4 s5 s6}
    std::vector<std::pair<std::vector<int>, int>> perms;
    do perms.emplace_back(perm, perm_sign(perm));
    while (std::next_permutation(perm.begin(), perm.end()));
    for (int a = 0; a < 7; ++a)
        for (int b = a; b < 7; ++b) {
            double acc = 0.0;
            for (const auto& [s, sg] : perms) acc += sg * P(a, s[0], s[1]) * P(b, s[2], s[3]) * P(s[4], s[5], s[6]);
            // forms (1/2!)(1/2!)(1/3!) normalisations
            B(a, b) = B(b, a) = acc / (2.0 * 2.0 * 6.0) / 6.0;
        }
    return B;
}

}  // namespace oracle
