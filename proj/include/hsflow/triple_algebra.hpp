#pragma once

// Pointwise algebra of positive triples of 2-forms on R^4.
//
// Coordinate coframe e^0..e^3, orientation e^{0123} > 0. Two-forms use the
// ordered basis (e^01, e^02, e^03, e^23, e^31, e^12) so that the standard
// hyperkaehler triple w_i = e^0i + e^jk is two-hot in every component.
// The permutation symbol is normalised to eps_123 = +1.

#include <array>
#include <cstddef>

#include "hsflow/errors.hpp"
#include "hsflow/exterior.hpp"
#include "hsflow/symmat.hpp"

namespace hsflow {

struct Two4Form {
    double c01 = 0.0;
    double c02 = 0.0;
    double c03 = 0.0;
    double c23 = 0.0;
    double c31 = 0.0;
    double c12 = 0.0;

    static Two4Form from_coeffs(const std::array<double, 6>& c) { return {c[0], c[1], c[2], c[3], c[4], c[5]}; }
    std::array<double, 6> coeffs() const { return {c01, c02, c03, c23, c31, c12}; }

    /// Lexicographic representation (e^01, e^02, e^03, e^12, e^13, e^23).
    ext::Form<4, 2> to_lex() const;
    static Two4Form from_lex(const ext::Form<4, 2>& f);

    Two4Form& operator+=(const Two4Form& o);
    Two4Form& operator-=(const Two4Form& o);
    Two4Form& operator*=(double a);
    friend Two4Form operator+(Two4Form a, const Two4Form& b) { return a += b; }
    friend Two4Form operator-(Two4Form a, const Two4Form& b) { return a -= b; }
    friend Two4Form operator*(double s, Two4Form a) { return a *= s; }
    friend Two4Form operator*(Two4Form a, double s) { return a *= s; }

    double max_abs() const;
};

struct Triple {
    std::array<Two4Form, 3> omega{};

    Two4Form& operator[](int i) { return omega[static_cast<std::size_t>(i)]; }
    const Two4Form& operator[](int i) const { return omega[static_cast<std::size_t>(i)]; }

    double max_abs_diff(const Triple& o) const;
};

/// Coefficient m of a reference volume form m * e^{0123}; always positive.
class VolumeCoeff {
public:
    explicit VolumeCoeff(double m = 1.0);
    double m() const noexcept { return m_; }

private:
    double m_;
};

/// w_i = e^0 ^ e^i + e^j ^ e^k with (i,j,k) cyclic.
Triple standard_triple();

/// a ^ b = wedge22(a, b) e^{0123}.
double wedge22(const Two4Form& a, const Two4Form& b);

/// w_i ^ w_j = 2 Q_ij mu.
SymMat3 gram(const Triple& t, VolumeCoeff mu);

/// Leading principal minors strictly above tol.
bool is_positive(const SymMat3& q, double tol = 1e-12);

double det3(const SymMat3& s);
double det3(const Mat3& s);
SymMat3 adj3(const SymMat3& s);
SymMat3 inv3(const SymMat3& s);

/// max_{p,q,l} | sum eps_ijk S_ip S_jq S_kl - det(S) eps_pql |.
double levi_civita_det_check(const Mat3& s);
double levi_civita_det_check(const SymMat3& s);

/// out_i = a_ik w_k.
Triple combine(const Mat3& a, const Triple& t);
Triple combine(const SymMat3& a, const Triple& t);

/// sigma_i = Q^{ik} w_k.
Triple dual_triple(const Triple& t, const SymMat3& q);

/// Coefficients R_ab of (1/6) eps_ijk (e_a -| w_i) ^ (e_b -| w_j) ^ w_k against e^{0123}.
/// This is g_ab sqrt(det g) in coordinates.
Metric4 metric_density(const Triple& t);

struct TripleMetric {
    Metric4 g;
    /// mu_w = sqrt(det g) e^{0123}.
    VolumeCoeff mu;
};

/// Metric g_w and Riemannian volume mu_w of a positive triple. Both are
/// independent of the reference form; `mu` only fixes Q for the
/// consistency check mu_w = det(Q)^{1/3} mu.
TripleMetric metric_from_triple(const Triple& t, VolumeCoeff mu = VolumeCoeff{1.0});

struct Normalized {
    SymMat3 q;
    VolumeCoeff mu;
};

/// Q measured against mu_w, so det Q = 1.
Normalized normalize(const Triple& t, VolumeCoeff mu = VolumeCoeff{1.0});

/// 6 x 6 matrix of the Hodge star on 2-forms in the Two4Form basis.
Eigen::Matrix<double, 6, 6> hodge2_matrix(const Metric4& g, VolumeCoeff mu_g);

/// Hodge star on 2-forms; mu_g must be sqrt(det g).
Two4Form hodge2(const Two4Form& b, const Metric4& g, VolumeCoeff mu_g);

/// <b, c>_g on Lambda^2 via the inverse metric.
double inner2(const Two4Form& b, const Two4Form& c, const Metric4& g);

/// w~_i = A_ik w_k.
Triple rescale_triple(const Triple& t, const SymMat3& a);

/// Pull back by the linear coframe change e^a -> E^a_b e^b.
Two4Form pullback(const Two4Form& b, const Eigen::Matrix4d& e);
Triple pullback(const Triple& t, const Eigen::Matrix4d& e);

}  // namespace hsflow
