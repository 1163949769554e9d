#pragma once

// G2 algebra on the 7-dimensional fiber of T^3 x X^4.
//
// Coframe order is (dt^1, dt^2, dt^3, e^0, e^1, e^2, e^3) = indices 0..6;
// forms use the lexicographic basis of ext::Form<7, k>. Orientation
// dt^{123} ^ e^{0123} is positive.

#include <array>
#include <functional>

#include "hsflow/exterior.hpp"
#include "hsflow/symmat.hpp"
#include "hsflow/triple_algebra.hpp"

namespace hsflow {

using One7Form = ext::Form<7, 1>;
using Two7Form = ext::Form<7, 2>;
using Three7Form = ext::Form<7, 3>;
using Four7Form = ext::Form<7, 4>;
using Seven7Form = ext::Form<7, 7>;

/// Lexicographic 3-form on R^4, basis (e^012, e^013, e^023, e^123).
using Three4Form = ext::Form<4, 3>;

/// Embeds a 2-form on X^4 into the 7-dimensional coframe.
Two7Form embed_x4(const Two4Form& w);
ext::Form<7, 3> embed_x4(const Three4Form& w);
ext::Form<7, 4> embed_volume(double coeff);
/// dt^i, i = 0, 1, 2 for dt^1, dt^2, dt^3.
One7Form dt(int i);

/// phi = dt^123 - dt^i ^ w_i.
Three7Form build_phi(const Triple& t);

/// psi = mu_sigma - dt^12 ^ sigma_3 - dt^31 ^ sigma_2 - dt^23 ^ sigma_1.
Four7Form build_psi(const Triple& sigma, VolumeCoeff mu_sigma);

/// Coefficients B_ab of (1/6)(e_a -| phi)^(e_b -| phi)^phi against the coordinate volume.
Metric7 phi_metric_density(const Three7Form& phi);

struct G2Metric {
    Metric7 g;
    VolumeCoeff vol;
};

/// g_phi and its volume: B = g sqrt(det g), so g = B det(B)^{-1/9}, vol = det(B)^{1/9}.
G2Metric metric_from_phi(const Three7Form& phi);

/// Metric Q_ij dt^i dt^j + g_x on R^7.
Metric7 block_metric(const SymMat3& q, const Metric4& gx);

/// Coefficients of forms on T^3: one-forms in (dt^1, dt^2, dt^3), two-forms in
/// (dt^23, dt^31, dt^12).
using T3Coeffs = std::array<double, 3>;

/// Closed-form Hodge star on T^3 with metric Q_ij dt^i dt^j and det Q = 1.
/// degree 1 maps one-forms to two-forms, degree 2 maps two-forms to one-forms.
T3Coeffs star3_T3(int degree, const T3Coeffs& coeffs, const SymMat3& q);

/// Signature of a replaceable star3 table; used by the verification suite.
using Star3Table = std::function<T3Coeffs(int, const T3Coeffs&, const SymMat3&)>;

/// Generic Hodge star on Lambda^3 / Lambda^4 of R^7.
Four7Form hodge7(const Three7Form& f, const Metric7& g);
Three7Form hodge7(const Four7Form& f, const Metric7& g);

/// Max-norm of *psi - phi.
double check_star7(const Three7Form& phi, const Four7Form& psi, const Metric7& g);

/// d phi = dt^j ^ dw_j for t-independent w_j.
Four7Form assemble_dphi(const std::array<Three4Form, 3>& domega);

/// Tr T = 1/4 *(phi ^ dphi).
double torsion_trace(const Three7Form& phi, const Four7Form& dphi, const Metric7& g);

struct FiberLift {
    SymMat3 q;
    VolumeCoeff mu;
    Metric4 g4;
    Triple sigma;
    Three7Form phi;
    Four7Form psi;
    G2Metric g7;
};

/// Normalises the triple (det Q = 1), forms its dual and the pair (phi, psi).
FiberLift lift(const Triple& t);

}  // namespace hsflow
