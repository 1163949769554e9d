#pragma once

// Discrete exterior calculus on flat periodic 4-torus lattices.
//
// Points are stored row-major with x^3 fastest:
//   p = ((i0 * n1 + i1) * n2 + i2) * n3 + i3.
// A FormField of degree k stores C(4,k) component arrays back to back
// (component-major). Component order per degree:
//   0: (1)
//   1: (e^0, e^1, e^2, e^3)
//   2: (e^01, e^02, e^03, e^23, e^31, e^12)   -- same as Two4Form
//   3: (e^012, e^013, e^023, e^123)           -- lexicographic
//   4: (e^0123)

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hsflow/symmat.hpp"
#include "hsflow/triple_algebra.hpp"

namespace hsflow {

class Lattice {
public:
    Lattice(std::array<int, 4> n, std::array<double, 4> lengths);

    const std::array<int, 4>& n() const noexcept { return n_; }
    const std::array<double, 4>& lengths() const noexcept { return lengths_; }
    double h(int axis) const noexcept { return lengths_[axis] / n_[axis]; }
    double min_h() const noexcept;
    std::size_t points() const noexcept { return points_; }
    std::size_t stride(int axis) const noexcept { return strides_[axis]; }
    double cell_volume() const noexcept;

    std::size_t index(const std::array<int, 4>& i) const noexcept;
    std::array<int, 4> coords(std::size_t p) const noexcept;
    /// Physical position x^a = i_a h_a.
    std::array<double, 4> position(std::size_t p) const noexcept;

    friend bool operator==(const Lattice& a, const Lattice& b) { return a.n_ == b.n_ && a.lengths_ == b.lengths_; }

private:
    std::array<int, 4> n_;
    std::array<double, 4> lengths_;
    std::array<std::size_t, 4> strides_{};
    std::size_t points_ = 0;
};

/// Number of components of a k-form on R^4.
int form_components(int degree);

class FormField {
public:
    FormField(Lattice lattice, int degree);

    const Lattice& lattice() const noexcept { return lattice_; }
    int degree() const noexcept { return degree_; }
    int components() const noexcept { return components_; }
    std::size_t points() const noexcept { return lattice_.points(); }

    std::span<double> component(int c) { return {data_.data() + static_cast<std::size_t>(c) * points(), points()}; }
    std::span<const double> component(int c) const {
        return {data_.data() + static_cast<std::size_t>(c) * points(), points()};
    }
    double& at(int c, std::size_t p) { return data_[static_cast<std::size_t>(c) * points() + p]; }
    double at(int c, std::size_t p) const { return data_[static_cast<std::size_t>(c) * points() + p]; }

    std::vector<double>& raw() noexcept { return data_; }
    const std::vector<double>& raw() const noexcept { return data_; }

    FormField& operator+=(const FormField& o);
    FormField& operator-=(const FormField& o);
    FormField& operator*=(double a);
    /// this += a * o
    FormField& axpy(double a, const FormField& o);

    double max_abs() const;

private:
    Lattice lattice_;
    int degree_;
    int components_;
    std::vector<double> data_;
};

struct TripleField {
    std::array<FormField, 3> w;

    explicit TripleField(const Lattice& lattice);

    const Lattice& lattice() const noexcept { return w[0].lattice(); }
    std::size_t points() const noexcept { return w[0].points(); }
    FormField& operator[](int i) { return w[static_cast<std::size_t>(i)]; }
    const FormField& operator[](int i) const { return w[static_cast<std::size_t>(i)]; }

    Triple at(std::size_t p) const;
    void set(std::size_t p, const Triple& t);

    /// Every point set to the same triple.
    static TripleField constant(const Lattice& lattice, const Triple& t);

    TripleField& axpy(double a, const TripleField& o);
    double max_abs_diff(const TripleField& o) const;
};

/// Periodic central difference along `axis`, order 2 or 4.
std::vector<double> partial(const Lattice& lattice, std::span<const double> f, int axis, int order = 4);

/// Exterior derivative, degree k -> k+1.
FormField d(const FormField& f, int order = 4);

/// Volume-weighted integrals over the six coordinate 2-tori, in the order
/// (01, 02, 03, 23, 31, 12).
std::array<double, 6> periods(const FormField& w);

/// Per-point normalised data: Q against mu_w (det Q = 1), g_w and mu_w.
struct PointwiseGeometry {
    std::vector<SymMat3> q;
    std::vector<Metric4> g;
    std::vector<double> mu;
};

/// Applies normalize and metric_from_triple at every point. Throws
/// NotPositive naming the flat lattice index if the induced metric fails or
/// the smallest eigenvalue of Q drops to min_eig_q or below.
PointwiseGeometry pointwise_normalize(const TripleField& tf, double min_eig_q = 0.0);

/// Per-point Hodge star matrices: Lambda^2 -> Lambda^2 in the Two4Form basis
/// and Lambda^3 -> Lambda^1 (lexicographic 3-forms to (e^0..e^3)).
struct HodgeField {
    std::vector<Eigen::Matrix<double, 6, 6>> star2;
    std::vector<Eigen::Matrix4d> star3;

    static HodgeField build(std::span<const Metric4> g, std::span<const double> mu);
};

/// d* beta = - * d * beta on 2-forms.
FormField codiff2(const FormField& beta, std::span<const Metric4> g, std::span<const double> mu, int order = 4);
FormField codiff2(const FormField& beta, const HodgeField& stars, int order = 4);

}  // namespace hsflow
