#include "hsflow/grid_calculus.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "hsflow/errors.hpp"
#include "hsflow/exterior.hpp"
#include "hsflow/parallel.hpp"

namespace hsflow {

namespace {

struct Slot {
    unsigned mask;
    double sign;  // e^{slot} = sign * e^{mask}
};

std::vector<Slot> slots_for(int degree) {
    if (degree == 2) {
        return {{0b0011u, 1.0}, {0b0101u, 1.0}, {0b1001u, 1.0}, {0b1100u, 1.0}, {0b1010u, -1.0}, {0b0110u, 1.0}};
    }
    std::vector<Slot> out;
    for (int i = 0; i < ext::binom(4, degree); ++i) {
        unsigned m = 0;
        switch (degree) {
            case 0: m = ext::Form<4, 0>::masks[i]; break;
            case 1: m = ext::Form<4, 1>::masks[i]; break;
            case 3: m = ext::Form<4, 3>::masks[i]; break;
            default: m = ext::Form<4, 4>::masks[i]; break;
        }
        out.push_back({m, 1.0});
    }
    return out;
}

struct DTerm {
    int out;
    int in;
    int axis;
    double sign;
};

const std::vector<DTerm>& d_terms(int degree) {
    static const std::array<std::vector<DTerm>, 4> tables = [] {
        std::array<std::vector<DTerm>, 4> t;
        for (int k = 0; k < 4; ++k) {
            const auto in_slots = slots_for(k);
            const auto out_slots = slots_for(k + 1);
            for (int s = 0; s < static_cast<int>(in_slots.size()); ++s)
                for (int a = 0; a < 4; ++a) {
                    const unsigned bit = 1u << a;
                    if (in_slots[s].mask & bit) continue;
                    const unsigned m = in_slots[s].mask | bit;
                    for (int o = 0; o < static_cast<int>(out_slots.size()); ++o) {
                        if (out_slots[o].mask != m) continue;
                        const double sg = out_slots[o].sign * in_slots[s].sign * ext::wedge_sign(bit, in_slots[s].mask);
                        t[k].push_back({o, s, a, sg});
                    }
                }
        }
        return t;
    }();
    return tables[static_cast<std::size_t>(degree)];
}

/// out += coeff * partial_axis(in)
void add_partial(const Lattice& lat, std::span<const double> in, std::span<double> out, int axis, int order,
                 double coeff) {
    // rows of `stride` contiguous points share the same neighbour offsets along `axis`
    const std::size_t stride = lat.stride(axis);
    const int n = lat.n()[axis];
    const std::size_t slab = stride * static_cast<std::size_t>(n);
    const std::size_t rows = lat.points() / stride;
    const double h = lat.h(axis);
    const double c2 = coeff / (2.0 * h);
    const double c4 = coeff / (12.0 * h);
    parallel_for(rows, [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            const int i = static_cast<int>(r % static_cast<std::size_t>(n));
            const std::size_t base = (r / static_cast<std::size_t>(n)) * slab;
            auto row = [&](int off) { return in.data() + base + static_cast<std::size_t>((i + off + n) % n) * stride; };
            double* o = out.data() + base + static_cast<std::size_t>(i) * stride;
            const double* p1 = row(1);
            const double* m1 = row(-1);
            if (order == 2) {
                for (std::size_t k = 0; k < stride; ++k) o[k] += c2 * (p1[k] - m1[k]);
            } else {
                const double* p2 = row(2);
                const double* m2 = row(-2);
                for (std::size_t k = 0; k < stride; ++k) o[k] += c4 * (-p2[k] + 8.0 * p1[k] - 8.0 * m1[k] + m2[k]);
            }
        }
    });
}

void check_order(int order) {
    if (order != 2 && order != 4) throw ValidationError("stencil order must be 2 or 4, got " + std::to_string(order));
}

}  // namespace

Lattice::Lattice(std::array<int, 4> n, std::array<double, 4> lengths) : n_(n), lengths_(lengths) {
    for (int a = 0; a < 4; ++a) {
        if (n_[a] < 4) throw ValidationError("lattice needs at least 4 points per axis, axis " + std::to_string(a));
        if (!(lengths_[a] > 0.0)) throw ValidationError("lattice period lengths must be positive");
    }
    strides_[3] = 1;
    for (int a = 2; a >= 0; --a) strides_[a] = strides_[a + 1] * static_cast<std::size_t>(n_[a + 1]);
    points_ = strides_[0] * static_cast<std::size_t>(n_[0]);
}

double Lattice::min_h() const noexcept {
    double m = h(0);
    for (int a = 1; a < 4; ++a) m = std::fmin(m, h(a));
    return m;
}

double Lattice::cell_volume() const noexcept { return h(0) * h(1) * h(2) * h(3); }

std::size_t Lattice::index(const std::array<int, 4>& i) const noexcept {
    std::size_t p = 0;
    for (int a = 0; a < 4; ++a) p += static_cast<std::size_t>(((i[a] % n_[a]) + n_[a]) % n_[a]) * strides_[a];
    return p;
}

std::array<int, 4> Lattice::coords(std::size_t p) const noexcept {
    std::array<int, 4> i{};
    for (int a = 0; a < 4; ++a) i[a] = static_cast<int>((p / strides_[a]) % static_cast<std::size_t>(n_[a]));
    return i;
}

std::array<double, 4> Lattice::position(std::size_t p) const noexcept {
    const auto i = coords(p);
    return {i[0] * h(0), i[1] * h(1), i[2] * h(2), i[3] * h(3)};
}

int form_components(int degree) { return ext::binom(4, degree); }

FormField::FormField(Lattice lattice, int degree)
    : lattice_(std::move(lattice)), degree_(degree), components_(form_components(degree)) {
    if (degree < 0 || degree > 4) throw ValidationError("form degree must be in 0..4");
    data_.assign(static_cast<std::size_t>(components_) * lattice_.points(), 0.0);
}

FormField& FormField::operator+=(const FormField& o) { return axpy(1.0, o); }
FormField& FormField::operator-=(const FormField& o) { return axpy(-1.0, o); }

FormField& FormField::operator*=(double a) {
    for (auto& v : data_) v *= a;
    return *this;
}

FormField& FormField::axpy(double a, const FormField& o) {
    if (o.degree_ != degree_ || !(o.lattice_ == lattice_)) throw ValidationError("FormField shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += a * o.data_[k];
    return *this;
}

double FormField::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::fmax(m, std::fabs(v));
    return m;
}

TripleField::TripleField(const Lattice& lattice)
    : w{FormField(lattice, 2), FormField(lattice, 2), FormField(lattice, 2)} {}

Triple TripleField::at(std::size_t p) const {
    Triple t;
    for (int i = 0; i < 3; ++i) {
        std::array<double, 6> c{};
        for (int k = 0; k < 6; ++k) c[k] = (*this)[i].at(k, p);
        t[i] = Two4Form::from_coeffs(c);
    }
    return t;
}

void TripleField::set(std::size_t p, const Triple& t) {
    for (int i = 0; i < 3; ++i) {
        const auto c = t[i].coeffs();
        for (int k = 0; k < 6; ++k) (*this)[i].at(k, p) = c[k];
    }
}

TripleField TripleField::constant(const Lattice& lattice, const Triple& t) {
    TripleField tf(lattice);
    for (std::size_t p = 0; p < tf.points(); ++p) tf.set(p, t);
    return tf;
}

TripleField& TripleField::axpy(double a, const TripleField& o) {
    for (int i = 0; i < 3; ++i) (*this)[i].axpy(a, o[i]);
    return *this;
}

double TripleField::max_abs_diff(const TripleField& o) const {
    double m = 0.0;
    for (int i = 0; i < 3; ++i) {
        const auto& a = (*this)[i].raw();
        const auto& b = o[i].raw();
        for (std::size_t k = 0; k < a.size(); ++k) m = std::fmax(m, std::fabs(a[k] - b[k]));
    }
    return m;
}

std::vector<double> partial(const Lattice& lattice, std::span<const double> f, int axis, int order) {
    check_order(order);
    if (f.size() != lattice.points()) throw ValidationError("partial: field size does not match lattice");
    std::vector<double> out(f.size(), 0.0);
    add_partial(lattice, f, out, axis, order, 1.0);
    return out;
}

FormField d(const FormField& f, int order) {
    check_order(order);
    if (f.degree() > 3) throw ValidationError("d: degree must be at most 3");
    FormField out(f.lattice(), f.degree() + 1);
    for (const DTerm& t : d_terms(f.degree()))
        add_partial(f.lattice(), f.component(t.in), out.component(t.out), t.axis, order, t.sign);
    return out;
}

std::array<double, 6> periods(const FormField& w) {
    if (w.degree() != 2) throw ValidationError("periods: expected a 2-form field");
    static constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 1}, {1, 2}}};
    const auto& lat = w.lattice();
    std::array<double, 6> out{};
    for (int c = 0; c < 6; ++c) {
        double sum = 0.0;
        for (double v : w.component(c)) sum += v;
        const double area = lat.lengths()[kPairs[c][0]] * lat.lengths()[kPairs[c][1]];
        out[c] = area * sum / static_cast<double>(lat.points());
    }
    return out;
}

PointwiseGeometry pointwise_normalize(const TripleField& tf, double min_eig_q) {
    const std::size_t n = tf.points();
    PointwiseGeometry geo{std::vector<SymMat3>(n), std::vector<Metric4>(n), std::vector<double>(n)};
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const Triple t = tf.at(p);
            TripleMetric tm;
            try {
                tm = metric_from_triple(t);
            } catch (const NotPositive& e) {
                throw NotPositive(std::string(e.what()) + " at lattice point " + std::to_string(p), p);
            }
            const SymMat3 q = gram(t, tm.mu);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
            es.computeDirect(q.dense(), Eigen::EigenvaluesOnly);
            const double lo = es.eigenvalues()(0);
            if (!(lo > min_eig_q))
                throw NotPositive("min eigenvalue of Q is " + std::to_string(lo) + " at lattice point " +
                                      std::to_string(p),
                                  p);
            geo.q[p] = q;
            geo.g[p] = tm.g;
            geo.mu[p] = tm.mu.m();
        }
    });
    return geo;
}

HodgeField HodgeField::build(std::span<const Metric4> g, std::span<const double> mu) {
    const std::size_t n = g.size();
    HodgeField h;
    h.star2.resize(n);
    h.star3.resize(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const Eigen::Matrix4d gd = g[p].dense();
            Eigen::LLT<Eigen::Matrix4d> llt(gd);
            if (llt.info() != Eigen::Success)
                throw NotPositive("metric not positive definite at lattice point " + std::to_string(p), p);
            const Eigen::Matrix4d ginv = gd.inverse();
            h.star2[p] = hodge2_matrix(g[p], VolumeCoeff{mu[p]});
            h.star3[p] = ext::hodge_matrix<4, 3>(ginv, mu[p]);
        }
    });
    return h;
}

FormField codiff2(const FormField& beta, std::span<const Metric4> g, std::span<const double> mu, int order) {
    return codiff2(beta, HodgeField::build(g, mu), order);
}

FormField codiff2(const FormField& beta, const HodgeField& stars, int order) {
    if (beta.degree() != 2) throw ValidationError("codiff2: expected a 2-form field");
    const std::size_t n = beta.points();
    if (stars.star2.size() != n) throw ValidationError("codiff2: metric field size does not match lattice");

    FormField starred(beta.lattice(), 2);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            Eigen::Matrix<double, 6, 1> v;
            for (int c = 0; c < 6; ++c) v(c) = beta.at(c, p);
            const Eigen::Matrix<double, 6, 1> s = stars.star2[p] * v;
            for (int c = 0; c < 6; ++c) starred.at(c, p) = s(c);
        }
    });
    const FormField dstar = d(starred, order);
    FormField out(beta.lattice(), 1);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            Eigen::Vector4d v;
            for (int c = 0; c < 4; ++c) v(c) = dstar.at(c, p);
            const Eigen::Vector4d s = stars.star3[p] * v;
            for (int c = 0; c < 4; ++c) out.at(c, p) = -s(c);
        }
    });
    return out;
}

}  // namespace hsflow
