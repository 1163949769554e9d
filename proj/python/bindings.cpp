// Python bindings. Arrays are float64 numpy arrays:
//   triple         (3, 6)                  rows w_i, columns (01,02,03,23,31,12)
//   triple field   (3, 6, n0, n1, n2, n3)  same component order, x^3 fastest
// JSON-shaped results cross as strings and are decoded in hsflow/__init__.py.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <sstream>

#include "hsflow/commands.hpp"
#include "hsflow/config.hpp"
#include "hsflow/errors.hpp"
#include "hsflow/fiber_g2.hpp"
#include "hsflow/flow_engine.hpp"
#include "hsflow/initial_data.hpp"
#include "hsflow/parallel.hpp"
#include "hsflow/snapshot.hpp"
#include "hsflow/triple_algebra.hpp"
#include "hsflow/verify.hpp"

namespace py = pybind11;
using namespace hsflow;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Triple to_triple(const Array& a) {
    if (a.ndim() != 2 || a.shape(0) != 3 || a.shape(1) != 6) throw ValidationError("triple must have shape (3, 6)");
    auto r = a.unchecked<2>();
    Triple t;
    for (int i = 0; i < 3; ++i) t[i] = Two4Form{r(i, 0), r(i, 1), r(i, 2), r(i, 3), r(i, 4), r(i, 5)};
    return t;
}

Array from_triple(const Triple& t) {
    Array a({3, 6});
    auto w = a.mutable_unchecked<2>();
    for (int i = 0; i < 3; ++i) {
        const auto c = t[i].coeffs();
        for (int k = 0; k < 6; ++k) w(i, k) = c[k];
    }
    return a;
}

template <int N>
Array from_sym(const SymMat<N>& s) {
    Array a({N, N});
    auto w = a.mutable_unchecked<2>();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) w(i, j) = s(i, j);
    return a;
}

template <int N>
SymMat<N> to_sym(const Array& a) {
    if (a.ndim() != 2 || a.shape(0) != N || a.shape(1) != N) throw ValidationError("matrix has the wrong shape");
    Eigen::Matrix<double, N, N> m;
    auto r = a.unchecked<2>();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) m(i, j) = r(i, j);
    return SymMat<N>::from_dense(m);
}

template <int N, int K>
Array from_form(const ext::Form<N, K>& f) {
    Array a(static_cast<py::ssize_t>(f.size));
    std::memcpy(a.mutable_data(), f.c.data(), sizeof(double) * f.size);
    return a;
}

Array from_field(const TripleField& tf) {
    const auto& n = tf.lattice().n();
    Array a({py::ssize_t{3}, py::ssize_t{6}, py::ssize_t{n[0]}, py::ssize_t{n[1]}, py::ssize_t{n[2]}, py::ssize_t{n[3]}});
    double* out = a.mutable_data();
    for (int i = 0; i < 3; ++i) {
        std::memcpy(out, tf[i].raw().data(), sizeof(double) * tf[i].raw().size());
        out += tf[i].raw().size();
    }
    return a;
}

TripleField to_field(const Array& a, const std::array<double, 4>& lengths) {
    if (a.ndim() != 6 || a.shape(0) != 3 || a.shape(1) != 6)
        throw ValidationError("triple field must have shape (3, 6, n0, n1, n2, n3)");
    const Lattice lat({static_cast<int>(a.shape(2)), static_cast<int>(a.shape(3)), static_cast<int>(a.shape(4)),
                       static_cast<int>(a.shape(5))},
                      lengths);
    TripleField tf(lat);
    const double* in = a.data();
    for (int i = 0; i < 3; ++i) {
        std::memcpy(tf[i].raw().data(), in, sizeof(double) * tf[i].raw().size());
        in += tf[i].raw().size();
    }
    return tf;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hypersymplectic flow laboratory: C++ core";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<SingularMatrix>(m, "SingularMatrix", base.ptr());
    py::register_exception<NotPositive>(m, "NotPositive", base.ptr());
    py::register_exception<DetNotOne>(m, "DetNotOne", base.ptr());
    py::register_exception<StepRejected>(m, "StepRejected", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    // pointwise algebra
    m.def("standard_triple", [] { return from_triple(standard_triple()); });
    m.def("wedge22", [](const Array& a, const Array& b) {
        if (a.size() != 6 || b.size() != 6) throw ValidationError("2-forms have 6 coefficients");
        const double* x = a.data();
        const double* y = b.data();
        return wedge22(Two4Form{x[0], x[1], x[2], x[3], x[4], x[5]}, Two4Form{y[0], y[1], y[2], y[3], y[4], y[5]});
    });
    m.def("gram", [](const Array& t, double mu) { return from_sym(gram(to_triple(t), VolumeCoeff{mu})); },
          py::arg("triple"), py::arg("mu") = 1.0);
    m.def(
        "metric_from_triple",
        [](const Array& t) {
            const TripleMetric tm = metric_from_triple(to_triple(t));
            return py::make_tuple(from_sym(tm.g), tm.mu.m());
        },
        "(g, mu_w) induced by a positive triple");
    m.def(
        "normalize",
        [](const Array& t) {
            const Normalized n = normalize(to_triple(t));
            return py::make_tuple(from_sym(n.q), n.mu.m());
        },
        "(Q, mu_w) with det Q = 1");
    m.def("dual_triple", [](const Array& t, const Array& q) { return from_triple(dual_triple(to_triple(t), to_sym<3>(q))); });
    m.def("hodge2", [](const Array& b, const Array& g, double mu) {
        if (b.size() != 6) throw ValidationError("2-forms have 6 coefficients");
        const double* x = b.data();
        const Two4Form out = hodge2(Two4Form{x[0], x[1], x[2], x[3], x[4], x[5]}, to_sym<4>(g), VolumeCoeff{mu});
        Array a(6);
        const auto c = out.coeffs();
        std::memcpy(a.mutable_data(), c.data(), sizeof c);
        return a;
    });
    m.def(
        "lift",
        [](const Array& t) {
            const FiberLift fl = lift(to_triple(t));
            py::dict d;
            d["q"] = from_sym(fl.q);
            d["mu"] = fl.mu.m();
            d["g4"] = from_sym(fl.g4);
            d["sigma"] = from_triple(fl.sigma);
            d["phi"] = from_form(fl.phi);
            d["psi"] = from_form(fl.psi);
            d["g7"] = from_sym(fl.g7.g);
            d["star7_residual"] = check_star7(fl.phi, fl.psi, fl.g7.g);
            return d;
        },
        "G2 lift of a positive triple; phi and psi in lexicographic 7D bases");

    // lattice fields
    m.def(
        "generate_initial",
        [](std::array<int, 4> n, std::array<double, 4> lengths, const std::string& generator, double amplitude,
           std::uint64_t seed, int modes, int order) {
            return from_field(generate_initial(Lattice(n, lengths), {generator, amplitude, seed, modes}, order));
        },
        py::arg("n"), py::arg("lengths") = std::array<double, 4>{1, 1, 1, 1},
        py::arg("generator") = "hyperkahler-standard", py::arg("amplitude") = 0.0, py::arg("seed") = 1,
        py::arg("modes") = 2, py::arg("order") = 4);
    m.def(
        "rhs",
        [](const Array& field, std::array<double, 4> lengths, int order) {
            return from_field(rhs(to_field(field, lengths), order));
        },
        py::arg("field"), py::arg("lengths") = std::array<double, 4>{1, 1, 1, 1}, py::arg("order") = 4);
    m.def(
        "periods",
        [](const Array& field, std::array<double, 4> lengths) { return triple_periods(to_field(field, lengths)); },
        py::arg("field"), py::arg("lengths") = std::array<double, 4>{1, 1, 1, 1});
    m.def(
        "max_dw",
        [](const Array& field, std::array<double, 4> lengths, int order) {
            const TripleField tf = to_field(field, lengths);
            double mx = 0.0;
            for (int i = 0; i < 3; ++i) mx = std::max(mx, d(tf[i], order).max_abs());
            return mx;
        },
        py::arg("field"), py::arg("lengths") = std::array<double, 4>{1, 1, 1, 1}, py::arg("order") = 4);

    // files and commands
    m.def("read_snapshot", [](const std::filesystem::path& p) {
        const Snapshot s = read_snapshot(p);
        return py::make_tuple(from_field(s.field), s.time, s.field.lattice().lengths());
    });
    m.def("write_snapshot", [](const std::filesystem::path& p, const Array& field, double time,
                               std::array<double, 4> lengths) { write_snapshot(p, to_field(field, lengths), time); },
          py::arg("path"), py::arg("field"), py::arg("time") = 0.0,
          py::arg("lengths") = std::array<double, 4>{1, 1, 1, 1});
    m.def(
        "_verify",
        [](int trials, std::uint64_t seed) {
            py::gil_scoped_release nogil;
            return run_verify(trials, seed).to_json().dump();
        },
        py::arg("trials") = 1000, py::arg("seed") = 1);
    m.def(
        "_flow",
        [](const std::filesystem::path& config, const std::filesystem::path& out) {
            std::ostringstream log;
            py::gil_scoped_release nogil;
            return cmd_flow(load_config(config), out, log);
        },
        py::arg("config"), py::arg("out"));
    m.def(
        "_lift_snapshot",
        [](const std::filesystem::path& p, int samples, std::uint64_t seed) {
            const LiftReport r = lift_snapshot(p, samples, seed);
            py::dict d;
            d["max_star7"] = r.max_star7;
            d["max_torsion"] = r.max_torsion;
            d["max_block"] = r.max_block;
            d["samples"] = r.samples;
            d["pass"] = r.pass();
            return d;
        },
        py::arg("snapshot"), py::arg("samples") = 64, py::arg("seed") = 1);
    m.def("_summarize_run", [](const std::filesystem::path& run) { return summarize_run(run).summary.dump(); });
    m.def("_config_hash", [](const std::filesystem::path& p) { return config_hash(load_config(p)); });

    m.def("set_workers", &set_worker_count);
    m.def("workers", &worker_count);
}
