#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hpr/harness.hpp"

namespace py = pybind11;
using namespace hpr;

namespace {

// quaternion vectors are (n, 4) float64 arrays, octonion vectors (n, 8)

template <class S>
Vec<S> vec_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    constexpr int dim = algebra_traits<S>::dim;
    if (arr.ndim() != 2 || arr.shape(1) != dim)
        throw std::invalid_argument("expected an (n, " + std::to_string(dim) + ") array");
    Vec<S> out(static_cast<std::size_t>(arr.shape(0)));
    const double* p = arr.data();
    for (std::size_t j = 0; j < out.size(); ++j)
        for (int i = 0; i < dim; ++i) out[j].set_coeff(i, p[j * dim + i]);
    return out;
}

template <class S>
py::array_t<double> vec_to_array(const Vec<S>& v) {
    constexpr int dim = algebra_traits<S>::dim;
    py::array_t<double> arr({static_cast<py::ssize_t>(v.size()), static_cast<py::ssize_t>(dim)});
    double* p = arr.mutable_data();
    for (std::size_t j = 0; j < v.size(); ++j)
        for (int i = 0; i < dim; ++i) p[j * dim + i] = v[j].coeff(i);
    return arr;
}

template <class S>
Matrix<S> image_from_array(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    constexpr int dim = algebra_traits<S>::dim;
    if (arr.ndim() != 3 || arr.shape(2) != dim)
        throw std::invalid_argument("expected an (n, n, " + std::to_string(dim) + ") array");
    Matrix<S> out(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
    const double* p = arr.data();
    for (std::size_t k = 0; k < out.data.size(); ++k)
        for (int i = 0; i < dim; ++i) out.data[k].set_coeff(i, p[k * dim + i]);
    return out;
}

template <class S>
py::array_t<double> image_to_array(const Matrix<S>& m) {
    constexpr int dim = algebra_traits<S>::dim;
    py::array_t<double> arr({static_cast<py::ssize_t>(m.rows), static_cast<py::ssize_t>(m.cols),
                             static_cast<py::ssize_t>(dim)});
    double* p = arr.mutable_data();
    for (std::size_t k = 0; k < m.data.size(); ++k)
        for (int i = 0; i < dim; ++i) p[k * dim + i] = m.data[k].coeff(i);
    return arr;
}

SolverConfig config_from_kwargs(double step_size, std::size_t max_iters, std::size_t power_iters,
                                std::size_t max_restarts, std::uint64_t seed) {
    SolverConfig cfg;
    cfg.step_size = step_size;
    cfg.max_iters = max_iters;
    cfg.power_iters = power_iters;
    cfg.max_restarts = max_restarts;
    cfg.seed = seed;
    return cfg;
}

template <class S>
py::dict run_solver(const SensingModel<S>& model, const std::vector<double>& y,
                    const SolverConfig& cfg, const std::string& which) {
    const auto init = spectral_init(model, y, cfg);
    RecoveryResult<S> rec;
    if constexpr (std::is_same_v<S, Quaternion>) {
        rec = which == "qtwf" ? qtwf(model, y, cfg, init.x0) : qwf(model, y, cfg, init.x0);
    } else {
        rec = owf(model, y, cfg, init.x0);
    }
    py::dict out;
    out["estimate"] = vec_to_array(rec.estimate);
    out["iterations"] = rec.iterations_used;
    out["final_cost"] = rec.cost_trace.empty() ? 0.0 : rec.cost_trace.back();
    out["degenerate_init"] = init.degenerate;
    return out;
}

template <class S>
void bind_model(py::module_& m, const char* name) {
    py::class_<SensingModel<S>>(m, name)
        .def_property_readonly("m", &SensingModel<S>::measurement_count)
        .def_property_readonly("n", &SensingModel<S>::signal_length)
        .def("apply",
             [](const SensingModel<S>& model, const py::array_t<double>& x) {
                 return vec_to_array(model.apply(vec_from_array<S>(x)));
             })
        .def("adjoint",
             [](const SensingModel<S>& model, const py::array_t<double>& w) {
                 return vec_to_array(model.adjoint(vec_from_array<S>(w)));
             })
        .def("measure", [](const SensingModel<S>& model, const py::array_t<double>& x) {
            return model.measure(vec_from_array<S>(x));
        });
}

}  // namespace

PYBIND11_MODULE(_hpr, m) {
    m.doc() = "hypercomplex phase retrieval toolkit";

    m.def("qmul", [](const py::array_t<double>& a, const py::array_t<double>& b) {
        const auto x = vec_from_array<Quaternion>(a);
        const auto y = vec_from_array<Quaternion>(b);
        if (x.size() != y.size()) throw std::invalid_argument("length mismatch");
        Vec<Quaternion> out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
        return vec_to_array(out);
    });
    m.def("omul", [](const py::array_t<double>& a, const py::array_t<double>& b) {
        const auto x = vec_from_array<Octonion>(a);
        const auto y = vec_from_array<Octonion>(b);
        if (x.size() != y.size()) throw std::invalid_argument("length mismatch");
        Vec<Octonion> out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = omul(x[i], y[i]);
        return vec_to_array(out);
    });

    m.def("qdft2_forward", [](const py::array_t<double>& f) {
        const auto img = image_from_array<Quaternion>(f);
        return image_to_array(Qdft2D(img.rows).forward(img));
    });
    m.def("qdft2_inverse", [](const py::array_t<double>& f) {
        const auto img = image_from_array<Quaternion>(f);
        return image_to_array(Qdft2D(img.rows).inverse(img));
    });
    m.def("qstft", [](const py::array_t<double>& f, const py::array_t<double>& window,
                      std::size_t hop) {
        const auto sig = vec_from_array<Quaternion>(f);
        const auto plan = make_qstft_plan(vec_from_array<Quaternion>(window), hop, sig.size());
        return image_to_array(qstft(sig, plan));
    });
    m.def("odft3_forward", [](const py::array_t<double, py::array::c_style |
                                                           py::array::forcecast>& f) {
        if (f.ndim() != 4 || f.shape(3) != 8 || f.shape(0) != f.shape(1) ||
            f.shape(1) != f.shape(2))
            throw std::invalid_argument("expected an (n, n, n, 8) array");
        const auto n = static_cast<std::size_t>(f.shape(0));
        std::vector<Octonion> vol(n * n * n);
        const double* p = f.data();
        for (std::size_t k = 0; k < vol.size(); ++k)
            for (int i = 0; i < 8; ++i) vol[k].set_coeff(i, p[k * 8 + i]);
        const auto spec = Odft3D(n).forward(vol);
        py::array_t<double> out({static_cast<py::ssize_t>(n), static_cast<py::ssize_t>(n),
                                 static_cast<py::ssize_t>(n), static_cast<py::ssize_t>(8)});
        double* q = out.mutable_data();
        for (std::size_t k = 0; k < spec.size(); ++k)
            for (int i = 0; i < 8; ++i) q[k * 8 + i] = spec[k].coeff(i);
        return out;
    });

    bind_model<Quaternion>(m, "QuaternionModel");
    bind_model<Octonion>(m, "OctonionModel");

    m.def(
        "gaussian_model",
        [](const std::string& kind, std::size_t mm, std::size_t n, std::uint64_t seed) -> py::object {
            const auto parsed = parse_model(kind);
            if (!parsed) throw std::invalid_argument("unknown model kind " + kind);
            if (*parsed == ModelKind::GaussianOctonion)
                return py::cast(SensingModel<Octonion>::gaussian(*parsed, mm, n, seed));
            return py::cast(SensingModel<Quaternion>::gaussian(*parsed, mm, n, seed));
        },
        py::arg("kind"), py::arg("m"), py::arg("n"), py::arg("seed") = 1);
    m.def(
        "coded_fourier_model",
        [](std::size_t side, std::size_t snapshots, std::size_t alphabet, std::uint64_t seed) {
            return SensingModel<Quaternion>::coded_fourier(side, snapshots,
                                                           DoeAlphabet::standard(alphabet), seed);
        },
        py::arg("side"), py::arg("snapshots"), py::arg("alphabet") = 4, py::arg("seed") = 1);

    m.def(
        "recover",
        [](const SensingModel<Quaternion>& model, const std::vector<double>& y,
           const std::string& solver, double step_size, std::size_t max_iters,
           std::size_t power_iters, std::size_t max_restarts, std::uint64_t seed) {
            return run_solver(model, y,
                              config_from_kwargs(step_size, max_iters, power_iters, max_restarts,
                                                 seed),
                              solver);
        },
        py::arg("model"), py::arg("y"), py::arg("solver") = "qwf", py::arg("step_size") = 0.0,
        py::arg("max_iters") = 20000, py::arg("power_iters") = 100, py::arg("max_restarts") = 4,
        py::arg("seed") = 1);
    m.def(
        "recover_octonion",
        [](const SensingModel<Octonion>& model, const std::vector<double>& y, double step_size,
           std::size_t max_iters, std::size_t power_iters, std::size_t max_restarts,
           std::uint64_t seed) {
            return run_solver(model, y,
                              config_from_kwargs(step_size, max_iters, power_iters, max_restarts,
                                                 seed),
                              "owf");
        },
        py::arg("model"), py::arg("y"), py::arg("step_size") = 0.0, py::arg("max_iters") = 20000,
        py::arg("power_iters") = 100, py::arg("max_restarts") = 4, py::arg("seed") = 1);

    m.def("quat_distance", [](const py::array_t<double>& xt, const py::array_t<double>& x) {
        return quat_distance(vec_from_array<Quaternion>(xt), vec_from_array<Quaternion>(x));
    });
    m.def("oct_distance", [](const py::array_t<double>& xt, const py::array_t<double>& x) {
        return oct_distance(vec_from_array<Octonion>(xt), vec_from_array<Octonion>(x));
    });
    m.def("add_noise", &add_noise, py::arg("y"), py::arg("snr_db"), py::arg("seed") = 1);
}
