#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phaseless/lattices.hpp"
#include "phaseless/retrieval.hpp"
#include "phaseless/stft.hpp"
#include "phaseless/types.hpp"
#include "phaseless/version.hpp"
#include "phaseless/windows.hpp"

namespace py = pybind11;
using namespace phaseless;

namespace {

lattices::PointSet points_from_pairs(const std::vector<std::pair<double, double>>& xy) {
    lattices::PointSet ps;
    ps.dim = 2;
    for (const auto& [x, w] : xy) ps.points.push_back({{x, w}, {}});
    return ps;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Phaseless STFT sampling on square-root lattices";
    m.attr("__version__") = VERSION;

    py::register_exception<precondition_error>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<numeric_error>(m, "NumericError", PyExc_RuntimeError);

    py::class_<Signal>(m, "Signal")
        .def(py::init([](double t0, double dt, std::vector<cplx> values) {
                 Signal f{t0, dt, std::move(values)};
                 validate(f);
                 return f;
             }),
             py::arg("t0"), py::arg("dt"), py::arg("values"))
        .def_readonly("t0", &Signal::t0)
        .def_readonly("dt", &Signal::dt)
        .def_readonly("values", &Signal::values)
        .def("__len__", [](const Signal& f) { return f.size(); });

    py::class_<windows::WindowSpec>(m, "Window")
        .def_static("gaussian", &windows::WindowSpec::gaussian, py::arg("gamma") = PI)
        .def_static("hermite", &windows::WindowSpec::hermite, py::arg("n"));

    m.def(
        "hermite_signal",
        [](const std::vector<cplx>& coeffs, double halfwidth, std::size_t n) {
            return stft::hermite_synthesize(coeffs, centered_grid(halfwidth, n));
        },
        py::arg("coeffs"), py::arg("halfwidth") = 8.0, py::arg("n") = 1024,
        "Signal with the given Hermite coefficients on a centered grid");

    m.def("stft_point", &stft::stft_point, py::arg("f"), py::arg("window"), py::arg("x"),
          py::arg("omega"), "V_w f(x, omega) by grid quadrature");

    m.def(
        "rect_lattice",
        [](double alpha, double radius) {
            auto ps = lattices::generate(lattices::diagonal_lattice({alpha, alpha}, radius));
            std::vector<std::pair<double, double>> out;
            out.reserve(ps.points.size());
            for (const auto& p : ps.points) out.emplace_back(p.coords[0], p.coords[1]);
            return out;
        },
        py::arg("alpha"), py::arg("radius"),
        "Points of alpha (sqrt Z)^2 with Euclidean norm <= radius");

    m.def(
        "sample_phaseless",
        [](const Signal& f, const windows::WindowSpec& w,
           const std::vector<std::pair<double, double>>& pts) {
            return stft::sample_phaseless(f, w, points_from_pairs(pts)).magnitudes;
        },
        py::arg("f"), py::arg("window"), py::arg("points"),
        "|V_w f| at the given (x, omega) points");

    m.def("reconstruct", &retrieval::reconstruct, py::arg("f"), py::arg("window"),
          py::arg("eps_rel") = 1e-8, "Spectrogram round trip up to global phase");

    m.def(
        "phase_align",
        [](const Signal& f, const Signal& g) {
            auto a = retrieval::phase_align(f, g);
            return py::make_tuple(a.tau, a.err);
        },
        py::arg("f"), py::arg("g"), "(tau, relative error) minimizing ||f - tau g||");

    m.def("frft", &stft::frft, py::arg("f"), py::arg("theta"), py::arg("n_basis") = 48,
          "Fractional Fourier transform by Hermite expansion");

    m.def(
        "fit_from_samples",
        [](const std::vector<std::pair<double, double>>& pts, const std::vector<double>& mags,
           const windows::WindowSpec& w, int n_basis, int restarts, int max_iters, double tol,
           std::uint64_t seed) {
            stft::TFSampleSet samples{points_from_pairs(pts), mags};
            retrieval::FitConfig cfg;
            cfg.n_basis = n_basis;
            cfg.restarts = restarts;
            cfg.max_iters = max_iters;
            cfg.tol = tol;
            cfg.seed = seed;
            auto rep = retrieval::fit_from_samples(samples, w, cfg);
            py::dict out;
            out["status"] = rep.status;
            out["loss"] = rep.loss;
            out["n_iters"] = rep.n_iters;
            out["coeffs"] = rep.coeffs;
            return out;
        },
        py::arg("points"), py::arg("magnitudes"), py::arg("window"), py::arg("n_basis") = 4,
        py::arg("restarts") = 8, py::arg("max_iters") = 400, py::arg("tol") = 1e-9,
        py::arg("seed") = 0, "Recover Hermite coefficients from phaseless samples");

    m.def(
        "gaussian_alpha_max",
        [] { return lattices::gaussian_thresholds(PI).tau_max[0]; },
        "Critical lattice spacing sqrt(1/(2 pi e)) for the Gaussian window");

    m.def("shear_admissible_root", &lattices::shear_admissible_root,
          "Positive root of sigma^3 + sigma = 1");
}
