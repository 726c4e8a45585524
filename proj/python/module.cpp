// pybind11 bindings for the supermix core: measures, kernels, fidelity,
// solvers, certificates, and metrics.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "supermix/certificate.hpp"
#include "supermix/fidelity.hpp"
#include "supermix/kernels.hpp"
#include "supermix/measures.hpp"
#include "supermix/metrics.hpp"
#include "supermix/solver_cpgd.hpp"
#include "supermix/solver_sfw.hpp"

namespace py = pybind11;
using namespace supermix;

namespace {

DiscreteMeasure measure_from_arrays(const std::vector<double>& weights,
                                    const std::vector<VectorXd>& locations) {
    if (weights.size() != locations.size())
        throw std::invalid_argument("weights and locations differ in length");
    if (locations.empty()) throw std::invalid_argument("measure needs at least one atom");
    const int d = static_cast<int>(locations.front().size());
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < weights.size(); ++i)
        atoms.push_back({weights[i], locations[i]});
    return DiscreteMeasure(d, std::move(atoms));
}

}  // namespace

PYBIND11_MODULE(_supermix, mod) {
    mod.doc() = "grid-less mixture deconvolution via BLASSO";

    py::class_<DiscreteMeasure>(mod, "DiscreteMeasure")
        .def(py::init(&measure_from_arrays), py::arg("weights"), py::arg("locations"))
        .def_property_readonly("dim", &DiscreteMeasure::dim)
        .def("__len__", &DiscreteMeasure::size)
        .def_property_readonly("weights",
                               [](const DiscreteMeasure& mu) {
                                   std::vector<double> w;
                                   for (const auto& a : mu.atoms()) w.push_back(a.weight);
                                   return w;
                               })
        .def_property_readonly("locations",
                               [](const DiscreteMeasure& mu) {
                                   std::vector<VectorXd> t;
                                   for (const auto& a : mu.atoms()) t.push_back(a.location);
                                   return t;
                               })
        .def("total_mass", &DiscreteMeasure::total_mass);

    mod.def("total_variation", &total_variation);
    mod.def("min_separation", &min_separation);
    mod.def("merge_close", &merge_close, py::arg("measure"), py::arg("radius"));

    py::class_<MixingKernelSpec>(mod, "MixingKernel")
        .def(py::init([](const std::string& family, int dim, double alpha, double beta, int j) {
                 MixingKernelSpec spec;
                 spec.family = family_from_name(family);
                 spec.dim = dim;
                 spec.alpha = alpha;
                 spec.beta = beta;
                 spec.norm_index = j;
                 return spec;
             }),
             py::arg("family"), py::arg("dim"), py::arg("alpha") = 1.0, py::arg("beta") = 1.0,
             py::arg("j") = 2)
        .def_readonly("dim", &MixingKernelSpec::dim)
        .def_property_readonly("family",
                               [](const MixingKernelSpec& s) { return family_name(s.family); });

    mod.def("mixing_density", &mixing_density);
    mod.def("spectral_density", &spectral_density);

    py::class_<Sample>(mod, "Sample")
        .def_readonly("dim", &Sample::dim)
        .def_readonly("points", &Sample::points)
        .def_readonly("seed", &Sample::seed)
        .def("__len__", [](const Sample& s) { return s.points.size(); });

    mod.def("sample_mixture", &sample_mixture, py::arg("truth"), py::arg("kernel"), py::arg("n"),
            py::arg("seed"));

    py::class_<FidelitySpec>(mod, "Fidelity")
        .def(py::init([](double tau, int dim, int quad) {
                 FidelitySpec spec;
                 spec.tau = tau;
                 spec.dim = dim;
                 spec.quad_points_per_dim = quad;
                 return spec;
             }),
             py::arg("tau"), py::arg("dim"), py::arg("quad_points_per_dim") = 512)
        .def_readonly("tau", &FidelitySpec::tau)
        .def_readonly("dim", &FidelitySpec::dim);

    py::class_<CorrelationEvaluator, std::shared_ptr<CorrelationEvaluator>>(mod, "Correlations")
        .def(py::init<MixingKernelSpec, FidelitySpec, bool>(), py::arg("mixing"),
             py::arg("fidelity"), py::arg("sigma_one") = false)
        .def("xi", &CorrelationEvaluator::xi)
        .def("zeta", &CorrelationEvaluator::zeta)
        .def("xi_gradient", &CorrelationEvaluator::xi_gradient)
        .def("zeta_gradient", &CorrelationEvaluator::zeta_gradient);

    py::class_<DataFit>(mod, "DataFit")
        .def_static("empirical",
                    [](std::shared_ptr<CorrelationEvaluator> corr, const Sample& sample) {
                        return DataFit::empirical(corr, sample);
                    })
        .def_static("exact_moments",
                    [](std::shared_ptr<CorrelationEvaluator> corr, const DiscreteMeasure& mu) {
                        return DataFit::exact_moments(corr, mu);
                    })
        .def("const_term", &DataFit::const_term)
        .def("eta",
             [](const DataFit& data, const DiscreteMeasure& mu, double kappa, const VectorXd& t) {
                 return eta(data, mu, kappa, t);
             })
        .def("eta_gradient", [](const DataFit& data, const DiscreteMeasure& mu, double kappa,
                                const VectorXd& t) { return eta_gradient(data, mu, kappa, t); });

    py::class_<SfwConfig>(mod, "SfwConfig")
        .def(py::init<>())
        .def_readwrite("kappa", &SfwConfig::kappa)
        .def_readwrite("max_iters", &SfwConfig::max_iters)
        .def_readwrite("dual_tol", &SfwConfig::dual_tol)
        .def_readwrite("grid_points_per_dim", &SfwConfig::grid_points_per_dim)
        .def_readwrite("nonnegative", &SfwConfig::nonnegative);

    py::class_<SolveResult>(mod, "SolveResult")
        .def_readonly("estimate", &SolveResult::estimate)
        .def_readonly("iterations", &SolveResult::iterations)
        .def_readonly("converged", &SolveResult::converged)
        .def_readonly("dual_sup", &SolveResult::dual_sup)
        .def_readonly("objective_trace", &SolveResult::objective_trace);

    mod.def("solve_sfw", &solve_sfw, py::arg("data"), py::arg("config"));

    py::class_<CpgdConfig>(mod, "CpgdConfig")
        .def(py::init<>())
        .def_readwrite("kappa", &CpgdConfig::kappa)
        .def_readwrite("alpha", &CpgdConfig::alpha)
        .def_readwrite("beta", &CpgdConfig::beta)
        .def_readwrite("num_particles", &CpgdConfig::num_particles)
        .def_readwrite("num_steps", &CpgdConfig::num_steps)
        .def_readwrite("init_seed", &CpgdConfig::init_seed);

    py::class_<CpgdResult>(mod, "CpgdResult")
        .def_readonly("estimate", &CpgdResult::estimate);

    mod.def("solve_cpgd", &solve_cpgd, py::arg("data"), py::arg("config"));

    py::enum_<CertificateKind>(mod, "CertificateKind")
        .value("P", CertificateKind::P)
        .value("Q", CertificateKind::Q);

    py::class_<Certificate>(mod, "Certificate")
        .def_readonly("m", &Certificate::m)
        .def("p", &Certificate::p_value)
        .def("p_gradient", &Certificate::p_gradient)
        .def("__call__", &Certificate::value);

    mod.def("build_certificate", &build_certificate, py::arg("support"), py::arg("m"),
            py::arg("kind") = CertificateKind::P, py::arg("selector") = -1);
    mod.def("admissible_bandwidth", &admissible_bandwidth, py::arg("K"), py::arg("d"),
            py::arg("delta"), py::arg("c") = 1.0);

    py::class_<AuditReport>(mod, "AuditReport")
        .def_readonly("max_interp_residual", &AuditReport::max_interp_residual)
        .def_readonly("max_grad_residual", &AuditReport::max_grad_residual)
        .def_readonly("grid_max", &AuditReport::grid_max)
        .def_readonly("near_constant", &AuditReport::near_constant)
        .def_readonly("far_gap", &AuditReport::far_gap)
        .def_readonly("bandwidth_warning", &AuditReport::bandwidth_warning);

    mod.def(
        "audit_certificate",
        [](const Certificate& cert, const VectorXd& lo, const VectorXd& hi, int points_per_dim,
           double epsilon) {
            AuditGrid grid{lo, hi, points_per_dim};
            return audit_certificate(cert, grid, epsilon);
        },
        py::arg("certificate"), py::arg("lo"), py::arg("hi"), py::arg("points_per_dim") = 2001,
        py::arg("epsilon") = 0.0);

    mod.def("bregman_divergence", &bregman_divergence);

    py::class_<SupportError>(mod, "SupportError")
        .def_readonly("hausdorff", &SupportError::hausdorff)
        .def_readonly("matched_weight_l1", &SupportError::matched_weight_l1)
        .def_readonly("k_hat", &SupportError::k_hat);

    mod.def("support_error", &support_error, py::arg("estimate"), py::arg("truth"));

    py::class_<RateQuantities>(mod, "RateQuantities")
        .def_readonly("rho_n", &RateQuantities::rho_n)
        .def_readonly("c_m", &RateQuantities::c_m)
        .def_readonly("product_bound", &RateQuantities::product_bound);

    mod.def("rate_quantities", &rate_quantities, py::arg("K"), py::arg("d"), py::arg("m"),
            py::arg("n"), py::arg("mixing"));
    mod.def("kappa_auto", &kappa_auto, py::arg("K"), py::arg("d"), py::arg("m"), py::arg("n"),
            py::arg("mixing"), py::arg("factor") = 1.0);
}
