#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dca/core/pipeline.hpp"
#include "dca/errors.hpp"
#include "dca/harness/experiment.hpp"
#include "dca/harness/results.hpp"
#include "dca/linalg.hpp"
#include "dca/models.hpp"

namespace py = pybind11;
using namespace dca;

namespace {

core::IntermediateBundle bundle_from(const std::vector<linalg::Matrix>& anchors,
                                     const std::optional<std::vector<linalg::Matrix>>& data) {
  if (!data) return core::IntermediateBundle::from_anchors(anchors);
  if (data->size() != anchors.size()) {
    throw DimensionError("data and anchors must list the same institutions");
  }
  core::IntermediateBundle bundle;
  for (std::size_t i = 0; i < anchors.size(); ++i) bundle.add((*data)[i], anchors[i]);
  return bundle;
}

core::CollaborativeMaps solve(const core::IntermediateBundle& bundle, const std::string& method,
                              std::optional<linalg::Index> collab_dim,
                              std::optional<std::uint64_t> rsvd_seed) {
  const linalg::Index dim = collab_dim.value_or(core::default_collab_dim(bundle));
  const core::SvdVariant variant =
      rsvd_seed ? core::SvdVariant::random(*rsvd_seed) : core::SvdVariant::exact();
  if (method == "gep") return core::solve_collab_gep(bundle, dim);
  if (method == "qr_svd") return core::solve_collab_qr_svd(bundle, dim, variant);
  if (method == "min_perturb") return core::solve_collab_minperturb(bundle, dim, variant);
  throw ConfigError("unknown method '" + method + "' (expected gep, qr_svd or min_perturb)");
}

harness::Format format_from(const std::string& name) {
  if (name == "csv") return harness::Format::csv;
  if (name == "jsonl") return harness::Format::jsonl;
  throw ConfigError("unknown format '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Data collaboration analysis: linear algebra, collaborative maps, experiments";

  auto base = py::register_exception<Error>(m, "DcaError", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<NonFiniteError>(m, "NonFiniteError", base.ptr());
  py::register_exception<AsymmetryError>(m, "AsymmetryError", base.ptr());
  py::register_exception<DefinitenessError>(m, "DefinitenessError", base.ptr());
  py::register_exception<RankError>(m, "RankError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());

  // linear algebra
  m.def("qr_thin", [](const linalg::Matrix& a) {
    auto r = linalg::qr_thin(a);
    return py::make_tuple(r.q, r.r);
  }, py::arg("m"), "Thin QR with nonnegative R diagonal; returns (q, r).");
  m.def("svd_thin", [](const linalg::Matrix& a) {
    auto r = linalg::svd_thin(a);
    return py::make_tuple(r.u, r.sigma, r.v);
  }, py::arg("m"), "Thin SVD; returns (u, sigma, v).");
  m.def("randomized_svd", [](const linalg::Matrix& a, linalg::Index k, linalg::Index oversample,
                             int power_iters, std::uint64_t seed) {
    auto r = linalg::randomized_svd(a, k, oversample, power_iters, seed);
    return py::make_tuple(r.u, r.sigma, r.v);
  }, py::arg("m"), py::arg("k"), py::arg("oversample") = 10, py::arg("power_iters") = 2,
        py::arg("seed") = 0);
  m.def("sym_eig", [](const linalg::Matrix& s) {
    auto r = linalg::sym_eig(s);
    return py::make_tuple(r.values, r.vectors);
  }, py::arg("s"), "Ascending eigenpairs of a symmetric matrix.");
  m.def("gen_eig_sym", [](const linalg::Matrix& a, const linalg::Matrix& b, linalg::Index k,
                          double ridge) {
    auto r = linalg::gen_eig_sym(a, b, k, ridge);
    return py::make_tuple(r.values, r.vectors);
  }, py::arg("a"), py::arg("b"), py::arg("k"), py::arg("ridge") = 0.0,
        "k smallest pairs of A v = lambda B v with v'Bv = 1.");
  m.def("pseudo_inverse", &linalg::pseudo_inverse, py::arg("m"),
        py::arg("rcond") = linalg::kDefaultRcond);

  // collaborative pipeline
  m.def("generate_anchor", [](linalg::Index rows, linalg::Index cols, std::uint64_t seed) {
    return core::generate_anchor(rows, cols, seed).matrix;
  }, py::arg("rows"), py::arg("cols"), py::arg("seed"));

  py::class_<core::AbstractionMap>(m, "AbstractionMap")
      .def_readonly("mean", &core::AbstractionMap::mean)
      .def_readonly("components", &core::AbstractionMap::components)
      .def_readonly("explained_ratio", &core::AbstractionMap::explained_ratio)
      .def("apply", [](const core::AbstractionMap& map, const linalg::Matrix& x) {
        return core::apply_abstraction(map, x);
      });
  m.def("fit_abstraction", [](const linalg::Matrix& x, std::optional<linalg::Index> dim,
                              std::optional<double> threshold) {
    if (dim.has_value() == threshold.has_value()) {
      throw ConfigError("pass exactly one of dim and threshold");
    }
    return dim ? core::fit_abstraction(x, core::FixedDim{*dim})
               : core::fit_abstraction(x, core::ContributionThreshold{*threshold});
  }, py::arg("x"), py::kw_only(), py::arg("dim") = py::none(), py::arg("threshold") = py::none());

  m.def("build_gep_matrices", [](const std::vector<linalg::Matrix>& anchors) {
    auto g = core::build_gep_matrices(core::IntermediateBundle::from_anchors(anchors));
    return py::make_tuple(g.a, g.b);
  }, py::arg("anchors"));

  py::class_<core::CollaborativeMaps>(m, "CollaborativeMaps")
      .def_readonly("maps", &core::CollaborativeMaps::maps)
      .def_readonly("eigenvalues", &core::CollaborativeMaps::eigenvalues)
      .def_readonly("ridge", &core::CollaborativeMaps::ridge)
      .def_property_readonly("method", [](const core::CollaborativeMaps& c) {
        return std::string(core::method_name(c.method));
      });
  m.def("solve_collab", [](const std::vector<linalg::Matrix>& anchors, const std::string& method,
                           std::optional<linalg::Index> collab_dim,
                           std::optional<std::uint64_t> rsvd_seed) {
    return solve(core::IntermediateBundle::from_anchors(anchors), method, collab_dim, rsvd_seed);
  }, py::arg("anchors"), py::arg("method") = "gep", py::arg("collab_dim") = py::none(),
        py::arg("rsvd_seed") = py::none(),
        "Collaborative maps G_i from per-institution anchor representations.");
  m.def("objective_value", [](const std::vector<linalg::Matrix>& anchors,
                              const core::CollaborativeMaps& maps, linalg::Index j) {
    return core::objective_value(core::IntermediateBundle::from_anchors(anchors), maps, j);
  }, py::arg("anchors"), py::arg("maps"), py::arg("j"));
  m.def("weight_vector", &core::weight_vector, py::arg("eigenvalues"));
  m.def("transform_collab", [](const std::vector<linalg::Matrix>& anchors,
                               const std::vector<linalg::Matrix>& data,
                               const core::CollaborativeMaps& maps,
                               std::optional<linalg::Vector> weights) {
    return core::transform_collab(bundle_from(anchors, data), maps, weights).representations;
  }, py::arg("anchors"), py::arg("data"), py::arg("maps"), py::arg("weights") = py::none());

  // models
  m.def("ridge_fit_predict", [](const linalg::Matrix& x, const std::vector<int>& labels,
                                int classes, const linalg::Matrix& test, double penalty) {
    auto model = models::ridge_fit(x, models::one_hot(labels, classes), penalty);
    return models::ridge_predict(model, test);
  }, py::arg("x"), py::arg("labels"), py::arg("num_classes"), py::arg("test"),
        py::arg("penalty") = 1.0);
  m.def("accuracy", &models::accuracy, py::arg("predicted"), py::arg("truth"));

  // experiments
  m.def("run_experiment", [](const std::string& config_text, const std::string& mode,
                             const std::string& format, int threads) {
    const harness::ExperimentConfig config = harness::parse_config(config_text);
    harness::ExperimentResult result;
    {
      py::gil_scoped_release release;
      result = mode == "timing" ? harness::run_timing_experiment(config)
                                : harness::run_accuracy_experiment(config, threads);
    }
    return harness::format_results(result, format_from(format));
  }, py::arg("config_text"), py::arg("mode") = "accuracy", py::arg("format") = "csv",
        py::arg("threads") = 1, "Runs an experiment from config text; returns the result file text.");
}
