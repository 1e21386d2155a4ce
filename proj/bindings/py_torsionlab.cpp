// Python bindings for the main operations: metric linear algebra, graded
// complexes and their torsion, filtered complexes and spectral pages, the
// seeded generators, and the acceptance suite.

#include "torsionlab/suite.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace torsionlab;

namespace {

complexes::GradedMetricComplex make_complex(int q_min, const std::vector<Matrix>& grams,
                                            const std::vector<Matrix>& diffs) {
  complexes::GradedMetricComplex c;
  c.q_min = q_min;
  for (const auto& g : grams) c.spaces.emplace_back(g.rows(), g);
  c.diffs = diffs;
  complexes::require_valid(c);
  return c;
}

spectral::FilteredMetricComplex make_filtered(const complexes::GradedMetricComplex& c,
                                              int p_min,
                                              const std::vector<std::vector<Matrix>>& levels) {
  spectral::FilteredMetricComplex f;
  f.complex = c;
  f.p_min = p_min;
  f.level_bases = levels;
  spectral::require_valid(f);
  return f;
}

}  // namespace

PYBIND11_MODULE(_torsionlab, m) {
  m.doc() = "Torsion invariants of finite-dimensional metric cochain complexes";

  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<SchemaError>(m, "SchemaError");
  py::register_exception<ConditioningError>(m, "ConditioningError");

  py::class_<MetricSpace>(m, "MetricSpace")
      .def(py::init([](const Matrix& gram) { return MetricSpace(gram.rows(), gram); }),
           py::arg("gram"))
      .def_readonly("dim", &MetricSpace::dim)
      .def_readonly("gram", &MetricSpace::gram)
      .def("validate", [](const MetricSpace& s) { s.validate(); });

  // Metric linear algebra on explicit matrices.
  m.def(
      "adjoint",
      [](const Matrix& g_src, const Matrix& g_tgt, const Matrix& f) {
        return numeric::adjoint_matrix(MetricSpace(g_src.rows(), g_src),
                                       MetricSpace(g_tgt.rows(), g_tgt), f);
      },
      py::arg("gram_source"), py::arg("gram_target"), py::arg("matrix"));
  m.def(
      "log_det_prime",
      [](const Matrix& gram, const Matrix& endo) {
        const MetricSpace v(gram.rows(), gram);
        return numeric::log_det_prime({v, v, endo});
      },
      py::arg("gram"), py::arg("endomorphism"));
  m.def(
      "vol_restricted",
      [](const Matrix& g_src, const Matrix& g_tgt, const Matrix& f) {
        return numeric::vol_restricted(
            {MetricSpace(g_src.rows(), g_src), MetricSpace(g_tgt.rows(), g_tgt), f});
      },
      py::arg("gram_source"), py::arg("gram_target"), py::arg("matrix"));
  m.def(
      "subquotient_gram",
      [](const Matrix& gram, const Matrix& sub, const Matrix& quot) {
        return numeric::subquotient_metric(MetricSpace(gram.rows(), gram), sub, quot).gram;
      },
      py::arg("gram"), py::arg("sub_basis"), py::arg("quot_by_basis"));

  py::class_<complexes::GradedMetricComplex>(m, "GradedMetricComplex")
      .def(py::init(&make_complex), py::arg("q_min"), py::arg("grams"), py::arg("differentials"))
      .def_readonly("q_min", &complexes::GradedMetricComplex::q_min)
      .def_property_readonly("q_max", &complexes::GradedMetricComplex::q_max)
      .def("dim", &complexes::GradedMetricComplex::dim)
      .def("differential", &complexes::GradedMetricComplex::d, py::arg("q"));

  m.def("validate_complex", [](const complexes::GradedMetricComplex& c) {
    const auto rep = complexes::validate_complex(c);
    return py::make_tuple(rep.pass, rep.worst_residual, rep.worst_check);
  });
  m.def("betti_numbers", [](const complexes::GradedMetricComplex& c) {
    const auto h = complexes::hodge_cohomology(c);
    std::vector<int> out;
    for (int q = c.q_min; q <= c.q_max(); ++q) out.push_back(h.betti(q));
    return out;
  });
  m.def("laplacian",
        [](const complexes::GradedMetricComplex& c, int q) { return complexes::laplacian(c, q).matrix; });
  m.def("torsion_tc",
        [](const complexes::GradedMetricComplex& c) { return complexes::torsion_tc(c); });
  m.def("torsion_log_sum",
        [](const complexes::GradedMetricComplex& c) { return complexes::torsion_log_sum(c); });
  m.def("euler_characteristic",
        [](const complexes::GradedMetricComplex& c) { return complexes::euler_characteristic(c); });
  m.def("det_iso_c_hc",
        [](const complexes::GradedMetricComplex& c) { return detline::det_iso_c_hc(c).log_vol; });

  py::class_<spectral::FilteredMetricComplex>(m, "FilteredMetricComplex")
      .def(py::init(&make_filtered), py::arg("complex"), py::arg("p_min"), py::arg("levels"))
      .def_readonly("complex", &spectral::FilteredMetricComplex::complex)
      .def_readonly("p_min", &spectral::FilteredMetricComplex::p_min)
      .def_property_readonly("p_max", &spectral::FilteredMetricComplex::p_max);

  m.def("log_t_comb", [](const spectral::FilteredMetricComplex& f) {
    const auto res = spectral::log_t_comb(f);
    py::dict out;
    out["rho"] = res.rho;
    out["log_t_comb"] = res.log_t_comb;
    out["ghc_correction"] = res.ghc_comparison.log_vol;
    std::vector<std::vector<std::vector<Index>>> dims;
    for (const auto& page : res.pages) {
      std::vector<std::vector<Index>> grid;
      for (int p = page.p_min; p <= page.p_max; ++p) {
        std::vector<Index> row;
        for (int q = page.q_min; q <= page.q_max; ++q) row.push_back(page.dim(p, q));
        grid.push_back(row);
      }
      dims.push_back(grid);
    }
    out["page_dims"] = dims;
    return out;
  });
  m.def("maumary_check", [](const spectral::FilteredMetricComplex& f) {
    const auto rep = spectral::maumary_check(f);
    py::dict out;
    out["t_c"] = rep.t_c;
    out["t_gc"] = rep.t_gc;
    out["sum_rho"] = rep.sum_rho;
    out["ghc_correction"] = rep.ghc_correction;
    out["residual"] = rep.residual;
    out["pass"] = rep.pass;
    return out;
  });

  // Documents and generators: JSON strings on the python side.
  m.def(
      "generate",
      [](const std::string& kind, std::uint64_t seed, Index size) {
        return io::emit(io::generate_document(kind, seed, size)).dump(2);
      },
      py::arg("kind"), py::arg("seed") = 0, py::arg("size") = 16);
  m.def("ingest_complex", [](const std::string& text) {
    const auto doc = io::ingest_text(text);
    return std::get<complexes::GradedMetricComplex>(doc.payload);
  });
  m.def("ingest_filtered", [](const std::string& text) {
    const auto doc = io::ingest_text(text);
    return std::get<spectral::FilteredMetricComplex>(doc.payload);
  });

  m.def(
      "run_suite",
      [](int seeds) {
        suite::SuiteParams params;
        params.seeds = seeds;
        const auto rep = suite::run_suite(params);
        return py::make_tuple(rep.all_pass(), rep.to_json().dump(2));
      },
      py::arg("seeds") = 10);
}
