#include "torsionlab/suite.hpp"

#include <cmath>
#include <map>

namespace torsionlab::suite {

namespace {

using namespace torsionlab;

Check make_check(const std::string& name, double worst, double tolerance, bool pass,
                 io::json computed = {}) {
  Check c;
  c.name = name;
  c.pass = pass;
  c.residual = worst;
  c.tolerance = tolerance;
  c.computed = std::move(computed);
  return c;
}

generator::FilteredParams filtered_params_for(std::uint64_t seed) {
  generator::FilteredParams p;
  p.levels = 1 + static_cast<int>(seed % 4);
  p.degrees = 4 + static_cast<int>(seed % 2);
  return p;
}

}  // namespace

Check torsion_equivalence(int count, const Tolerance& tol) {
  double worst = 0.0;
  for (int s = 0; s < count; ++s) {
    generator::ComplexParams p;
    p.acyclic = (s % 3 == 0);
    const auto c = generator::gen_complex(s, p);
    const double a = complexes::torsion_tc(c, tol);
    const double b = complexes::torsion_log_sum(c, tol);
    worst = std::max(worst, std::abs(a - b));
  }
  return make_check("torsion_tc_vs_log_sum", worst, 1e-8, worst < 1e-8,
                    io::json{{"instances", count}});
}

Check det_line_iso(int count, const Tolerance& tol) {
  double worst = 0.0;
  for (int s = 0; s < count; ++s) {
    generator::ComplexParams p;
    p.max_total_dim = 8 + s % 9;
    const auto c = generator::gen_complex(0x0de7 + s, p);
    const double a = detline::det_iso_c_hc(c, tol).log_vol;
    const double b = complexes::torsion_tc(c, tol);
    worst = std::max(worst, std::abs(a - b));
  }
  return make_check("det_c_hc_iso_vs_torsion", worst, 1e-7, worst < 1e-7,
                    io::json{{"instances", count}});
}

Check ses_multiplicativity(int count, const Tolerance& tol) {
  double worst = 0.0;
  for (int s = 0; s < count; ++s) {
    generator::FilteredParams p;
    p.degrees = 4;
    p.max_total_dim = 18;
    const auto inst = generator::gen_ses(s, p);
    const auto rep = detline::ses_torsion_check(inst.c0, inst.c1, inst.c2, inst.incl,
                                                inst.proj, tol);
    worst = std::max(worst, std::abs(rep.residual));
  }
  return make_check("ses_torsion_multiplicativity", worst, 1e-6, worst < 1e-6,
                    io::json{{"instances", count}});
}

Check maumary(int count, const Tolerance& tol) {
  double worst = 0.0;
  bool dims_ok = true, invariants_ok = true;
  for (int s = 0; s < count; ++s) {
    const auto f = generator::gen_filtered(s, filtered_params_for(s));
    const auto rep = spectral::maumary_check(f, tol);
    worst = std::max(worst, std::abs(rep.residual));
    const auto res = spectral::log_t_comb(f, tol);
    for (const auto& page : res.pages)
      if (!oracles::page_dims_match_classical(f, page, tol)) dims_ok = false;
    const auto inv = spectral::check_page_invariants(f, res, tol);
    if (!inv.euler_ok || !inv.morse_ok || !inv.stabilization_ok) invariants_ok = false;
  }
  return make_check("maumary_filtered_torsion", worst, 1e-6,
                    worst < 1e-6 && dims_ok && invariants_ok,
                    io::json{{"instances", count},
                             {"classical_dims_match", dims_ok},
                             {"page_invariants", invariants_ok}});
}

Check spectral_invariants(int count, const Tolerance& tol) {
  double worst = 0.0;
  for (int s = 0; s < count; ++s) {
    const auto f = generator::gen_filtered(0x11f7 + s, filtered_params_for(s));
    auto page = spectral::page_e1(f, tol);
    for (int k = 1; k < f.length(); ++k) {
      const auto a = spectral::next_page(page, f, tol);
      const auto b = spectral::next_page_perturbed(page, f, 0xabc0 + s + k, tol);
      for (int p = a.p_min; p <= a.p_max; ++p)
        for (int q = a.q_min; q <= a.q_max; ++q) {
          const Matrix da = a.delta_at(p, q);
          const Matrix db = b.delta_at(p, q);
          if (da.size() > 0) worst = std::max(worst, (da - db).cwiseAbs().maxCoeff());
        }
      page = a;
    }
  }
  return make_check("page_lift_independence", worst, 1e-8, worst < 1e-8,
                    io::json{{"instances", count}});
}

Check geometric_models(int count, const Tolerance& tol) {
  bool ok = true;
  double worst = 0.0;
  for (int s = 0; s < count; ++s) {
    generator::MorseBottParams p;
    p.points_only = (s % 3 == 2);
    const auto m = generator::gen_morse_bott(s, p);
    const auto g = geomcx::assemble(m, tol);
    if (!geomcx::e1_identification(g, tol).pass) ok = false;
    if (!geomcx::euler_identity_check(g, nullptr, tol).pass) ok = false;
    if (!geomcx::morse_inequalities_check(g, tol).pass) ok = false;
    if (p.points_only) {
      const auto res = spectral::log_t_comb(g.total, tol);
      for (const auto& page : res.pages) {
        if (page.k < 2) continue;
        for (int pp = page.p_min; pp <= page.p_max; ++pp)
          for (int q = page.q_min; q <= page.q_max; ++q) {
            const Matrix d = page.delta_at(pp, q);
            if (d.size() > 0) worst = std::max(worst, d.cwiseAbs().maxCoeff());
          }
      }
    }
  }
  return make_check("geometric_complex_structure", worst, 1e-9, ok && worst < 1e-9,
                    io::json{{"instances", count}});
}

Check wang(int count, const Tolerance& tol) {
  double worst = 0.0, worst_edge = 0.0;
  for (int s = 0; s < count; ++s) {
    generator::WangParams p;
    p.n = 1 + s % 3;
    p.compatible_metrics = (s % 2 == 0);
    const auto w = generator::gen_wang(s, p);
    const auto rep = bundles::wes_check(w, tol);
    worst = std::max(worst, std::abs(rep.residual));
    if (p.compatible_metrics)
      worst_edge = std::max({worst_edge, rep.worst_iv, rep.worst_pv});
  }
  return make_check("wang_sequence_torsion", std::max(worst, worst_edge), 1e-6,
                    worst < 1e-6 && worst_edge < 1e-8,
                    io::json{{"instances", count}, {"worst_edge_volume", worst_edge}});
}

Check gysin(int count, const Tolerance& tol) {
  double worst = 0.0, worst_edge = 0.0;
  for (int s = 0; s < count; ++s) {
    generator::GysinParams p;
    p.n = 1 + s % 2;
    p.base_span = 2 + s % 2;
    p.fiber_dim = 1 + s % 2;
    p.compatible_metrics = (s % 2 == 0);
    const auto g = generator::gen_gysin(s, p);
    const auto rep = bundles::ges_check(g, tol);
    worst = std::max(worst, std::abs(rep.residual));
    if (p.compatible_metrics)
      worst_edge = std::max({worst_edge, rep.worst_iv, rep.worst_pv});
  }
  return make_check("gysin_sequence_torsion", std::max(worst, worst_edge), 1e-6,
                    worst < 1e-6 && worst_edge < 1e-8,
                    io::json{{"instances", count}, {"worst_edge_volume", worst_edge}});
}

Check mapping_torus(int count, const Tolerance& tol) {
  double worst = 0.0;
  for (int s = 0; s < count; ++s) {
    const auto inst = generator::gen_mapping_torus(s, 2 + s % 3, 2);
    const auto res = bundles::wang_sequence(inst.data, tol);
    const double oracle = oracles::mapping_torus_log_torsion(inst.monodromies);
    worst = std::max(worst, std::abs(res.log_torsion - oracle));
  }
  return make_check("mapping_torus_closed_form", worst, 1e-8, worst < 1e-8,
                    io::json{{"instances", count}});
}

namespace {

/// Term-cancellation self-test for the bundle ledger: substituting the
/// base-torsion identity into the localization identity and applying the
/// determinant-volume identity reproduces the combined statement term by
/// term.
bool symbolic_cancellation() {
  using Terms = std::map<std::string, double>;
  auto add = [](Terms& t, const std::string& k, double c) {
    t[k] += c;
    if (std::abs(t[k]) < 1e-15) t.erase(k);
  };
  const int n_r = 2, n_z = 2;
  const double eps_z[2] = {1.0, -1.0};

  // Localization applied to the bundle: T_an_M as a term list.
  Terms e112;
  for (int z = 0; z < n_z; ++z) add(e112, "T_an_fiber_" + std::to_string(z), eps_z[z]);
  for (int r = 0; r < n_r; ++r)
    add(e112, "T_comb_base_" + std::to_string(r), sign_of_degree(r));
  add(e112, "sum_rho_high", 1.0);
  add(e112, "T_met_M", 1.0);
  add(e112, "R_total", 1.0);

  // Base torsion identity: T_comb_base_r = T_an_base_r - T_met_base_r - R_base_r.
  Terms sub = e112;
  for (int r = 0; r < n_r; ++r) {
    const std::string key = "T_comb_base_" + std::to_string(r);
    auto it = sub.find(key);
    if (it == sub.end()) return false;
    const double c = it->second;
    sub.erase(it);
    add(sub, "T_an_base_" + std::to_string(r), c);
    add(sub, "T_met_base_" + std::to_string(r), -c);
    add(sub, "R_base_" + std::to_string(r), -c);
  }
  // Determinant-volume identity: T_met_M = Vol_an - Vol_comb + sum_r (-1)^r T_met_base_r.
  {
    auto it = sub.find("T_met_M");
    if (it == sub.end()) return false;
    const double c = it->second;
    sub.erase(it);
    add(sub, "Vol_an", c);
    add(sub, "Vol_comb", -c);
    for (int r = 0; r < n_r; ++r)
      add(sub, "T_met_base_" + std::to_string(r), c * sign_of_degree(r));
  }

  // Combined statement.
  Terms target;
  for (int r = 0; r < n_r; ++r) {
    add(target, "T_an_base_" + std::to_string(r), sign_of_degree(r));
    add(target, "R_base_" + std::to_string(r), -sign_of_degree(r));
  }
  add(target, "R_total", 1.0);
  add(target, "Vol_an", 1.0);
  add(target, "Vol_comb", -1.0);
  add(target, "sum_rho_high", 1.0);
  for (int z = 0; z < n_z; ++z) add(target, "T_an_fiber_" + std::to_string(z), eps_z[z]);

  return sub == target;
}

}  // namespace

Check ledgers(int count, const Tolerance& tol) {
  double worst = 0.0;
  bool ok = symbolic_cancellation();
  for (int s = 0; s < count; ++s) {
    generator::MorseBottParams mp;
    mp.points_only = (s % 4 == 3);
    const auto m = generator::gen_morse_bott(0x1ed6e4 + s, mp);
    const auto g = geomcx::assemble(m, tol);
    const auto im = generator::gen_integration_map(s, g.total.complex, tol);
    const auto rep = geomcx::geometric_torsion_ledger(g, im, tol);
    worst = std::max(worst, rep.residual);

    const auto lst = generator::gen_lst(s);
    const auto lrep =
        bundles::lst_ledger(lst.model, lst.total_integration, lst.base_integrations,
                            lst.inputs, tol);
    worst = std::max(worst, std::abs(lrep.residual));
    worst = std::max(worst, lrep.e100_residual);

    // Page-one torsion must split into the alternating base-complex torsions.
    const auto res = spectral::log_t_comb(
        geomcx::assemble(bundles::to_morse_bott(lst.model), tol).total, tol);
    double split = 0.0;
    for (int r = lst.model.r_min; r <= lst.model.r_max(); ++r)
      split += sign_of_degree(r) *
               complexes::torsion_tc(bundles::base_complex(lst.model, r, tol), tol);
    worst = std::max(worst, std::abs(res.rho.front() - split));
  }
  return make_check("torsion_ledgers", worst, 1e-6, ok && worst < 1e-6,
                    io::json{{"instances", count}, {"symbolic_cancellation", ok}});
}

Check plumbing(int count, const Tolerance& tol) {
  bool ok = true;
  const std::vector<std::string> kinds = {"complex", "filtered", "morse_bott",
                                          "bundle",  "wang",     "gysin"};
  const int per_kind = std::max(1, count / static_cast<int>(kinds.size()));
  for (const auto& kind : kinds) {
    for (int s = 0; s < per_kind; ++s) {
      const auto doc = io::generate_document(kind, s, 16);
      const auto text = io::emit(doc).dump();
      const auto doc2 = io::ingest_text(text, tol);
      if (io::emit(doc2).dump() != text) ok = false;  // bit-exact round trip
      const auto doc3 = io::generate_document(kind, s, 16);
      if (io::emit(doc3).dump() != text) ok = false;  // determinism
    }
  }
  return make_check("document_round_trip_and_determinism", ok ? 0.0 : 1.0, 0.0, ok,
                    io::json{{"kinds", kinds.size()}, {"per_kind", per_kind}});
}

ReportDocument run_suite(const SuiteParams& params) {
  const int n = std::max(1, params.seeds);
  const Tolerance& tol = params.tol;
  ReportDocument doc;
  doc.add(torsion_equivalence(4 * n, tol));
  doc.add(det_line_iso(n, tol));
  doc.add(ses_multiplicativity(n, tol));
  doc.add(maumary(n, tol));
  doc.add(spectral_invariants(std::max(4, n / 5), tol));
  doc.add(geometric_models(n, tol));
  doc.add(wang(n / 2 + 1, tol));
  doc.add(gysin(n / 2 + 1, tol));
  doc.add(mapping_torus(n / 2 + 1, tol));
  doc.add(ledgers(std::max(4, n / 5), tol));
  doc.add(plumbing(12, tol));
  return doc;
}

}  // namespace torsionlab::suite
