// Command-line surface: validate documents, compute torsion invariants,
// run the spectral/geometric pipelines and the acceptance battery.

#include "torsionlab/suite.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using namespace torsionlab;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string input;
  std::string out;
  std::string format = "text";
  std::string kind = "complex";
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  int seeds = 100;
  Index size = 16;
};

void emit_report(const report::ReportDocument& rep, const Options& opt) {
  if (opt.format == "json") {
    const std::string text = rep.to_json().dump(2) + "\n";
    if (!opt.out.empty())
      io::write_file(opt.out, rep.to_json());
    else
      std::cout << text;
  } else {
    const std::string text = rep.to_text();
    if (!opt.out.empty()) {
      std::ofstream f(opt.out);
      f << text;
    } else {
      std::cout << text;
    }
  }
}

report::Check check_from(const std::string& name, double residual, double tol_value) {
  report::Check c;
  c.name = name;
  c.residual = residual;
  c.tolerance = tol_value;
  c.pass = std::abs(residual) <= tol_value;
  return c;
}

int run_validate(const Options& opt, const Tolerance& tol) {
  report::ReportDocument rep;
  try {
    io::ingest_file(opt.input, tol);
    report::Check c;
    c.name = "document_valid";
    c.pass = true;
    rep.add(c);
  } catch (const ValidationError& e) {
    report::Check c;
    c.name = e.what();
    c.pass = false;
    c.residual = 1.0;
    rep.add(c);
  }
  emit_report(rep, opt);
  return rep.all_pass() ? kExitPass : kExitCheckFailure;
}

const complexes::GradedMetricComplex& as_complex(const io::Document& doc) {
  if (const auto* c = std::get_if<complexes::GradedMetricComplex>(&doc.payload)) return *c;
  throw SchemaError("schema: command expects a 'complex' document");
}

int run_cohomology(const Options& opt, const Tolerance& tol) {
  const auto doc = io::ingest_file(opt.input, tol);
  const auto& c = as_complex(doc);
  const auto h = complexes::hodge_cohomology(c, tol);
  report::ReportDocument rep;
  report::Check chk;
  chk.name = "hodge_cohomology";
  chk.pass = true;
  io::json betti = io::json::array();
  for (int q = c.q_min; q <= c.q_max(); ++q)
    betti.push_back(io::json{{"q", q}, {"betti", h.betti(q)}, {"dim", c.dim(q)}});
  chk.computed = io::json{{"betti", betti},
                          {"euler_characteristic", complexes::euler_characteristic(c, tol)}};
  rep.add(chk);
  emit_report(rep, opt);
  return kExitPass;
}

int run_torsion(const Options& opt, const Tolerance& tol) {
  const auto doc = io::ingest_file(opt.input, tol);
  const auto& c = as_complex(doc);
  const double tc = complexes::torsion_tc(c, tol);
  const double ls = complexes::torsion_log_sum(c, tol);
  report::ReportDocument rep;
  auto chk = check_from("torsion_formulas_agree", tc - ls, 1e-8);
  chk.computed = io::json{{"log_torsion", tc}, {"log_torsion_laplacian_sum", ls}};
  rep.add(chk);
  emit_report(rep, opt);
  return rep.all_pass() ? kExitPass : kExitCheckFailure;
}

int run_spectral(const Options& opt, const Tolerance& tol) {
  const auto doc = io::ingest_file(opt.input, tol);
  const auto* f = std::get_if<spectral::FilteredMetricComplex>(&doc.payload);
  if (!f) throw SchemaError("schema: command expects a 'filtered' document");
  const auto res = spectral::log_t_comb(*f, tol);
  const auto mau = spectral::maumary_check(*f, tol);
  const auto inv = spectral::check_page_invariants(*f, res, tol);
  report::ReportDocument rep;
  auto chk = check_from("maumary_identity", mau.residual, 1e-6);
  io::json pages = io::json::array();
  for (const auto& page : res.pages) {
    io::json dims = io::json::array();
    for (int q = page.q_min; q <= page.q_max; ++q)
      dims.push_back(page.dim_total_degree(q));
    pages.push_back(io::json{{"k", page.k}, {"dims_by_total_degree", dims}});
  }
  io::json rho = io::json::array();
  for (double r : res.rho) rho.push_back(r);
  chk.computed = io::json{{"log_t_comb", res.log_t_comb},
                          {"rho", rho},
                          {"pages", pages},
                          {"log_t_c", mau.t_c},
                          {"log_t_gc", mau.t_gc},
                          {"ghc_correction", mau.ghc_correction}};
  rep.add(chk);
  report::Check chk2;
  chk2.name = "page_invariants";
  chk2.pass = inv.euler_ok && inv.morse_ok && inv.stabilization_ok;
  chk2.residual = inv.last_rho;
  chk2.tolerance = 1e-10;
  rep.add(chk2);
  emit_report(rep, opt);
  return rep.all_pass() ? kExitPass : kExitCheckFailure;
}

int run_geomcx(const Options& opt, const Tolerance& tol) {
  const auto doc = io::ingest_file(opt.input, tol);
  const auto* m = std::get_if<geomcx::MorseBottModel>(&doc.payload);
  if (!m) throw SchemaError("schema: command expects a 'morse_bott' document");
  const auto g = geomcx::assemble(*m, tol);
  const auto e1 = geomcx::e1_identification(g, tol);
  const auto euler = geomcx::euler_identity_check(g, nullptr, tol);
  const auto morse = geomcx::morse_inequalities_check(g, tol);
  report::ReportDocument rep;
  report::Check chk;
  chk.name = "geometric_complex_checks";
  chk.pass = e1.pass && euler.pass && morse.pass;
  chk.computed = io::json{{"e1_dimensions_match", e1.pass},
                          {"euler_identity", euler.pass},
                          {"chi", euler.chi_total},
                          {"morse_inequalities", morse.pass}};
  rep.add(chk);
  emit_report(rep, opt);
  return rep.all_pass() ? kExitPass : kExitCheckFailure;
}

int run_wang(const Options& opt, const Tolerance& tol) {
  const auto doc = io::ingest_file(opt.input, tol);
  const auto* w = std::get_if<bundles::WangData>(&doc.payload);
  if (!w) throw SchemaError("schema: command expects a 'wang' document");
  const auto rep_w = bundles::wes_check(*w, tol);
  report::ReportDocument rep;
  auto chk = check_from("wang_torsion_identity", rep_w.residual, 1e-6);
  chk.computed = io::json{{"log_t_w", rep_w.log_t},
                          {"log_t_met", rep_w.log_t_met},
                          {"rho_n", rep_w.rho}};
  rep.add(chk);
  emit_report(rep, opt);
  return rep.all_pass() ? kExitPass : kExitCheckFailure;
}

int run_gysin(const Options& opt, const Tolerance& tol) {
  const auto doc = io::ingest_file(opt.input, tol);
  const auto* g = std::get_if<bundles::GysinData>(&doc.payload);
  if (!g) throw SchemaError("schema: command expects a 'gysin' document");
  const auto rep_g = bundles::ges_check(*g, tol);
  report::ReportDocument rep;
  auto chk = check_from("gysin_torsion_identity", rep_g.residual, 1e-6);
  chk.computed = io::json{{"log_t_g", rep_g.log_t},
                          {"log_t_met", rep_g.log_t_met},
                          {"rho_n_plus_1", rep_g.rho}};
  rep.add(chk);
  emit_report(rep, opt);
  return rep.all_pass() ? kExitPass : kExitCheckFailure;
}

int run_ledger(const Options& opt, const Tolerance& tol) {
  const auto doc = io::ingest_file(opt.input, tol);
  report::ReportDocument rep;
  if (const auto* m = std::get_if<geomcx::MorseBottModel>(&doc.payload)) {
    const auto g = geomcx::assemble(*m, tol);
    const auto im = generator::gen_integration_map(opt.seed, g.total.complex, tol);
    const auto led = geomcx::geometric_torsion_ledger(g, im, tol);
    auto chk = check_from("geometric_torsion_ledger", led.residual, 1e-6);
    chk.computed = io::json{{"log_t_met", led.t_met},
                            {"log_t_c", led.t_c},
                            {"log_t_gc", led.t_gc},
                            {"sum_rho", led.sum_rho},
                            {"ghc_correction", led.ghc_correction},
                            {"integration_map_seed", opt.seed}};
    rep.add(chk);
  } else if (const auto* b = std::get_if<bundles::BundleModel>(&doc.payload)) {
    // Analytic inputs synthesized consistently from the computed terms.
    const auto g = geomcx::assemble(bundles::to_morse_bott(*b), tol);
    const auto total_im = generator::gen_integration_map(opt.seed, g.total.complex, tol);
    std::vector<geomcx::IntegrationMap> base_ims;
    bundles::LstInputs in;
    generator::Rng rng(opt.seed ^ 0x1ed6e4ull);
    double lhs = 0.0;
    in.r_term_total = rng.signed_range(0.0, 1.0);
    lhs += in.r_term_total;
    for (std::size_t i = 0; i < b->points.size(); ++i) {
      in.t_an_fiber.push_back(rng.signed_range(0.0, 1.0));
      lhs += sign_of_degree(b->points[i].index) * in.t_an_fiber.back();
    }
    for (int r = b->r_min; r <= b->r_max(); ++r) {
      const auto bc = bundles::base_complex(*b, r, tol);
      base_ims.push_back(generator::gen_integration_map(rng.next(), bc, tol));
      const auto& im = base_ims.back();
      const double t_met_r = geomcx::metric_torsion_map(im.ambient, bc, im.map, tol);
      const double t_comb_r = complexes::torsion_tc(bc, tol);
      const double r_term = rng.signed_range(0.0, 1.0);
      in.r_term_base.push_back(r_term);
      in.t_an_base.push_back(t_comb_r + t_met_r + r_term);
      lhs += sign_of_degree(r) * t_comb_r;
    }
    const auto res = spectral::log_t_comb(g.total, tol);
    for (std::size_t k = 1; k < res.rho.size(); ++k) lhs += res.rho[k];
    lhs += geomcx::metric_torsion(g, total_im, tol);
    in.lhs = lhs;
    const auto led = bundles::lst_ledger(*b, total_im, base_ims, in, tol);
    auto chk = check_from("bundle_torsion_ledger", led.residual, 1e-6);
    chk.computed = io::json{{"vol_comb", led.vol_comb},
                            {"sum_rho_high", led.sum_rho_high},
                            {"lhs", led.lhs},
                            {"rhs", led.rhs}};
    rep.add(chk);
  } else {
    throw SchemaError("schema: command expects a 'morse_bott' or 'bundle' document");
  }
  emit_report(rep, opt);
  return rep.all_pass() ? kExitPass : kExitCheckFailure;
}

int run_generate(const Options& opt, const Tolerance&) {
  const auto doc = io::generate_document(opt.kind, opt.seed, opt.size);
  const auto j = io::emit(doc);
  if (!opt.out.empty())
    io::write_file(opt.out, j);
  else
    std::cout << j.dump(2) << "\n";
  return kExitPass;
}

int run_suite_cmd(const Options& opt, const Tolerance& tol) {
  suite::SuiteParams params;
  params.seeds = opt.seeds;
  params.tol = tol;
  const auto rep = suite::run_suite(params);
  emit_report(rep, opt);
  return rep.all_pass() ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torsionlab: torsion invariants of finite-dimensional metric cochain complexes"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--tolerance", opt.tolerance, "override the comparison tolerance");
  app.add_option("--format", opt.format, "report format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out", opt.out, "write the report/document to a file");
  app.add_option("--seed", opt.seed, "seed for generators");
  app.add_option("--seeds", opt.seeds, "seed count for the suite");

  auto add_input = [&](CLI::App* cmd) {
    cmd->fallthrough();
    cmd->add_option("input", opt.input, "input document")->required();
  };
  auto* c_validate = app.add_subcommand("validate", "validate a document");
  add_input(c_validate);
  auto* c_cohomology = app.add_subcommand("cohomology", "Betti numbers and Hodge data");
  add_input(c_cohomology);
  auto* c_torsion = app.add_subcommand("torsion", "torsion of a metric complex");
  add_input(c_torsion);
  auto* c_spectral = app.add_subcommand("spectral", "spectral pages and filtered torsion");
  add_input(c_spectral);
  auto* c_geomcx = app.add_subcommand("geomcx", "assemble and check a Morse-Bott model");
  add_input(c_geomcx);
  auto* c_wang = app.add_subcommand("wang", "sphere-base sequence torsion");
  add_input(c_wang);
  auto* c_gysin = app.add_subcommand("gysin", "sphere-fiber sequence torsion");
  add_input(c_gysin);
  auto* c_ledger = app.add_subcommand("ledger", "torsion bookkeeping ledgers");
  add_input(c_ledger);
  auto* c_generate = app.add_subcommand("generate", "emit a seeded random document");
  c_generate->fallthrough();
  c_generate->add_option("--kind", opt.kind,
                         "complex|filtered|morse_bott|bundle|wang|gysin");
  c_generate->add_option("--size", opt.size, "total dimension cap");
  auto* c_suite = app.add_subcommand("suite", "run the acceptance battery");
  c_suite->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  Tolerance tol = torsionlab::default_tolerance();
  if (const char* env = std::getenv("TORSIONLAB_TOLERANCE")) {
    try {
      tol.compare_tol = std::stod(env);
    } catch (...) {
      std::cerr << "usage: TORSIONLAB_TOLERANCE is not a number\n";
      return kExitUsage;
    }
  }
  if (opt.tolerance > 0.0) tol.compare_tol = opt.tolerance;
  try {
    tol.validate();
  } catch (const torsionlab::Error& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  }
  torsionlab::default_tolerance() = tol;

  try {
    if (c_validate->parsed()) return run_validate(opt, tol);
    if (c_cohomology->parsed()) return run_cohomology(opt, tol);
    if (c_torsion->parsed()) return run_torsion(opt, tol);
    if (c_spectral->parsed()) return run_spectral(opt, tol);
    if (c_geomcx->parsed()) return run_geomcx(opt, tol);
    if (c_wang->parsed()) return run_wang(opt, tol);
    if (c_gysin->parsed()) return run_gysin(opt, tol);
    if (c_ledger->parsed()) return run_ledger(opt, tol);
    if (c_generate->parsed()) return run_generate(opt, tol);
    if (c_suite->parsed()) return run_suite_cmd(opt, tol);
  } catch (const torsionlab::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const torsionlab::Error& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitUsage;
}
