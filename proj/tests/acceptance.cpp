// Acceptance battery: every criterion prints one PASS/FAIL line with its
// measured worst residual, pinned tolerance, and runtime.

#include "torsionlab/suite.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

using namespace torsionlab;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void print_line(int idx, const std::string& name, bool pass, double residual, double tol,
            double seconds, double time_limit) {
  const bool in_time = time_limit <= 0.0 || seconds <= time_limit;
  const bool ok = pass && in_time;
  if (!ok) ++failures;
  std::printf("[%s] %d. %-46s residual=%.3e tol=%.1e time=%.2fs%s\n", ok ? "PASS" : "FAIL",
              idx, name.c_str(), residual, tol, seconds,
              in_time ? "" : " (over time limit)");
  std::fflush(stdout);
}

int cli_exit(const std::string& args) {
  const std::string cmd = std::string(TORSIONLAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

}  // namespace

int main() {
  const Tolerance tol;

  {  // 1. The two torsion formulas agree on 1000 random complexes.
    Timer t;
    const auto c = suite::torsion_equivalence(1000, tol);
    print_line(1, "torsion_tc = torsion_log_sum (1000 seeds)", c.pass, c.residual, c.tolerance,
           t.seconds(), 10.0);
  }
  {  // 2. det C = det HC isomorphism volume equals the torsion, 200 seeds.
    Timer t;
    const auto c = suite::det_line_iso(200, tol);
    print_line(2, "det-line iso volume = torsion (200 seeds)", c.pass, c.residual, c.tolerance,
           t.seconds(), 10.0);
  }
  {  // 3. Torsion multiplicativity over compatible short exact sequences.
    Timer t;
    const auto c = suite::ses_multiplicativity(200, tol);
    print_line(3, "ses multiplicativity (200 seeds)", c.pass, c.residual, c.tolerance, t.seconds(),
           30.0);
  }
  {  // 4. Filtered-complex torsion against the spectral pages, 300 seeds,
     //    page dims against the classical subquotient oracle.
    Timer t;
    const auto c = suite::maumary(300, tol);
    print_line(4, "filtered torsion + classical page dims (300)", c.pass, c.residual, c.tolerance,
           t.seconds(), 60.0);
  }
  {  // 5. Page invariants: Euler, alternating chains, lift independence.
    Timer t;
    const auto c = suite::spectral_invariants(25, tol);
    print_line(5, "spectral invariants + lift independence", c.pass, c.residual, c.tolerance,
           t.seconds(), 0.0);
  }
  {  // 6. Geometric-complex structure on 200 models.
    Timer t;
    const auto c = suite::geometric_models(200, tol);
    print_line(6, "geometric complex structure (200 seeds)", c.pass, c.residual, c.tolerance,
           t.seconds(), 0.0);
  }
  {  // 7. Wang + Gysin identities and the mapping-torus closed form.
    Timer t;
    const auto w = suite::wang(100, tol);
    const auto g = suite::gysin(100, tol);
    const auto mt = suite::mapping_torus(50, tol);
    const bool pass = w.pass && g.pass && mt.pass;
    const double residual = std::max({w.residual, g.residual, mt.residual});
    print_line(7, "wang/gysin identities + closed form", pass, residual, 1e-6, t.seconds(), 30.0);
  }
  {  // 8. Ledger consistency and the symbolic cancellation self-test.
    Timer t;
    const auto c = suite::ledgers(25, tol);
    print_line(8, "torsion ledgers + term cancellation", c.pass, c.residual, c.tolerance,
           t.seconds(), 0.0);
  }
  {  // 9. Plumbing: round trips, determinism, exit codes, suite runtime.
    Timer t;
    const auto c = suite::plumbing(12, tol);
    bool exit_ok = true;
    const std::string good = "/tmp/torsionlab_acc_good.json";
    io::Document doc;
    doc.kind = "complex";
    doc.payload = generator::gen_complex(1);
    io::write_file(good, io::emit(doc));
    if (cli_exit("torsion " + good) != 0) exit_ok = false;
    if (cli_exit("validate /nonexistent.json") != 2) exit_ok = false;
    if (cli_exit("bogus-subcommand") != 2) exit_ok = false;

    Timer t_suite;
    const auto full = suite::run_suite({100, tol});
    const double suite_time = t_suite.seconds();
    const bool pass = c.pass && exit_ok && full.all_pass() && suite_time < 180.0;
    print_line(9, "plumbing + full suite(100) in <3min", pass, c.residual, c.tolerance,
           t.seconds(), 0.0);
    std::printf("       suite --seeds 100: %s in %.1fs\n",
                full.all_pass() ? "all pass" : "FAILURES", suite_time);
  }

  if (failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", failures);
  return 1;
}
