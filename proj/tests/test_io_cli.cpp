#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "helpers.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

using namespace torsionlab;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TORSIONLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string tmp_path(const std::string& name) { return "/tmp/torsionlab_test_" + name; }

}  // namespace

TEST_CASE("round trip is bit exact for every kind") {
  for (const std::string kind :
       {"complex", "filtered", "morse_bott", "bundle", "wang", "gysin"}) {
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto doc = io::generate_document(kind, s, 14);
      const std::string text = io::emit(doc).dump();
      const auto back = io::ingest_text(text);
      CHECK(io::emit(back).dump() == text);
    }
  }
}

TEST_CASE("generator determinism") {
  for (const std::string kind : {"complex", "filtered", "morse_bott"}) {
    const auto a = io::emit(io::generate_document(kind, 42, 16)).dump();
    const auto b = io::emit(io::generate_document(kind, 42, 16)).dump();
    const auto c = io::emit(io::generate_document(kind, 43, 16)).dump();
    CHECK(a == b);
    CHECK(a != c);
  }
}

TEST_CASE("minimal document ingests and validates") {
  const std::string text = R"({
    "schema_version": "1",
    "kind": "complex",
    "payload": {
      "q_min": 0,
      "spaces": [ {"dim": 1, "gram": {"rows":1, "cols":1, "data":[[1.0]]}} ],
      "differentials": []
    }
  })";
  const auto doc = io::ingest_text(text);
  CHECK(doc.kind == "complex");
}

TEST_CASE("document with d squared nonzero names the invariant") {
  const auto c = make_complex(0, {1, 1, 1}, {mat({{1.0}}), mat({{1.0}})});
  io::Document doc;
  doc.kind = "complex";
  doc.payload = c;
  const std::string text = io::emit(doc).dump();
  CHECK_THROWS_WITH_AS(io::ingest_text(text), doctest::Contains("d_squared_zero"),
                       ValidationError);
}

TEST_CASE("schema errors carry the field path") {
  CHECK_THROWS_AS(io::ingest_text("{"), SchemaError);
  CHECK_THROWS_AS(io::ingest_text(R"({"schema_version":"1","kind":"complex"})"), SchemaError);
  CHECK_THROWS_AS(io::ingest_text(R"({"schema_version":"9","kind":"complex","payload":{}})"),
                  SchemaError);
}

TEST_CASE("tolerance override parsed") {
  const std::string text = R"({
    "schema_version": "1",
    "kind": "complex",
    "tolerance": {"rank_rel_tol": 1e-8, "compare_tol": 1e-5},
    "payload": {
      "q_min": 0,
      "spaces": [ {"dim": 1, "gram": {"rows":1, "cols":1, "data":[[1.0]]}} ],
      "differentials": []
    }
  })";
  const auto doc = io::ingest_text(text);
  REQUIRE(doc.tolerance.has_value());
  CHECK(doc.tolerance->compare_tol == doctest::Approx(1e-5));
}

TEST_CASE("cli exit code contract") {
  const std::string good = tmp_path("good.json");
  const std::string bad = tmp_path("bad.json");
  const std::string garbled = tmp_path("garbled.json");

  io::Document doc;
  doc.kind = "complex";
  doc.payload = two_term(2.0);
  io::write_file(good, io::emit(doc));

  io::Document doc_bad;
  doc_bad.kind = "complex";
  doc_bad.payload = make_complex(0, {1, 1, 1}, {mat({{1.0}}), mat({{1.0}})});
  io::write_file(bad, io::emit(doc_bad));

  {
    std::ofstream f(garbled);
    f << "{ not json";
  }

  CHECK(run_cli("torsion " + good) == 0);
  CHECK(run_cli("validate " + good) == 0);
  CHECK(run_cli("validate " + bad) == 1);
  CHECK(run_cli("torsion " + garbled) == 2);
  CHECK(run_cli("definitely-not-a-command") == 2);
  CHECK(run_cli("torsion") == 2);  // missing input
}

TEST_CASE("cli reports are deterministic") {
  const std::string path = tmp_path("det.json");
  const std::string out1 = tmp_path("out1.json");
  const std::string out2 = tmp_path("out2.json");
  io::Document doc;
  doc.kind = "complex";
  doc.payload = generator::gen_complex(12);
  io::write_file(path, io::emit(doc));
  CHECK(run_cli("torsion --format json --out " + out1 + " " + path) == 0);
  CHECK(run_cli("torsion --format json --out " + out2 + " " + path) == 0);
  std::ifstream a(out1), b(out2);
  std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  CHECK(!sa.empty());
}

TEST_CASE("report document formatting") {
  report::ReportDocument rep;
  report::Check c;
  c.name = "demo";
  c.pass = true;
  c.residual = 1e-12;
  c.tolerance = 1e-8;
  rep.add(c);
  CHECK(rep.all_pass());
  CHECK(rep.to_text().find("[PASS]") != std::string::npos);
  CHECK(rep.to_json()["checks"][0]["status"] == "PASS");
}
