#include "torsionlab/io.hpp"

#include <fstream>
#include <sstream>

namespace torsionlab::io {

namespace {

const json& need(const json& j, const char* field, const std::string& where) {
  auto it = j.find(field);
  if (it == j.end())
    throw SchemaError("schema: missing field '" + std::string(field) + "' at " + where);
  return *it;
}

MetricSpace space_from_json(const json& j, const std::string& where) {
  const Index dim = need(j, "dim", where).get<Index>();
  const Matrix g = matrix_from_json(need(j, "gram", where), where + ".gram");
  if (g.rows() != dim || g.cols() != dim)
    throw SchemaError("schema: gram shape mismatch at " + where);
  MetricSpace s(dim, g);
  s.validate();
  return s;
}

json space_to_json(const MetricSpace& s) {
  return json{{"dim", s.dim}, {"gram", to_json(s.gram)}};
}

}  // namespace

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["data"] = std::move(rows);
  return out;
}

Matrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError("schema: matrix must be an object at " + where);
  const Index rows = need(j, "rows", where).get<Index>();
  const Index cols = need(j, "cols", where).get<Index>();
  const json& data = need(j, "data", where);
  if (!data.is_array() || static_cast<Index>(data.size()) != rows)
    throw SchemaError("schema: matrix row count mismatch at " + where);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = data[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw SchemaError("schema: matrix column count mismatch at " + where);
    for (Index k = 0; k < cols; ++k) {
      if (!row[k].is_number())
        throw SchemaError("schema: matrix entry not a number at " + where);
      m(i, k) = row[k].get<double>();
    }
  }
  return m;
}

json to_json(const complexes::GradedMetricComplex& c) {
  json j;
  j["q_min"] = c.q_min;
  j["spaces"] = json::array();
  for (const auto& s : c.spaces) j["spaces"].push_back(space_to_json(s));
  j["differentials"] = json::array();
  for (const auto& d : c.diffs) j["differentials"].push_back(to_json(d));
  return j;
}

namespace {

complexes::GradedMetricComplex complex_from_json(const json& j, const std::string& where) {
  complexes::GradedMetricComplex c;
  c.q_min = need(j, "q_min", where).get<int>();
  const json& spaces = need(j, "spaces", where);
  if (!spaces.is_array()) throw SchemaError("schema: spaces must be an array at " + where);
  for (std::size_t i = 0; i < spaces.size(); ++i)
    c.spaces.push_back(space_from_json(spaces[i], where + ".spaces[" + std::to_string(i) + "]"));
  const json& diffs = need(j, "differentials", where);
  if (!diffs.is_array() ||
      (spaces.size() > 0 && diffs.size() + 1 != spaces.size()) ||
      (spaces.empty() && !diffs.empty()))
    throw SchemaError("schema: one differential per adjacent degree pair at " + where);
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    Matrix d = matrix_from_json(diffs[i], where + ".differentials[" + std::to_string(i) + "]");
    if (d.rows() != c.spaces[i + 1].dim || d.cols() != c.spaces[i].dim)
      throw SchemaError("schema: differential shape mismatch at " + where);
    c.diffs.push_back(std::move(d));
  }
  return c;
}

spectral::FilteredMetricComplex filtered_from_json(const json& j, const std::string& where) {
  spectral::FilteredMetricComplex f;
  f.complex = complex_from_json(need(j, "complex", where), where + ".complex");
  f.p_min = need(j, "p_min", where).get<int>();
  const json& levels = need(j, "filtration", where);
  if (!levels.is_array() || levels.empty())
    throw SchemaError("schema: filtration must be a nonempty array at " + where);
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const json& per_degree = levels[l];
    if (!per_degree.is_array() || per_degree.size() != f.complex.spaces.size())
      throw SchemaError("schema: filtration level needs one basis per degree at " + where);
    std::vector<Matrix> bases;
    for (std::size_t qi = 0; qi < per_degree.size(); ++qi) {
      Matrix b = matrix_from_json(per_degree[qi], where + ".filtration[" + std::to_string(l) +
                                                      "][" + std::to_string(qi) + "]");
      if (b.rows() != f.complex.spaces[qi].dim)
        throw SchemaError("schema: filtration basis row mismatch at " + where);
      bases.push_back(std::move(b));
    }
    f.level_bases.push_back(std::move(bases));
  }
  return f;
}

geomcx::MorseBottModel morse_bott_from_json(const json& j, const std::string& where) {
  geomcx::MorseBottModel m;
  const json& comps = need(j, "components", where);
  if (!comps.is_array() || comps.empty())
    throw SchemaError("schema: components must be a nonempty array at " + where);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string at = where + ".components[" + std::to_string(i) + "]";
    geomcx::Component comp;
    comp.label = need(comps[i], "label", at).get<std::string>();
    comp.index = need(comps[i], "index", at).get<int>();
    comp.complex = complex_from_json(need(comps[i], "complex", at), at + ".complex");
    m.components.push_back(std::move(comp));
  }
  const json& inst = need(j, "instantons", where);
  if (!inst.is_array()) throw SchemaError("schema: instantons must be an array at " + where);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const std::string at = where + ".instantons[" + std::to_string(i) + "]";
    geomcx::InstantonMap u;
    u.to = need(inst[i], "to", at).get<int>();
    u.from = need(inst[i], "from", at).get<int>();
    const json& blocks = need(inst[i], "blocks", at);
    if (!blocks.is_array()) throw SchemaError("schema: blocks must be an array at " + at);
    for (const auto& bj : blocks) {
      const int k = need(bj, "degree", at).get<int>();
      u.blocks[k] = matrix_from_json(need(bj, "matrix", at), at + ".matrix");
    }
    m.instantons.push_back(std::move(u));
  }
  return m;
}

bundles::BundleModel bundle_from_json(const json& j, const std::string& where) {
  bundles::BundleModel b;
  const json& pts = need(j, "points", where);
  if (!pts.is_array() || pts.empty())
    throw SchemaError("schema: points must be a nonempty array at " + where);
  for (const auto& p : pts)
    b.points.push_back({need(p, "label", where).get<std::string>(),
                        need(p, "index", where).get<int>()});
  b.r_min = need(j, "r_min", where).get<int>();
  const json& fiber = need(j, "fiber", where);
  if (!fiber.is_array()) throw SchemaError("schema: fiber must be an array at " + where);
  for (std::size_t i = 0; i < fiber.size(); ++i)
    b.fiber.push_back(space_from_json(fiber[i], where + ".fiber[" + std::to_string(i) + "]"));
  auto arrows = [&](const char* field) {
    std::vector<bundles::BundleModel::Arrow> out;
    const json& arr = need(j, field, where);
    if (!arr.is_array()) throw SchemaError("schema: arrows must be an array at " + where);
    for (const auto& a : arr)
      out.push_back({need(a, "to", where).get<int>(), need(a, "from", where).get<int>(),
                     need(a, "r", where).get<int>(),
                     matrix_from_json(need(a, "matrix", where), where)});
    return out;
  };
  b.transports = arrows("transports");
  b.jumps = arrows("jumps");
  return b;
}

detline::ChainMap chain_map_from_json(const json& j, const std::string& where) {
  detline::ChainMap f;
  f.q_min = need(j, "q_min", where).get<int>();
  const json& blocks = need(j, "blocks", where);
  if (!blocks.is_array()) throw SchemaError("schema: blocks must be an array at " + where);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    f.blocks.push_back(matrix_from_json(blocks[i], where + ".blocks[" + std::to_string(i) + "]"));
  return f;
}

json chain_map_to_json(const detline::ChainMap& f) {
  json j;
  j["q_min"] = f.q_min;
  j["blocks"] = json::array();
  for (const auto& b : f.blocks) j["blocks"].push_back(to_json(b));
  return j;
}

template <typename EdgeData>
EdgeData edge_from_json(const json& j, const std::string& where) {
  EdgeData d;
  d.n = need(j, "n", where).get<int>();
  d.total = filtered_from_json(need(j, "total", where), where + ".total");
  d.ambient = complex_from_json(need(j, "ambient", where), where + ".ambient");
  d.quasi_iso = chain_map_from_json(need(j, "quasi_iso", where), where + ".quasi_iso");
  return d;
}

}  // namespace

json to_json(const spectral::FilteredMetricComplex& f) {
  json j;
  j["complex"] = to_json(f.complex);
  j["p_min"] = f.p_min;
  j["filtration"] = json::array();
  for (const auto& level : f.level_bases) {
    json per_degree = json::array();
    for (const auto& b : level) per_degree.push_back(to_json(b));
    j["filtration"].push_back(std::move(per_degree));
  }
  return j;
}

json to_json(const geomcx::MorseBottModel& m) {
  json j;
  j["components"] = json::array();
  for (const auto& comp : m.components)
    j["components"].push_back(json{{"label", comp.label},
                                   {"index", comp.index},
                                   {"complex", to_json(comp.complex)}});
  j["instantons"] = json::array();
  for (const auto& u : m.instantons) {
    json blocks = json::array();
    for (const auto& [k, blk] : u.blocks)
      blocks.push_back(json{{"degree", k}, {"matrix", to_json(blk)}});
    j["instantons"].push_back(json{{"to", u.to}, {"from", u.from}, {"blocks", std::move(blocks)}});
  }
  return j;
}

json to_json(const bundles::BundleModel& b) {
  json j;
  j["points"] = json::array();
  for (const auto& p : b.points)
    j["points"].push_back(json{{"label", p.label}, {"index", p.index}});
  j["r_min"] = b.r_min;
  j["fiber"] = json::array();
  for (const auto& h : b.fiber) j["fiber"].push_back(space_to_json(h));
  auto arrows = [&](const std::vector<bundles::BundleModel::Arrow>& arr) {
    json out = json::array();
    for (const auto& a : arr)
      out.push_back(json{{"to", a.to}, {"from", a.from}, {"r", a.r}, {"matrix", to_json(a.matrix)}});
    return out;
  };
  j["transports"] = arrows(b.transports);
  j["jumps"] = arrows(b.jumps);
  return j;
}

json to_json(const bundles::WangData& w) {
  json j;
  j["n"] = w.n;
  j["total"] = to_json(w.total);
  j["ambient"] = to_json(w.ambient);
  j["quasi_iso"] = chain_map_to_json(w.quasi_iso);
  return j;
}

json to_json(const bundles::GysinData& g) {
  json j;
  j["n"] = g.n;
  j["total"] = to_json(g.total);
  j["ambient"] = to_json(g.ambient);
  j["quasi_iso"] = chain_map_to_json(g.quasi_iso);
  return j;
}

json emit(const Document& doc) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = doc.kind;
  if (doc.tolerance)
    j["tolerance"] = json{{"rank_rel_tol", doc.tolerance->rank_rel_tol},
                          {"compare_tol", doc.tolerance->compare_tol}};
  std::visit([&](const auto& payload) { j["payload"] = to_json(payload); }, doc.payload);
  return j;
}

Document ingest_text(const std::string& text, const Tolerance& tol) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("parse: ") + e.what());
  }
  const std::string version = need(j, "schema_version", "$").get<std::string>();
  if (version != kSchemaVersion)
    throw SchemaError("schema: unsupported schema_version '" + version + "'");
  Document doc;
  doc.kind = need(j, "kind", "$").get<std::string>();
  Tolerance effective = tol;
  if (j.contains("tolerance")) {
    Tolerance t;
    t.rank_rel_tol = need(j["tolerance"], "rank_rel_tol", "$.tolerance").get<double>();
    t.compare_tol = need(j["tolerance"], "compare_tol", "$.tolerance").get<double>();
    t.validate();
    doc.tolerance = t;
    effective = t;
  }
  const json& payload = need(j, "payload", "$");
  if (doc.kind == "complex") {
    auto c = complex_from_json(payload, "$.payload");
    complexes::require_valid(c, effective);
    doc.payload = std::move(c);
  } else if (doc.kind == "filtered") {
    auto f = filtered_from_json(payload, "$.payload");
    spectral::require_valid(f, effective);
    doc.payload = std::move(f);
  } else if (doc.kind == "morse_bott") {
    auto m = morse_bott_from_json(payload, "$.payload");
    geomcx::assemble(m, effective);  // full validation
    doc.payload = std::move(m);
  } else if (doc.kind == "bundle") {
    auto b = bundle_from_json(payload, "$.payload");
    geomcx::assemble(bundles::to_morse_bott(b), effective);
    doc.payload = std::move(b);
  } else if (doc.kind == "wang") {
    auto w = edge_from_json<bundles::WangData>(payload, "$.payload");
    spectral::require_valid(w.total, effective);
    doc.payload = std::move(w);
  } else if (doc.kind == "gysin") {
    auto g = edge_from_json<bundles::GysinData>(payload, "$.payload");
    spectral::require_valid(g.total, effective);
    doc.payload = std::move(g);
  } else {
    throw SchemaError("schema: unknown kind '" + doc.kind + "'");
  }
  return doc;
}

Document ingest_file(const std::string& path, const Tolerance& tol) {
  std::ifstream in(path);
  if (!in) throw SchemaError("parse: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ingest_text(ss.str(), tol);
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("io: cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

Document generate_document(const std::string& kind, std::uint64_t seed, Index size_cap) {
  Document doc;
  doc.kind = kind;
  if (size_cap < 1 || size_cap > 64)
    throw DomainError("generate: size cap out of supported range [1, 64]");
  if (kind == "complex") {
    generator::ComplexParams p;
    p.max_total_dim = size_cap;
    doc.payload = generator::gen_complex(seed, p);
  } else if (kind == "filtered") {
    generator::FilteredParams p;
    p.max_total_dim = size_cap;
    doc.payload = generator::gen_filtered(seed, p);
  } else if (kind == "morse_bott") {
    generator::MorseBottParams p;
    p.max_total_dim = size_cap;
    doc.payload = generator::gen_morse_bott(seed, p);
  } else if (kind == "bundle") {
    generator::BundleParams p;
    doc.payload = generator::gen_bundle(seed, p);
  } else if (kind == "wang") {
    generator::WangParams p;
    doc.payload = generator::gen_wang(seed, p);
  } else if (kind == "gysin") {
    generator::GysinParams p;
    doc.payload = generator::gen_gysin(seed, p);
  } else {
    throw SchemaError("generate: unknown kind '" + kind + "'");
  }
  return doc;
}

}  // namespace torsionlab::io
