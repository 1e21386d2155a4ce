#pragma once

#include "torsionlab/generator.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <variant>

namespace torsionlab::io {

using json = nlohmann::ordered_json;

/// A parsed input document: one of the supported model kinds plus an
/// optional tolerance override.
struct Document {
  std::string kind;
  std::optional<Tolerance> tolerance;
  std::variant<complexes::GradedMetricComplex, spectral::FilteredMetricComplex,
               geomcx::MorseBottModel, bundles::BundleModel, bundles::WangData,
               bundles::GysinData>
      payload;
};

inline constexpr const char* kSchemaVersion = "1";

json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const std::string& where);

json to_json(const complexes::GradedMetricComplex& c);
json to_json(const spectral::FilteredMetricComplex& f);
json to_json(const geomcx::MorseBottModel& m);
json to_json(const bundles::BundleModel& b);
json to_json(const bundles::WangData& w);
json to_json(const bundles::GysinData& g);

json emit(const Document& doc);

/// Parse + schema-validate + run the module validators. Throws SchemaError
/// on malformed documents and ValidationError on invariant violations.
Document ingest_text(const std::string& text, const Tolerance& tol = default_tolerance());
Document ingest_file(const std::string& path, const Tolerance& tol = default_tolerance());

void write_file(const std::string& path, const json& j);

/// Deterministic generated document for (kind, seed, size); kinds:
/// complex, filtered, morse_bott, bundle, wang, gysin.
Document generate_document(const std::string& kind, std::uint64_t seed, Index size_cap);

}  // namespace torsionlab::io
