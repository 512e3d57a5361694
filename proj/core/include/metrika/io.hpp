#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "metrika/compare.hpp"
#include "metrika/polish.hpp"
#include "metrika/random.hpp"
#include "metrika/structure.hpp"
#include "metrika/synth.hpp"
#include "metrika/urysohn.hpp"

namespace metrika::io {

using Json = nlohmann::ordered_json;

/// Always "p/q", also for integers ("0/1").
std::string fraction(const Rational& q);
/// Decimal rendering with `digits` places, rounded half away from zero.
std::string decimal(const Rational& q, unsigned digits = 6);
/// Accepts "p/q", integers and decimals (exact). Throws FormatError.
Rational rational_from_json(const Json& j);

Json to_json(const Signature& sig);
Signature signature_from_json(const Json& j);

/// {"signature", "points", "tables": {name: row-major nested arrays}, "provenance"}.
Json to_json(const PresentedStructure& m);
/// Throws FormatError on malformed input and InvalidStructure on shape errors.
PresentedStructure structure_from_json(const Json& j);

Json to_json(const DistanceConfiguration& theta);
DistanceConfiguration configuration_from_json(const Json& j);
/// A single matrix, an array of matrices, or {"configs": [...]}.
std::vector<DistanceConfiguration> configurations_from_json(const Json& j);

Json to_json(const Code& code);
Code code_from_json(const Json& j);

Json to_json(const ExtensionReport& r);
Json to_json(const BackAndForthResult& r);
Json to_json(const InvarianceReport& r);
Json to_json(const std::vector<CurvePoint>& curve);

/// Contents of a theory file: {"name", "conditions", "grid", "budget", ...}.
struct TheoryFile {
  TheorySpec spec;
  std::optional<Rational> grid;
  std::optional<std::size_t> budget;
};
TheoryFile theory_from_json(const Json& j);

/// {"spec": {"kind", "grid"}, "n_values", "trials", "eps", "theta"}; "theta"
/// is a matrix or a path resolved against `base_dir`.
struct CampaignFile {
  MeasureSpec spec;
  std::vector<std::size_t> n_values;
  std::size_t trials = 0;
  Rational eps;
  DistanceConfiguration theta;
};
CampaignFile campaign_from_json(const Json& j, const std::filesystem::path& base_dir);

/// Throws FormatError when the file is missing or not JSON.
Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// FNV-1a 64-bit digest, as 16 hex digits.
std::string content_hash(const std::string& bytes);

}  // namespace metrika::io
