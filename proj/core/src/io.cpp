#include "metrika/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "metrika/error.hpp"

namespace metrika::io {

namespace {

[[noreturn]] void format_error(const std::string& what) { throw Error(ErrorCode::FormatError, what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) format_error(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::size_t size_from_json(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    format_error(std::string(what) + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

// Row-major nesting of a table stored in tuple order.
Json nest(const std::vector<Rational>& table, std::size_t arity, std::size_t n, std::vector<std::size_t>& prefix) {
  if (prefix.size() == arity) return fraction(table[tuple_index(prefix)]);
  Json arr = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    prefix.push_back(i);
    arr.push_back(nest(table, arity, n, prefix));
    prefix.pop_back();
  }
  return arr;
}

void unnest(const Json& j, std::size_t arity, std::size_t n, std::vector<std::size_t>& prefix, std::vector<Rational>& table,
            const std::string& name) {
  if (prefix.size() == arity) {
    table[tuple_index(prefix)] = rational_from_json(j);
    return;
  }
  if (!j.is_array() || j.size() != n) format_error("table '" + name + "' does not have shape " + std::to_string(n) + "^" + std::to_string(arity));
  for (std::size_t i = 0; i < n; ++i) {
    prefix.push_back(i);
    unnest(j[i], arity, n, prefix, table, name);
    prefix.pop_back();
  }
}

}  // namespace

std::string fraction(const Rational& q) {
  if (q.is_integer()) return q.to_string() + "/1";
  return q.to_string();
}

std::string decimal(const Rational& q, unsigned digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  const mpq_class v = abs(q.to_mpq()) * scale;
  // floor(v + 1/2)
  mpz_class n = (v.get_num() * 2 + v.get_den()) / (v.get_den() * 2);
  std::string s = n.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  if (digits > 0) s.insert(s.size() - digits, ".");
  if (q.sign() < 0 && n != 0) s.insert(0, "-");
  return s;
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  format_error("expected a rational string, got " + j.dump());
}

Json to_json(const Signature& sig) {
  Json rels = Json::array();
  for (const auto& r : sig.relations())
    rels.push_back({{"name", r.name}, {"arity", r.arity}, {"lipschitz", fraction(r.lipschitz)}});
  return {{"relations", rels}};
}

Signature signature_from_json(const Json& j) {
  const Json& rels = field(j, "relations");
  if (!rels.is_array()) format_error("'relations' must be an array");
  std::vector<RelationSymbol> out;
  for (const auto& r : rels) {
    const Json& name = field(r, "name");
    if (!name.is_string()) format_error("relation name must be a string");
    RelationSymbol s{name.get<std::string>(), size_from_json(field(r, "arity"), "arity"), Rational::one()};
    if (r.contains("lipschitz")) s.lipschitz = rational_from_json(r.at("lipschitz"));
    out.push_back(std::move(s));
  }
  return Signature(std::move(out));
}

Json to_json(const PresentedStructure& m) {
  Json tables = Json::object();
  for (std::size_t r = 0; r < m.signature().size(); ++r) {
    std::vector<std::size_t> prefix;
    tables[m.signature().relation(r).name] = nest(m.table(r), m.signature().relation(r).arity, m.size(), prefix);
  }
  Json prov = Json::array();
  for (const auto& e : m.provenance()) prov.push_back({{"point", e.point}, {"source", e.source}});
  return {{"signature", to_json(m.signature())}, {"points", m.size()}, {"tables", tables}, {"provenance", prov}};
}

PresentedStructure structure_from_json(const Json& j) {
  const Signature sig = j.contains("signature") ? signature_from_json(j.at("signature")) : Signature();
  const std::size_t n = size_from_json(field(j, "points"), "points");
  const Json& tables = field(j, "tables");
  if (!tables.is_object()) format_error("'tables' must be an object");
  std::vector<std::vector<Rational>> out;
  for (const auto& r : sig.relations()) {
    if (!tables.contains(r.name)) format_error("missing table '" + r.name + "'");
    std::vector<Rational> table(tuple_count(r.arity, n));
    std::vector<std::size_t> prefix;
    unnest(tables.at(r.name), r.arity, n, prefix, table, r.name);
    out.push_back(std::move(table));
  }
  std::vector<ExtensionRecord> prov;
  if (j.contains("provenance")) {
    if (!j.at("provenance").is_array()) format_error("'provenance' must be an array");
    for (const auto& e : j.at("provenance")) {
      const Json& src = field(e, "source");
      if (!src.is_string()) format_error("provenance source must be a string");
      prov.push_back({size_from_json(field(e, "point"), "point"), src.get<std::string>()});
    }
  }
  return PresentedStructure(sig, n, std::move(out), std::move(prov));
}

Json to_json(const DistanceConfiguration& theta) {
  Json rows = Json::array();
  for (const auto& row : theta.matrix()) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(fraction(v));
    rows.push_back(r);
  }
  return rows;
}

DistanceConfiguration configuration_from_json(const Json& j) {
  if (!j.is_array()) format_error("configuration must be a matrix");
  std::vector<std::vector<Rational>> r;
  for (const auto& row : j) {
    if (!row.is_array()) format_error("configuration rows must be arrays");
    std::vector<Rational> out;
    for (const auto& v : row) out.push_back(rational_from_json(v));
    r.push_back(std::move(out));
  }
  return DistanceConfiguration(std::move(r));
}

std::vector<DistanceConfiguration> configurations_from_json(const Json& j) {
  const Json& list = j.is_object() ? field(j, "configs") : j;
  if (!list.is_array()) format_error("expected a configuration list");
  // A single matrix: an array whose first element is an array of scalars.
  const bool single = !list.empty() && list[0].is_array() && (list[0].empty() || !list[0][0].is_array());
  std::vector<DistanceConfiguration> out;
  if (single) {
    out.push_back(configuration_from_json(list));
    return out;
  }
  for (const auto& m : list) out.push_back(configuration_from_json(m));
  return out;
}

Json to_json(const Code& code) {
  Json values = Json::array();
  for (const auto& v : code.values) values.push_back(fraction(v));
  return {{"schema", "metrika/code/v1"}, {"index_order", kCodeIndexOrder}, {"arities", code.arities}, {"values", values}};
}

Code code_from_json(const Json& j) {
  const Json& order = field(j, "index_order");
  if (!order.is_string() || order.get<std::string>() != kCodeIndexOrder)
    throw Error(ErrorCode::SchemaMismatch, "unsupported index order");
  Code c;
  for (const auto& a : field(j, "arities")) c.arities.push_back(size_from_json(a, "arity"));
  for (const auto& v : field(j, "values")) c.values.push_back(rational_from_json(v));
  return c;
}

Json to_json(const ExtensionReport& r) {
  Json failures = Json::array();
  for (const auto& f : r.failures) failures.push_back({{"theta_id", f.theta_id}, {"tuple", f.tuple}});
  return {{"satisfied", r.satisfied}, {"total", r.total}, {"failures", failures}};
}

Json to_json(const BackAndForthResult& r) {
  Json pairs = Json::array();
  for (const auto& [a, b] : r.correspondence.pairs) pairs.push_back(Json::array({a, b}));
  return {{"status", to_string(r.status)},
          {"pairs", pairs},
          {"distortion", fraction(r.correspondence.distortion)},
          {"nodes_explored", r.nodes_explored}};
}

Json to_json(const InvarianceReport& r) {
  Json freqs = Json::array();
  for (const auto& f : r.frequencies)
    freqs.push_back({{"tuple", f.tuple},
                     {"hits", f.hits},
                     {"frequency", fraction(r.trials ? Rational(static_cast<std::int64_t>(f.hits), static_cast<std::int64_t>(r.trials))
                                                     : Rational())}});
  return {{"n", r.n},
          {"trials", r.trials},
          {"frequencies", freqs},
          {"max_gap", r.max_gap},
          {"max_gap_sigmas", r.max_gap_sigmas},
          {"gaps_within_3sigma", r.gaps_within_3sigma},
          {"chi_square", r.chi_square},
          {"dof", r.dof},
          {"p_value", r.p_value},
          {"alpha", r.alpha},
          {"flagged", r.flagged}};
}

Json to_json(const std::vector<CurvePoint>& curve) {
  Json points = Json::array();
  for (const auto& c : curve)
    points.push_back({{"n", c.n},
                      {"successes", c.successes},
                      {"trials", c.trials},
                      {"frequency", fraction(c.frequency)},
                      {"sigma", c.sigma}});
  return points;
}

TheoryFile theory_from_json(const Json& j) {
  const Json& name = field(j, "name");
  if (!name.is_string()) format_error("theory name must be a string");
  TheoryFile out;
  const TheoryKind kind = theory_kind_from_string(name.get<std::string>());
  auto opt_size = [&](const char* key, std::size_t def) {
    return j.contains(key) ? size_from_json(j.at(key), key) : def;
  };
  const std::size_t max_config = opt_size("max_config_size", 3);
  std::size_t denominator = 4;
  if (j.contains("config_grid")) {
    const Rational g = rational_from_json(j.at("config_grid"));
    if (g.sign() <= 0 || !g.is_small() || g.to_mpq().get_num() != 1) format_error("config_grid must be of the form 1/q");
    denominator = static_cast<std::size_t>(g.denominator().get_ui());
  }
  const Rational eps = j.contains("eps") ? rational_from_json(j.at("eps")) : Rational(1, 8);
  switch (kind) {
    case TheoryKind::EmptyMetric: out.spec = TheorySpec::empty_metric(max_config, denominator, eps); break;
    case TheoryKind::Graph: out.spec = TheorySpec::graph(opt_size("max_size", 3)); break;
    case TheoryKind::Custom: {
      std::vector<Condition> conds;
      if (j.contains("conditions")) {
        if (!j.at("conditions").is_array()) format_error("'conditions' must be an array");
        for (const auto& c : j.at("conditions")) {
          if (!c.is_string()) format_error("conditions must be strings");
          conds.push_back(parse_condition(c.get<std::string>(), Signature()));
        }
      }
      out.spec = TheorySpec::custom(std::move(conds), max_config, denominator, eps);
      break;
    }
  }
  if (kind != TheoryKind::Custom && j.contains("conditions") && !j.at("conditions").empty())
    throw Error(ErrorCode::InvalidTheory, "only custom theories take conditions");
  if (j.contains("grid")) out.grid = rational_from_json(j.at("grid"));
  if (j.contains("budget")) out.budget = size_from_json(j.at("budget"), "budget");
  out.spec.check();
  return out;
}

CampaignFile campaign_from_json(const Json& j, const std::filesystem::path& base_dir) {
  CampaignFile out;
  const Json& spec = field(j, "spec");
  if (spec.is_string()) {
    out.spec.kind = sampler_kind_from_string(spec.get<std::string>());
  } else {
    const Json& kind = field(spec, "kind");
    if (!kind.is_string()) format_error("sampler kind must be a string");
    out.spec.kind = sampler_kind_from_string(kind.get<std::string>());
    if (spec.contains("grid")) out.spec.grid = rational_from_json(spec.at("grid"));
  }
  for (const auto& n : field(j, "n_values")) out.n_values.push_back(size_from_json(n, "n"));
  out.trials = size_from_json(field(j, "trials"), "trials");
  out.eps = rational_from_json(field(j, "eps"));
  const Json& theta = field(j, "theta");
  if (theta.is_string()) {
    std::filesystem::path p = theta.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    const auto configs = configurations_from_json(read_json_file(p));
    if (configs.size() != 1) format_error("theta file must hold exactly one configuration");
    out.theta = configs.front();
  } else {
    out.theta = configuration_from_json(theta);
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) format_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    format_error("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) format_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) format_error("failed writing '" + path.string() + "'");
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace metrika::io
