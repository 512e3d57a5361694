#include "metrika/structure.hpp"

#include <algorithm>

namespace metrika {

namespace {

void check_shape(const Signature& sig, std::size_t n, const std::vector<std::vector<Rational>>& tables) {
  if (tables.size() != sig.size())
    throw Error(ErrorCode::InvalidStructure, "expected " + std::to_string(sig.size()) + " tables, got " +
                                                 std::to_string(tables.size()));
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t want = tuple_count(sig.relation(r).arity, n);
    if (tables[r].size() != want)
      throw Error(ErrorCode::InvalidStructure, "table '" + sig.relation(r).name + "' has " +
                                                   std::to_string(tables[r].size()) + " entries, expected " +
                                                   std::to_string(want));
  }
}

bool contains(std::span<const std::size_t> t, std::size_t p) { return std::find(t.begin(), t.end(), p) != t.end(); }

class Checker {
 public:
  Checker(const PresentedStructure& m, ValidationReport& report) : m_(m), report_(report) {}

  void fail(std::string axiom, std::vector<std::size_t> witness, Rational lhs, Rational rhs) {
    report_.ok = false;
    report_.violations.push_back({std::move(axiom), std::move(witness), std::move(lhs), std::move(rhs)});
  }

  void range(std::size_t relation, std::size_t from, std::size_t to) {
    const auto& table = m_.table(relation);
    const std::size_t k = m_.signature().relation(relation).arity;
    for (std::size_t i = from; i < to; ++i) {
      const Rational& v = table[i];
      if (v.sign() < 0) fail("range:" + m_.signature().relation(relation).name, tuple_at(k, i), v, Rational::zero());
      if (v > Rational::one()) fail("range:" + m_.signature().relation(relation).name, tuple_at(k, i), v, Rational::one());
    }
  }

  void reflexive(std::size_t i) {
    if (!m_.distance(i, i).is_zero()) fail("reflexivity", {i}, m_.distance(i, i), Rational::zero());
  }

  void symmetric(std::size_t i, std::size_t j) {
    if (m_.distance(i, j) != m_.distance(j, i)) fail("symmetry", {i, j}, m_.distance(i, j), m_.distance(j, i));
  }

  // d(x,z) <= d(x,y) + d(y,z); witness (x, z, y).
  void triangle(std::size_t x, std::size_t z, std::size_t y) {
    const Rational& lhs = m_.distance(x, z);
    Rational rhs = m_.distance(x, y) + m_.distance(y, z);
    if (lhs > rhs) fail("triangle", {x, z, y}, lhs, std::move(rhs));
  }

  // Compares tuple t with t[j <- y].
  void lipschitz(std::size_t relation, const std::vector<std::size_t>& t, std::size_t j, std::size_t y) {
    const auto& symbol = m_.signature().relation(relation);
    std::vector<std::size_t> u = t;
    u[j] = y;
    const Rational gap = abs(m_.value(relation, t) - m_.value(relation, u));
    if (gap.is_zero()) return;
    Rational bound = symbol.lipschitz * m_.distance(t[j], y);
    if (gap > bound) {
      std::vector<std::size_t> witness = t;
      witness.insert(witness.end(), u.begin(), u.end());
      fail("lipschitz:" + symbol.name, std::move(witness), gap, std::move(bound));
    }
  }

 private:
  const PresentedStructure& m_;
  ValidationReport& report_;
};

bool compute_is_metric(const PresentedStructure& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (m.distance(i, j).sign() <= 0) return false;
  return true;
}

// Checks every axiom instance that mentions point p of `m`.
void check_point(const PresentedStructure& m, std::size_t p, ValidationReport& report) {
  Checker c(m, report);
  const Signature& sig = m.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t k = sig.relation(r).arity;
    c.range(r, tuple_count(k, p), tuple_count(k, p + 1));
  }
  c.reflexive(p);
  for (std::size_t i = 0; i < p; ++i) c.symmetric(i, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j <= p; ++j)
      if (j != i && j != p) c.triangle(i, p, j);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t k = i + 1; k < p; ++k) c.triangle(i, k, p);

  const std::size_t n = p + 1;
  for (std::size_t r = 1; r < sig.size(); ++r) {
    const std::size_t k = sig.relation(r).arity;
    const std::size_t count = tuple_count(k, n);
    std::vector<std::size_t> t(k, 0);
    for (std::size_t idx = 0; idx < count; ++idx, next_tuple(t)) {
      const bool has_p = contains(t, p);
      for (std::size_t j = 0; j < k; ++j) {
        if (has_p) {
          for (std::size_t y = t[j] + 1; y < n; ++y) c.lipschitz(r, t, j, y);
        } else if (t[j] < p) {
          c.lipschitz(r, t, j, p);
        }
      }
    }
  }
}

}  // namespace

PresentedStructure::PresentedStructure(Signature sig) : sig_(std::move(sig)), tables_(sig_.size()) {}

PresentedStructure::PresentedStructure(Signature sig, std::size_t n, std::vector<std::vector<Rational>> tables,
                                       std::vector<ExtensionRecord> provenance)
    : sig_(std::move(sig)), n_(n), tables_(std::move(tables)), provenance_(std::move(provenance)) {
  check_shape(sig_, n_, tables_);
}

PresentedStructure PresentedStructure::tabulate(
    Signature sig, std::size_t n, const std::function<Rational(std::size_t, std::span<const std::size_t>)>& fn) {
  std::vector<std::vector<Rational>> tables(sig.size());
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t k = sig.relation(r).arity;
    const std::size_t count = tuple_count(k, n);
    tables[r].reserve(count);
    std::vector<std::size_t> t(k, 0);
    for (std::size_t idx = 0; idx < count; ++idx, next_tuple(t)) tables[r].push_back(fn(r, t));
  }
  return PresentedStructure(std::move(sig), n, std::move(tables));
}

PresentedStructure PresentedStructure::from_distances(const std::vector<std::vector<Rational>>& d) {
  const std::size_t n = d.size();
  for (const auto& row : d)
    if (row.size() != n) throw Error(ErrorCode::InvalidStructure, "distance matrix is not square");
  return tabulate(Signature(), n, [&](std::size_t, std::span<const std::size_t> t) { return d[t[0]][t[1]]; });
}

bool PresentedStructure::same_tables(const PresentedStructure& other) const {
  return sig_ == other.sig_ && n_ == other.n_ && tables_ == other.tables_;
}

ExtensionRows ExtensionRows::metric(std::span<const Rational> s) {
  ExtensionRows out;
  std::vector<Rational> row;
  row.reserve(2 * s.size() + 1);
  row.insert(row.end(), s.begin(), s.end());
  row.insert(row.end(), s.begin(), s.end());
  row.push_back(Rational::zero());
  out.rows.push_back(std::move(row));
  return out;
}

ExtensionRows ExtensionRows::tabulate(const PresentedStructure& m,
                                      const std::function<Rational(std::size_t, std::span<const std::size_t>)>& fn) {
  ExtensionRows out;
  const Signature& sig = m.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    std::vector<Rational> row;
    for (const auto& t : tuples_with_max(sig.relation(r).arity, m.size() + 1)) row.push_back(fn(r, t));
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string describe(const Violation& v) {
  std::string w;
  for (std::size_t i = 0; i < v.witness.size(); ++i) w += (i ? "," : "") + std::to_string(v.witness[i]);
  return v.axiom + " (" + w + "): " + v.lhs.to_string() + " vs " + v.rhs.to_string();
}

ValidationReport validate(const PresentedStructure& m) {
  ValidationReport report;
  Checker c(m, report);
  const Signature& sig = m.signature();
  const std::size_t n = m.size();
  for (std::size_t r = 0; r < sig.size(); ++r) c.range(r, 0, m.table(r).size());
  for (std::size_t i = 0; i < n; ++i) c.reflexive(i);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) c.symmetric(i, j);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t z = x + 1; z < n; ++z)
      for (std::size_t y = 0; y < n; ++y)
        if (y != x && y != z) c.triangle(x, z, y);
  // d's own modulus follows from symmetry and the triangle inequality.
  for (std::size_t r = 1; r < sig.size(); ++r) {
    const std::size_t k = sig.relation(r).arity;
    const std::size_t count = tuple_count(k, n);
    std::vector<std::size_t> t(k, 0);
    for (std::size_t idx = 0; idx < count; ++idx, next_tuple(t))
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t y = t[j] + 1; y < n; ++y) c.lipschitz(r, t, j, y);
  }
  report.is_metric = compute_is_metric(m);
  return report;
}

ExtensionError::ExtensionError(ValidationReport report)
    : Error(ErrorCode::ExtensionViolatesAxioms,
            report.violations.empty() ? std::string("extension rejected") : describe(report.violations.front())),
      report_(std::move(report)) {}

namespace {

PresentedStructure append_rows(const PresentedStructure& m, const ExtensionRows& rows, std::string source) {
  const Signature& sig = m.signature();
  if (rows.rows.size() != sig.size())
    throw Error(ErrorCode::InvalidStructure, "extension rows cover " + std::to_string(rows.rows.size()) +
                                                 " relations, signature has " + std::to_string(sig.size()));
  std::vector<std::vector<Rational>> tables;
  tables.reserve(sig.size());
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t k = sig.relation(r).arity;
    const std::size_t want = tuple_count(k, m.size() + 1) - tuple_count(k, m.size());
    if (rows.rows[r].size() != want)
      throw Error(ErrorCode::InvalidStructure, "extension row for '" + sig.relation(r).name + "' has " +
                                                   std::to_string(rows.rows[r].size()) + " entries, expected " +
                                                   std::to_string(want));
    std::vector<Rational> table;
    table.reserve(m.table(r).size() + want);
    table = m.table(r);
    table.insert(table.end(), rows.rows[r].begin(), rows.rows[r].end());
    tables.push_back(std::move(table));
  }
  auto provenance = m.provenance();
  provenance.push_back({m.size(), std::move(source)});
  return PresentedStructure(sig, m.size() + 1, std::move(tables), std::move(provenance));
}

}  // namespace

ValidationReport validate_extension(const PresentedStructure& m, const ExtensionRows& rows) {
  const PresentedStructure ext = append_rows(m, rows, "");
  ValidationReport report;
  check_point(ext, m.size(), report);
  report.is_metric = compute_is_metric(ext);
  return report;
}

PresentedStructure extend_point(const PresentedStructure& m, const ExtensionRows& rows, std::string source) {
  PresentedStructure ext = append_rows(m, rows, std::move(source));
  ValidationReport report;
  check_point(ext, m.size(), report);
  if (!report.ok) {
    report.is_metric = compute_is_metric(ext);
    throw ExtensionError(std::move(report));
  }
  return ext;
}

PresentedStructure metric_quotient(const PresentedStructure& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> rep(n);
  std::vector<std::size_t> reps;
  std::vector<std::size_t> new_index(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep[i] = i;
    for (std::size_t j = 0; j < i; ++j)
      if (m.distance(i, j).is_zero()) {
        rep[i] = rep[j];
        break;
      }
    if (rep[i] == i) {
      new_index[i] = reps.size();
      reps.push_back(i);
    }
  }
  if (reps.size() == n) return m;

  const Signature& sig = m.signature();
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const std::size_t k = sig.relation(r).arity;
    const std::size_t count = tuple_count(k, n);
    std::vector<std::size_t> t(k, 0);
    std::vector<std::size_t> u(k, 0);
    for (std::size_t idx = 0; idx < count; ++idx, next_tuple(t)) {
      for (std::size_t j = 0; j < k; ++j) u[j] = rep[t[j]];
      if (m.value(r, t) != m.value(r, u)) {
        std::string w;
        for (std::size_t j = 0; j < k; ++j) w += (j ? "," : "") + std::to_string(t[j]);
        throw Error(ErrorCode::QuotientIllDefined,
                    "relation '" + sig.relation(r).name + "' separates zero-distance points at (" + w + ")");
      }
    }
  }
  return PresentedStructure::tabulate(sig, reps.size(), [&](std::size_t r, std::span<const std::size_t> t) {
    std::vector<std::size_t> u(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) u[j] = reps[t[j]];
    return m.value(r, u);
  });
}

PresentedStructure prefix(const PresentedStructure& m, std::size_t p) {
  if (p > m.size()) throw Error(ErrorCode::IndexOutOfPrefix, "prefix longer than the structure");
  const Signature& sig = m.signature();
  std::vector<std::vector<Rational>> tables;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const auto& full = m.table(r);
    tables.emplace_back(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(tuple_count(sig.relation(r).arity, p)));
  }
  std::vector<ExtensionRecord> provenance;
  for (const auto& rec : m.provenance())
    if (rec.point < p) provenance.push_back(rec);
  return PresentedStructure(sig, p, std::move(tables), std::move(provenance));
}

bool is_prefix_of(const PresentedStructure& m, const PresentedStructure& ext) {
  if (!(m.signature() == ext.signature()) || m.size() > ext.size()) return false;
  for (std::size_t r = 0; r < m.signature().size(); ++r) {
    const auto& a = m.table(r);
    const auto& b = ext.table(r);
    if (!std::equal(a.begin(), a.end(), b.begin())) return false;
  }
  return true;
}

}  // namespace metrika
