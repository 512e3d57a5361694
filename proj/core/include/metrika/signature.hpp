#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metrika/rational.hpp"

namespace metrika {

struct RelationSymbol {
  std::string name;
  std::size_t arity = 0;
  /// Per-argument Lipschitz constant with respect to d.
  Rational lipschitz;

  friend bool operator==(const RelationSymbol&, const RelationSymbol&) = default;
};

/// Relational signature. The metric symbol d (arity 2, Lipschitz 1) is
/// always relation 0.
class Signature {
 public:
  static constexpr std::size_t kMetric = 0;

  /// The pure metric signature {d}.
  Signature();

  /// Builds a signature from a relation list. If d is absent it is
  /// prepended; if present it is moved to index 0 and must have arity 2 and
  /// Lipschitz constant 1. Throws InvalidSignature on duplicates, zero
  /// arities, negative constants or reserved names.
  explicit Signature(std::vector<RelationSymbol> relations);

  /// {d, R} with R binary and 1-Lipschitz; the graph encoding.
  static Signature graph();

  std::size_t size() const noexcept { return relations_.size(); }
  const RelationSymbol& relation(std::size_t index) const { return relations_.at(index); }
  const std::vector<RelationSymbol>& relations() const noexcept { return relations_; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t max_arity() const noexcept;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<RelationSymbol> relations_;
};

/// Names that the formula grammar reserves for connectives and quantifiers.
bool is_reserved_word(std::string_view name);

}  // namespace metrika
