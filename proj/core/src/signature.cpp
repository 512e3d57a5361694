#include "metrika/signature.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

#include "metrika/error.hpp"

namespace metrika {

namespace {

RelationSymbol metric_symbol() { return RelationSymbol{"d", 2, Rational::one()}; }

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s.front())) || s.front() == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

}  // namespace

bool is_reserved_word(std::string_view name) {
  static constexpr std::array<std::string_view, 6> kWords{"inf", "sup", "min", "max", "not", "absdiff"};
  return std::find(kWords.begin(), kWords.end(), name) != kWords.end();
}

Signature::Signature() : relations_{metric_symbol()} {}

Signature::Signature(std::vector<RelationSymbol> relations) {
  auto it = std::find_if(relations.begin(), relations.end(), [](const RelationSymbol& r) { return r.name == "d"; });
  if (it == relations.end()) {
    relations_.push_back(metric_symbol());
  } else {
    if (it->arity != 2 || it->lipschitz != Rational::one())
      throw Error(ErrorCode::InvalidSignature, "d must have arity 2 and lipschitz 1");
    relations_.push_back(*it);
    relations.erase(it);
  }
  std::unordered_set<std::string> seen{"d"};
  for (auto& r : relations) {
    if (!is_identifier(r.name) || is_reserved_word(r.name))
      throw Error(ErrorCode::InvalidSignature, "illegal relation name '" + r.name + "'");
    if (r.arity == 0) throw Error(ErrorCode::InvalidSignature, "relation '" + r.name + "' has arity 0");
    if (r.lipschitz.sign() < 0)
      throw Error(ErrorCode::InvalidSignature, "relation '" + r.name + "' has negative lipschitz constant");
    if (!seen.insert(r.name).second) throw Error(ErrorCode::InvalidSignature, "duplicate relation '" + r.name + "'");
    relations_.push_back(std::move(r));
  }
}

Signature Signature::graph() { return Signature({RelationSymbol{"R", 2, Rational::one()}}); }

std::optional<std::size_t> Signature::find(std::string_view name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i)
    if (relations_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Signature::max_arity() const noexcept {
  std::size_t k = 0;
  for (const auto& r : relations_) k = std::max(k, r.arity);
  return k;
}

}  // namespace metrika
