#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace modlat {

enum class Kind : std::uint8_t { Var = 0, Const = 1, Join = 2, Meet = 3, Opaque = 4 };

// A term over two commutative idempotent binary operations. Terms built
// through the factories are always in normal form: join/meet nodes are
// flattened, their children sorted and deduplicated, and every such node has
// at least two children. Opaque nodes are named placeholders whose arguments
// keep their order.
class Term {
 public:
  Term() = default;

  static Term var(std::string name);
  static Term constant(std::string name);
  static Term join(std::vector<Term> children);
  static Term meet(std::vector<Term> children);
  static Term opaque(std::string name, std::vector<Term> args);
  // Builds a node exactly as given, without normalizing. Used to feed
  // normalize() and by tests.
  static Term raw(Kind kind, std::string name, std::vector<Term> children);

  bool null() const { return !node_; }
  Kind kind() const;
  const std::string& name() const;
  const std::vector<Term>& children() const;
  std::size_t hash() const;
  // Number of nodes in the tree (shared subtrees counted each time).
  std::size_t size() const;
  const void* id() const { return node_.get(); }

  std::string str() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Term operator+(const Term& a, const Term& b);
Term operator*(const Term& a, const Term& b);
// Join/meet of a nonempty list.
Term sum(const std::vector<Term>& ts);
Term prod(const std::vector<Term>& ts);

struct ParseOptions {
  // Identifiers in this set become constants; the rest become variables.
  std::set<std::string> constants;
  // When set, identifiers outside constants ∪ variables are rejected.
  const std::set<std::string>* variables = nullptr;
};

// Grammar: term := sum; sum := prod ('+' prod)*; prod := atom ('*' atom | atom)*;
// atom := IDENT | '(' term ')' | '?' IDENT '(' term (',' term)* ')'.
// The last form denotes an opaque node.
Term parse_term(const std::string& text, const ParseOptions& opts = {});
// Parses with every identifier read as a constant.
Term parse_const_term(const std::string& text);

Term normalize(const Term& t);

// Symbols (variables and constants) occurring in t.
std::set<std::string> symbols(const Term& t);

using Substitution = std::map<std::string, Term>;
// Replaces every variable/constant by its image and renormalizes. Throws on
// unmapped symbols unless partial is set, in which case they are kept.
Term substitute(const Term& t, const Substitution& sigma, bool partial = false);

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

}  // namespace modlat
