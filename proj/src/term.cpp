#include "modlat/term.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <unordered_map>

#include "modlat/error.hpp"

namespace modlat {

std::size_t size_bound(std::size_t fallback) {
  if (const char* env = std::getenv("MODLAT_BOUND")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return fallback;
}

struct Term::Node {
  Kind kind;
  std::string name;
  std::vector<Term> children;
  std::size_t hash;
  std::size_t size;
};

namespace {

std::size_t fnv(const std::string& s, std::size_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

Term Term::raw(Kind kind, std::string name, std::vector<Term> children) {
  std::size_t h = fnv(name, 1469598103934665603ull ^ static_cast<std::size_t>(kind));
  std::size_t size = 1;
  for (const auto& c : children) {
    if (c.null()) throw Error("null child term");
    h = mix(h, c.hash());
    size += c.size();
  }
  auto n = std::make_shared<Node>(Node{kind, std::move(name), std::move(children), h, size});
  return Term(std::move(n));
}

Term Term::var(std::string name) { return raw(Kind::Var, std::move(name), {}); }
Term Term::constant(std::string name) { return raw(Kind::Const, std::move(name), {}); }

namespace {

Term assoc(Kind kind, std::vector<Term> children) {
  if (children.empty()) throw Error("empty join/meet");
  std::vector<Term> flat;
  flat.reserve(children.size());
  for (auto& c : children) {
    if (c.null()) throw Error("null child term");
    if (c.kind() == kind) {
      for (const auto& g : c.children()) flat.push_back(g);
    } else {
      flat.push_back(std::move(c));
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.size() == 1) return flat.front();
  return Term::raw(kind, "", std::move(flat));
}

}  // namespace

Term Term::join(std::vector<Term> children) { return assoc(Kind::Join, std::move(children)); }
Term Term::meet(std::vector<Term> children) { return assoc(Kind::Meet, std::move(children)); }
Term Term::opaque(std::string name, std::vector<Term> args) {
  return raw(Kind::Opaque, std::move(name), std::move(args));
}

Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const std::vector<Term>& Term::children() const { return node_->children; }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }
std::size_t Term::size() const { return node_ ? node_->size : 0; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size) return false;
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.name().compare(b.name()); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  const auto& x = a.children();
  const auto& y = b.children();
  return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
}

Term operator+(const Term& a, const Term& b) { return Term::join({a, b}); }
Term operator*(const Term& a, const Term& b) { return Term::meet({a, b}); }
Term sum(const std::vector<Term>& ts) { return Term::join(ts); }
Term prod(const std::vector<Term>& ts) { return Term::meet(ts); }

namespace {

void render(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Kind::Var:
    case Kind::Const:
      out += t.name();
      return;
    case Kind::Join: {
      bool first = true;
      for (const auto& c : t.children()) {
        if (!first) out += " + ";
        first = false;
        render(c, out);
      }
      return;
    }
    case Kind::Meet: {
      bool first = true;
      for (const auto& c : t.children()) {
        if (!first) out += "*";
        first = false;
        if (c.kind() == Kind::Join) {
          out += "(";
          render(c, out);
          out += ")";
        } else {
          render(c, out);
        }
      }
      return;
    }
    case Kind::Opaque: {
      out += "?" + t.name() + "(";
      bool first = true;
      for (const auto& c : t.children()) {
        if (!first) out += ", ";
        first = false;
        render(c, out);
      }
      out += ")";
      return;
    }
  }
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'';
}

class Parser {
 public:
  Parser(const std::string& s, const ParseOptions& o) : s_(s), o_(o) {}

  Term run() {
    Term t = term();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) { throw ParseError("syntax error: " + what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Term term() {
    std::vector<Term> parts{product()};
    for (;;) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == '+') {
        ++pos_;
        parts.push_back(product());
      } else {
        break;
      }
    }
    return Term::join(std::move(parts));
  }

  Term product() {
    std::vector<Term> parts{atom()};
    for (;;) {
      skip();
      if (pos_ >= s_.size()) break;
      char c = s_[pos_];
      if (c == '*') {
        ++pos_;
        parts.push_back(atom());
      } else if (ident_start(c) || c == '(' || c == '?') {
        parts.push_back(atom());
      } else {
        break;
      }
    }
    return Term::meet(std::move(parts));
  }

  std::string ident() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (!ident_start(s_[pos_])) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  void expect(char c) {
    skip();
    if (pos_ >= s_.size()) fail(std::string("expected '") + c + "' before end of input");
    if (s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Term atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Term t = term();
      expect(')');
      return t;
    }
    if (c == '?') {
      ++pos_;
      std::string name = ident();
      expect('(');
      std::vector<Term> args{term()};
      for (;;) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
          args.push_back(term());
        } else {
          break;
        }
      }
      expect(')');
      return Term::opaque(std::move(name), std::move(args));
    }
    std::size_t start = pos_;
    std::string name = ident();
    if (o_.constants.count(name)) return Term::constant(std::move(name));
    if (o_.variables && !o_.variables->count(name)) {
      pos_ = start;
      throw ParseError("unknown symbol '" + name + "'", start);
    }
    return Term::var(std::move(name));
  }

  const std::string& s_;
  const ParseOptions& o_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Term::str() const {
  if (!node_) return "<null>";
  std::string out;
  render(*this, out);
  return out;
}

Term parse_term(const std::string& text, const ParseOptions& opts) { return Parser(text, opts).run(); }

Term parse_const_term(const std::string& text) {
  // Every identifier is a constant: parse once as variables, then retag.
  Term t = parse_term(text);
  Substitution sigma;
  for (const auto& s : symbols(t)) sigma.emplace(s, Term::constant(s));
  return substitute(t, sigma);
}

namespace {

template <class F>
Term rebuild(const Term& t, F&& leaf, std::unordered_map<const void*, Term>& memo) {
  if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
  Term out;
  switch (t.kind()) {
    case Kind::Var:
    case Kind::Const:
      out = leaf(t);
      break;
    case Kind::Join:
    case Kind::Meet:
    case Kind::Opaque: {
      std::vector<Term> cs;
      cs.reserve(t.children().size());
      for (const auto& c : t.children()) cs.push_back(rebuild(c, leaf, memo));
      if (t.kind() == Kind::Join) out = Term::join(std::move(cs));
      else if (t.kind() == Kind::Meet) out = Term::meet(std::move(cs));
      else out = Term::opaque(t.name(), std::move(cs));
      break;
    }
  }
  memo.emplace(t.id(), out);
  return out;
}

void collect(const Term& t, std::set<std::string>& out, std::set<const void*>& seen) {
  if (!seen.insert(t.id()).second) return;
  if (t.kind() == Kind::Var || t.kind() == Kind::Const) {
    out.insert(t.name());
    return;
  }
  for (const auto& c : t.children()) collect(c, out, seen);
}

}  // namespace

Term normalize(const Term& t) {
  std::unordered_map<const void*, Term> memo;
  return rebuild(t, [](const Term& x) { return x; }, memo);
}

std::set<std::string> symbols(const Term& t) {
  std::set<std::string> out;
  std::set<const void*> seen;
  collect(t, out, seen);
  return out;
}

Term substitute(const Term& t, const Substitution& sigma, bool partial) {
  std::unordered_map<const void*, Term> memo;
  return rebuild(
      t,
      [&](const Term& x) {
        auto it = sigma.find(x.name());
        if (it != sigma.end()) return it->second;
        if (partial) return x;
        throw Error("unmapped symbol '" + x.name() + "'");
      },
      memo);
}

}  // namespace modlat
