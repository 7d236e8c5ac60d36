#include "modlat/presentation.hpp"

#include <algorithm>
#include <set>

#include "modlat/error.hpp"

namespace modlat {

Presentation::Presentation(std::string id, std::vector<std::string> generators, std::vector<Relation> relations)
    : id_(std::move(id)), generators_(std::move(generators)), relations_(std::move(relations)) {
  std::set<std::string> seen;
  for (const auto& g : generators_)
    if (!seen.insert(g).second) throw Error("duplicate generator '" + g + "'");
  for (const auto& [l, r] : relations_) {
    check_term(l);
    check_term(r);
  }
  base_count_ = relations_.size();
}

void Presentation::check_term(const Term& t) const {
  for (const auto& s : symbols(t))
    if (!has_generator(s)) throw Error("symbol '" + s + "' is not a generator of " + id_);
}

bool Presentation::has_generator(const std::string& g) const {
  return std::find(generators_.begin(), generators_.end(), g) != generators_.end();
}

Term Presentation::gen(const std::string& g) const {
  if (!has_generator(g)) throw Error("'" + g + "' is not a generator of " + id_);
  return Term::constant(g);
}

std::vector<Relation> Presentation::base_relations() const {
  return {relations_.begin(), relations_.begin() + static_cast<std::ptrdiff_t>(base_count_)};
}

Presentation Presentation::with_id(std::string id) const {
  Presentation p = *this;
  p.id_ = std::move(id);
  return p;
}

Presentation Presentation::with_witnesses(std::vector<Term> w) const {
  if (w.size() != generators_.size()) throw Error("witness count differs from generator count");
  for (const auto& t : w) check_term(t);
  Presentation p = *this;
  p.witnesses_ = std::move(w);
  return p;
}

Presentation Presentation::with_relations(const std::vector<Relation>& extra) const {
  if (!log_.empty()) throw Error("base relations cannot be extended after strengthening");
  Presentation p = *this;
  for (const auto& [l, r] : extra) {
    check_term(l);
    check_term(r);
    p.relations_.emplace_back(l, r);
  }
  p.base_count_ = p.relations_.size();
  return p;
}

Presentation apply_strengthening(const Presentation& pi, std::vector<std::pair<std::string, Term>> assignments,
                                 std::vector<Relation> new_relations, std::string note) {
  for (const auto& [sym, t] : assignments) {
    if (!pi.has_generator(sym)) throw Error("strengthening assigns to unknown symbol '" + sym + "'");
    pi.check_term(t);
  }
  for (const auto& [l, r] : new_relations) {
    pi.check_term(l);
    pi.check_term(r);
  }
  Presentation out = pi;
  for (const auto& rel : new_relations) out.relations_.push_back(rel);
  out.log_.push_back(LogEntry{std::move(assignments), std::move(new_relations), std::move(note)});
  return out;
}

std::vector<Relation> replay(const std::vector<Relation>& base, const std::vector<LogEntry>& log) {
  std::vector<Relation> out = base;
  for (const auto& e : log)
    for (const auto& r : e.relations) out.push_back(r);
  return out;
}

Presentation product_presentation(const Presentation& p1, const Presentation& p2, const std::string& bottom) {
  if (!p1.has_generator(bottom) || !p2.has_generator(bottom))
    throw Error("both factors must contain the bottom symbol '" + bottom + "'");
  std::vector<std::string> gens = p1.generators();
  std::vector<Term> s1, s2;
  for (const auto& g : p1.generators())
    if (g != bottom) s1.push_back(Term::constant(g));
  for (const auto& g : p2.generators()) {
    if (g == bottom) continue;
    if (p1.has_generator(g)) throw Error("generator '" + g + "' occurs in both factors");
    gens.push_back(g);
    s2.push_back(Term::constant(g));
  }
  std::vector<Relation> rels = p1.relations();
  for (const auto& r : p2.relations()) rels.push_back(r);
  if (!s1.empty() && !s2.empty()) rels.emplace_back(sum(s1) * sum(s2), Term::constant(bottom));
  return Presentation(p1.id() + "x" + p2.id(), std::move(gens), std::move(rels));
}

Transformation Transformation::identity(const Presentation& p) {
  Transformation t{p.id(), p.id(), p.generators(), p.generators(), {}};
  for (const auto& g : p.generators()) t.terms.push_back(Term::constant(g));
  return t;
}

Term Transformation::apply(const Term& t) const {
  Substitution sigma;
  for (std::size_t j = 0; j < target_generators.size(); ++j) sigma.emplace(target_generators[j], terms.at(j));
  return substitute(t, sigma);
}

Transformation compose(const Transformation& f, const Transformation& g) {
  if (f.terms.size() != f.target_generators.size() || g.terms.size() != g.target_generators.size())
    throw Error("transformation term count differs from target generator count");
  if (f.target_generators.size() != g.source_generators.size())
    throw Error("arity mismatch: " + std::to_string(f.target_generators.size()) + " terms feed " +
                std::to_string(g.source_generators.size()) + " generators");
  if (f.target != g.source) throw Error("target '" + f.target + "' is not source '" + g.source + "'");
  Substitution sigma;
  for (std::size_t j = 0; j < g.source_generators.size(); ++j) sigma.emplace(g.source_generators[j], f.terms[j]);
  Transformation out{f.source, g.target, f.source_generators, g.target_generators, {}};
  for (const auto& v : g.terms) out.terms.push_back(substitute(v, sigma));
  return out;
}

namespace {

nlohmann::json rel_json(const Relation& r) { return nlohmann::json::array({r.first.str(), r.second.str()}); }

}  // namespace

nlohmann::json to_json(const Presentation& p) {
  nlohmann::json j;
  j["id"] = p.id();
  j["generators"] = p.generators();
  j["relations"] = nlohmann::json::array();
  for (const auto& r : p.base_relations()) j["relations"].push_back(rel_json(r));
  j["log"] = nlohmann::json::array();
  for (const auto& e : p.log()) {
    nlohmann::json entry;
    entry["assign"] = nlohmann::json::array();
    for (const auto& [s, t] : e.assignments) entry["assign"].push_back({s, t.str()});
    entry["relations"] = nlohmann::json::array();
    for (const auto& r : e.relations) entry["relations"].push_back(rel_json(r));
    if (!e.note.empty()) entry["note"] = e.note;
    j["log"].push_back(entry);
  }
  if (!p.witnesses().empty()) {
    j["witnesses"] = nlohmann::json::array();
    for (const auto& t : p.witnesses()) j["witnesses"].push_back(t.str());
  }
  return j;
}

Presentation presentation_from_json(const nlohmann::json& j) {
  std::vector<std::string> gens = j.at("generators").get<std::vector<std::string>>();
  ParseOptions opts;
  opts.constants = {gens.begin(), gens.end()};
  std::set<std::string> none;
  opts.variables = &none;
  auto term = [&](const nlohmann::json& s) { return parse_term(s.get<std::string>(), opts); };
  std::vector<Relation> rels;
  for (const auto& r : j.value("relations", nlohmann::json::array())) rels.emplace_back(term(r.at(0)), term(r.at(1)));
  Presentation p(j.value("id", std::string("P")), gens, rels);
  for (const auto& e : j.value("log", nlohmann::json::array())) {
    std::vector<std::pair<std::string, Term>> as;
    for (const auto& a : e.value("assign", nlohmann::json::array())) as.emplace_back(a.at(0).get<std::string>(), term(a.at(1)));
    std::vector<Relation> nr;
    for (const auto& r : e.value("relations", nlohmann::json::array())) nr.emplace_back(term(r.at(0)), term(r.at(1)));
    p = apply_strengthening(p, std::move(as), std::move(nr), e.value("note", std::string()));
  }
  if (j.contains("witnesses")) {
    std::vector<Term> w;
    for (const auto& s : j["witnesses"]) w.push_back(term(s));
    p = p.with_witnesses(std::move(w));
  }
  return p;
}

}  // namespace modlat
