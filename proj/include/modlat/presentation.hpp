#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modlat/term.hpp"

#include <json.hpp>

namespace modlat {

using Relation = std::pair<Term, Term>;

// One strengthening step: simultaneous assignments c := u(c̄) over the
// generators as they were before the step, plus the relations it adds.
struct LogEntry {
  std::vector<std::pair<std::string, Term>> assignments;
  std::vector<Relation> relations;
  std::string note;
};

// Immutable presentation value. Relations and witnesses are constant terms
// over the generator symbols.
class Presentation {
 public:
  Presentation() = default;
  Presentation(std::string id, std::vector<std::string> generators, std::vector<Relation> relations);

  const std::string& id() const { return id_; }
  const std::vector<std::string>& generators() const { return generators_; }
  const std::vector<Relation>& relations() const { return relations_; }
  const std::vector<LogEntry>& log() const { return log_; }
  // Relations present before any strengthening was applied.
  std::vector<Relation> base_relations() const;
  const std::vector<Term>& witnesses() const { return witnesses_; }
  bool has_generator(const std::string& g) const;
  Term gen(const std::string& g) const;

  Presentation with_id(std::string id) const;
  Presentation with_witnesses(std::vector<Term> w) const;
  Presentation with_relations(const std::vector<Relation>& extra) const;

  friend Presentation apply_strengthening(const Presentation&, std::vector<std::pair<std::string, Term>>,
                                          std::vector<Relation>, std::string);

 private:
  void check_term(const Term& t) const;

  std::string id_;
  std::vector<std::string> generators_;
  std::vector<Relation> relations_;
  std::size_t base_count_ = 0;
  std::vector<LogEntry> log_;
  std::vector<Term> witnesses_;
};

Presentation apply_strengthening(const Presentation& pi, std::vector<std::pair<std::string, Term>> assignments,
                                 std::vector<Relation> new_relations, std::string note = "");

// Rebuilds the relation list from base relations and a log.
std::vector<Relation> replay(const std::vector<Relation>& base, const std::vector<LogEntry>& log);

// Generators c¹ ∪ c² sharing `bottom`, plus (Σc¹)(Σc²) = bottom.
Presentation product_presentation(const Presentation& p1, const Presentation& p2, const std::string& bottom);

// Terms u_j over the source generators, one per target generator.
struct Transformation {
  std::string source;
  std::string target;
  std::vector<std::string> source_generators;
  std::vector<std::string> target_generators;
  std::vector<Term> terms;

  static Transformation identity(const Presentation& p);
  // Images of the given terms (over target generators) under the map.
  Term apply(const Term& t) const;
};

// f: A -> B then g: B -> C, giving terms v_k(u_1(x̄), ..., u_m(x̄)).
Transformation compose(const Transformation& f, const Transformation& g);

nlohmann::json to_json(const Presentation& p);
Presentation presentation_from_json(const nlohmann::json& j);

}  // namespace modlat
