// Batch front end: every subcommand prints one JSON report and exits 0 iff
// all verdicts pass.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "modlat/acceptance.hpp"
#include "modlat/coords.hpp"
#include "modlat/glueing.hpp"
#include "modlat/models.hpp"
#include "modlat/reducer.hpp"
#include "modlat/tower_presentation.hpp"

using namespace modlat;
using nlohmann::json;

namespace {

struct Global {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

class Report {
 public:
  Report(std::string command, const Global& g) : g_(g), t0_(std::chrono::steady_clock::now()) {
    j_["command"] = std::move(command);
    j_["seed"] = g.seed;
    j_["jobs"] = g.jobs;
    j_["inputs"] = json::object();
    j_["verdicts"] = json::array();
  }
  void input(const std::string& k, const json& v) {
    j_["inputs"][k] = v;
    digest_ += k + "=" + v.dump() + ";";
  }
  void input_file(const std::string& k, const std::string& path, const std::string& contents) {
    input(k, path);
    digest_ += fnv1a(contents) + ";";
  }
  void verdict(const std::string& name, bool pass, json witness = nullptr, const std::string& detail = "") {
    json v{{"check", name}, {"pass", pass}};
    if (!witness.is_null()) v["witness"] = std::move(witness);
    if (!detail.empty()) v["detail"] = detail;
    j_["verdicts"].push_back(std::move(v));
    all_ = all_ && pass;
  }
  json& data() { return j_["data"]; }
  void error(const std::string& what) {
    j_["error"] = what;
    all_ = false;
  }

  int finish() {
    if (j_["verdicts"].empty() && !j_.contains("error")) all_ = false;
    j_["inputs_digest"] = fnv1a(digest_);
    j_["pass"] = all_;
    j_["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
    const std::string text = j_.dump(2) + "\n";
    if (g_.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(g_.out);
      if (!f) {
        std::cerr << "cannot write '" << g_.out << "'\n";
        return 2;
      }
      f << text;
    }
    return all_ ? 0 : 1;
  }

 private:
  const Global& g_;
  std::chrono::steady_clock::time_point t0_;
  json j_;
  std::string digest_;
  bool all_ = true;
};

void write_artifact(const std::string& dir, const std::string& name, const json& j, Report& R) {
  const std::string base = dir.empty() ? std::string(".") : dir;
  std::error_code ec;
  std::filesystem::create_directories(base, ec);
  const std::string path = base + "/" + name;
  std::ofstream f(path);
  if (!f) throw Error("cannot write artifact '" + path + "'");
  f << j.dump(2) << "\n";
  R.data()["artifacts"].push_back(path);
}

// "C<m>", "S3" or "trivial".
Group parse_group(const std::string& s) {
  if (s == "trivial" || s == "1") return Group::trivial();
  if (s == "S3") return Group::symmetric3();
  if (s.size() > 1 && s[0] == 'C') return Group::cyclic(std::stoul(s.substr(1)));
  throw Error("unknown group '" + s + "' (use C<m>, S3 or trivial)");
}

// "F<p>", "Z<p^k>", optionally followed by "[<group>]".
FiniteRing parse_ring(const std::string& s) {
  std::string base = s, grp = "trivial";
  if (auto b = s.find('['); b != std::string::npos) {
    if (s.back() != ']') throw Error("malformed ring '" + s + "'");
    base = s.substr(0, b);
    grp = s.substr(b + 1, s.size() - b - 2);
  }
  if (base.size() < 2 || (base[0] != 'F' && base[0] != 'Z')) throw Error("malformed ring '" + s + "'");
  std::uint64_t q = std::stoull(base.substr(1));
  if (q < 2) throw Error("ring order must be at least 2");
  std::uint32_t p = 2;
  while (q % p) ++p;
  unsigned k = 0;
  for (std::uint64_t r = q; r > 1; r /= p, ++k)
    if (r % p) throw Error("ring order must be a prime power");
  if (base[0] == 'F' && k != 1) throw Error("F<q> needs q prime; use Z<q> for Z/p^k");
  return FiniteRing(p, k, parse_group(grp));
}

std::vector<unsigned> parse_shape(const std::string& s) {
  std::vector<unsigned> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(unsigned(std::stoul(tok)));
  if (out.empty()) throw Error("empty shape");
  return out;
}

std::vector<std::uint32_t> parse_images(const std::string& s) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::uint32_t(std::stoul(tok)));
  return out;
}

// ---- check-identity ----

int cmd_check_identity(const Global& g, const std::string& file, const std::string& identity) {
  Report R("check-identity", g);
  try {
    const std::string text = read_file(file);
    R.input_file("lattice", file, text);
    R.input("identity", identity);
    FiniteLattice L = lattice_from_json(json::parse(text));
    auto eq = identity.find('=');
    if (eq == std::string::npos || identity.find('=', eq + 1) != std::string::npos)
      throw ParseError("identity needs exactly one '='", identity.size());
    Term s = parse_term(identity.substr(0, eq)), t;
    try {
      t = parse_term(identity.substr(eq + 1));
    } catch (const ParseError& e) {
      throw ParseError(std::string("right-hand side: ") + e.what(), eq + 1 + e.offset());
    }
    std::set<std::string> vs = symbols(s), vt = symbols(t);
    vs.insert(vt.begin(), vt.end());
    std::vector<std::string> vars(vs.begin(), vs.end());
    auto res = holds_identity(L, s, t, vars, SearchOptions{g.jobs});
    json w = nullptr;
    if (!res.holds) {
      w = json::object();
      for (std::size_t i = 0; i < vars.size(); ++i) w[vars[i]] = L.label(res.counterexample[i]);
    }
    R.data()["lattice_size"] = L.size();
    R.data()["assignments_checked"] = res.assignments_checked;
    R.verdict("identity holds", res.holds, w);
  } catch (const std::exception& e) {
    R.error(e.what());
  }
  return R.finish();
}

// ---- build ----

struct BuildArgs {
  std::string kind;
  int n = 4;
  std::string ring = "F2";
  std::uint32_t p = 2;
  std::string shape = "2,2,1";
  std::string group = "C2";
  std::string presentation;
  std::string images;
  std::string artifact_dir = ".";
  bool emit = false;
};

void build_frame(const BuildArgs& a, Report& R, const Global& g) {
  FiniteRing ring = parse_ring(a.ring);
  R.input("ring", a.ring);
  R.input("n", a.n);
  FrameModel F = canonical_frame_model(ring, std::size_t(a.n));
  const FiniteModule& M = *F.module;
  auto rel = check_frame_relations(M, F.frame);
  R.verdict("frame relations", !rel, nullptr, rel.value_or(""));
  auto der = check_derived(M, F.frame);
  R.verdict("derived identities", !der, nullptr, der.value_or(""));
  if (a.n >= 4 && ring.size() <= 256) {
    auto iso = graph_map_check(ring, SearchOptions{g.jobs});
    R.verdict("graph map is a ring isomorphism", !iso, nullptr, iso.value_or(""));
  }
  json f;
  f["bot"] = M.to_json(F.frame.bot);
  for (int i = 1; i <= F.frame.n; ++i) f["a" + std::to_string(i)] = M.to_json(F.frame.ai(i));
  for (int j = 2; j <= F.frame.n; ++j) f["c1" + std::to_string(j)] = M.to_json(F.frame.cij(1, j));
  R.data()["frame"] = f;
}


void build_tower(const BuildArgs& a, Report& R, const Global& g) {
  R.input("n", a.n);
  R.input("p", a.p);
  TowerModel T = tower_canonical_model(a.n, a.p);
  const FiniteModule& M = *T.module;
  auto f = check_tower(M, T.tower);
  R.verdict("skew frames and transposition chains", !f, nullptr, f.value_or(""));
  auto O = tower_presentation(TowerKind::Omega, a.n);
  R.verdict("economy has n+6 generators", O.economy.size() == std::size_t(a.n + 6));
  auto A = tower_assignment(T);
  HandleIndex<Submodule> seeds(M);
  for (const auto& e : O.economy) seeds.insert(A.at(e));
  auto G = generated_sublattice(M, seeds.items(), size_bound(kDefaultLatticeCap), SearchOptions{g.jobs});
  HandleIndex<Submodule> in(M);
  for (const auto& h : G.handles) in.insert(h);
  json missing = json::array();
  for (const auto& x : tower_elements(T.tower))
    if (!in.find(x)) missing.push_back(M.label(x));
  R.verdict("economy generates every tower element", missing.empty(), missing.empty() ? json(nullptr) : missing);
  R.data()["generated_size"] = G.lattice.size();
  R.data()["tower"] = tower_to_json(M, T.tower);
}

void build_la(const BuildArgs& a, Report& R, const Global& g) {
  R.input("p", a.p);
  R.input("shape", a.shape);
  LAModel M = build_LA(a.p, parse_shape(a.shape), SearchOptions{g.jobs});
  LAReport rep = check_LA(M, SearchOptions{g.jobs});
  R.verdict("decomposition sigma(pC) <= C <= pi(pC)", rep.decomposition, nullptr, rep.failure);
  R.verdict("blocks are subspace lattices", rep.intervals_subspace);
  R.verdict("glued sum of the blocks is L(A)", rep.glue_matches);
  R.verdict("modular", rep.modular);
  R.verdict("simple", rep.simple);
  R.data()["subgroups"] = M.lattice.size();
  R.data()["skeleton"] = M.skeleton.size();
}

void build_lg(const BuildArgs& a, Report& R, const Global& g) {
  R.input("group", a.group);
  R.input("p", a.p);
  R.input("shape", a.shape);
  auto shape = parse_shape(a.shape);
  LGModel M(parse_group(a.group), a.p, shape);
  auto emb = M.check_embeddings(SearchOptions{g.jobs});
  R.verdict("X -> QX and sigma', pi' are lattice embeddings", !emb, nullptr, emb.value_or(""));
  R.data()["skeleton"] = M.skeleton().size();
  if (shape.size() == 4 && shape[0] == 2 && shape[2] == 2 && shape[3] == 1) {
    auto S = M.psi0();
    LGOracle O(M);
    auto f = check_skew_frame<Submodule>(O, S);
    R.verdict("Psi0 is a skew (4,3)-frame in L(G)", !f, nullptr, f.value_or(""));
    bool inside = true;
    for (const auto& x : frame_elements(S.outer)) inside = inside && M.contains(x);
    for (const auto& x : frame_elements(S.inner)) inside = inside && M.contains(x);
    R.verdict("Psi0 lies in L(G)", inside);
  }
}

std::vector<std::uint32_t> default_images(const GroupPresentation& P, const Group& G) {
  // First assignment sending every generator to a non-identity element that
  // satisfies the relators, else all identities.
  const std::size_t n = P.generators.size();
  std::vector<std::uint32_t> h(n, 0);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= G.order();
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    bool nontrivial = true;
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = std::uint32_t(c % G.order());
      c /= G.order();
      nontrivial = nontrivial && h[i] != G.identity();
    }
    if (!nontrivial) continue;
    bool ok = true;
    for (const auto& r : P.relators) ok = ok && eval_word(G, r, h) == G.identity();
    if (ok) return h;
  }
  return std::vector<std::uint32_t>(n, G.identity());
}

void build_lambda(const BuildArgs& a, Report& R, const Global&) {
  if (a.presentation.empty()) throw Error("lambda-model needs --presentation");
  const std::string text = read_file(a.presentation);
  R.input_file("presentation", a.presentation, text);
  R.input("group", a.group);
  R.input("p", a.p);
  GroupPresentation P = group_presentation_from_json(json::parse(text));
  Group G = parse_group(a.group);
  auto h = a.images.empty() ? default_images(P, G) : parse_images(a.images);
  R.input("images", h);
  LambdaModel L = canonical_lambda_model(P, G, h, a.p);
  Presentation lam = lambda_presentation(P);
  auto f = satisfies_presentation(*L.module, lam, L.assignment);
  R.verdict("lambda presentation satisfied", !f, nullptr, f ? f->relation : "");
  for (const auto& r : P.relators)
    R.verdict("relator " + P.word_str(r) + " evaluates to c13", L.eval_word_term(P, r) == L.frame.cij(1, 3));
  R.data()["model"] = L.name;
  R.data()["relations"] = lam.relations().size();
}

int cmd_build(const Global& g, const BuildArgs& a) {
  Report R("build " + a.kind, g);
  try {
    if (a.kind == "frame") build_frame(a, R, g);
    else if (a.kind == "tower") build_tower(a, R, g);
    else if (a.kind == "LA") build_la(a, R, g);
    else if (a.kind == "LG") build_lg(a, R, g);
    else if (a.kind == "lambda-model") build_lambda(a, R, g);
    else throw Error("unknown model kind '" + a.kind + "'");
    if (a.emit) write_artifact(a.artifact_dir, "build_" + a.kind + ".json", R.data(), R);
  } catch (const std::exception& e) {
    R.error(e.what());
  }
  return R.finish();
}

// ---- reduce ----

struct ReduceArgs {
  std::string presentation;
  std::vector<std::string> check_words;
  std::string groups = "C2,C3,S3";
  std::uint32_t p = 2;
  std::string pack;
  std::string beta_word;
  bool emit_lambda = false, emit_plan = false, emit_beta = false;
  std::string artifact_dir = ".";
};

int cmd_reduce(const Global& g, const ReduceArgs& a) {
  Report R("reduce", g);
  try {
    const std::string text = read_file(a.presentation);
    R.input_file("presentation", a.presentation, text);
    R.input("check_words", a.check_words);
    R.input("groups", a.groups);
    R.input("p", a.p);
    GroupPresentation P = group_presentation_from_json(json::parse(text));
    TermPack pack;
    if (!a.pack.empty()) {
      const std::string pt = read_file(a.pack);
      R.input_file("pack", a.pack, pt);
      pack = term_pack_from_json(json::parse(pt));
    }
    Presentation lam = lambda_presentation(P);
    R.data()["lambda_relations"] = lam.relations().size();
    if (a.emit_lambda) write_artifact(a.artifact_dir, "lambda.json", to_json(lam), R);

    ReductionPlan plan = build_plan(P, pack);
    R.verdict("plan has n + h stages", int(plan.stages.size()) == plan.n + plan.h);
    R.data()["stages"] = plan.stages.size();
    R.data()["deferred"] = plan.deferred;
    if (a.emit_plan) write_artifact(a.artifact_dir, "plan.json", to_json(plan), R);

    if (a.emit_beta) {
      Word w = a.beta_word.empty() ? Word{{0, 1}} : parse_word(a.beta_word, P.generators);
      BetaStar B = compile_beta_star(word_problem_instance(P, w), pack, int(P.generators.size()));
      json j = B.dag;
      j["deferred"] = B.deferred;
      j["generators"] = B.generators;
      R.verdict("beta* has n+6 variables", B.variables.size() == P.generators.size() + 6);
      R.data()["beta_star_deferred"] = B.deferred;
      write_artifact(a.artifact_dir, "beta_star.json", j, R);
    }

    if (!a.check_words.empty()) {
      std::vector<LambdaModel> models;
      std::stringstream ss(a.groups);
      std::string name;
      while (std::getline(ss, name, ',')) {
        if (name.empty()) continue;
        Group G = parse_group(name);
        const std::size_t n = P.generators.size();
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= G.order();
        if (total > 4096) throw BoundExceeded("too many generator assignments for " + name, total);
        std::vector<std::uint32_t> h(n);
        for (std::uint64_t code = 0; code < total; ++code) {
          std::uint64_t c = code;
          for (std::size_t i = 0; i < n; ++i) {
            h[i] = std::uint32_t(c % G.order());
            c /= G.order();
          }
          bool ok = true;
          for (const auto& r : P.relators) ok = ok && eval_word(G, r, h) == G.identity();
          if (ok) {
            models.push_back(canonical_lambda_model(P, G, h, a.p));
            models.back().name = name + ": " + models.back().name;
          }
        }
      }
      std::vector<ModelRef<Submodule>> refs;
      for (const auto& m : models) refs.push_back(model_ref(m));
      R.data()["models"] = models.size();
      json results = json::array();
      for (const auto& w : a.check_words) {
        Relation rho{lambda_word_term(P, parse_word(w, P.generators)), Term::constant("c13")};
        auto res = search_consequence<Submodule>(lam, rho, refs, SearchOptions{g.jobs});
        json r{{"word", w},
               {"result", res.consistent ? "consistent" : "refuted"},
               {"models_checked", res.models_checked},
               {"warnings", res.warnings}};
        if (!res.consistent) r["refuting_model"] = res.refuting_name;
        results.push_back(r);
        R.verdict("search for word '" + w + "' completed", res.models_checked > 0,
                  res.consistent ? json(nullptr) : json(res.refuting_name));
      }
      R.data()["check_words"] = results;
    }
  } catch (const std::exception& e) {
    R.error(e.what());
  }
  return R.finish();
}

// ---- verify ----

std::vector<std::string> suite_ids(const std::string& suite) {
  static const std::map<std::string, std::vector<std::string>> named{
      {"lattice", {"A1"}},
      {"frames", {"A2", "A5", "A7", "A8"}},
      {"coordinates", {"A3", "A4", "A6"}},
      {"glueing", {"A9"}},
      {"reducer", {"A10", "A11"}}};
  if (suite == "all") return criterion_ids();
  if (auto it = named.find(suite); it != named.end()) return it->second;
  for (const auto& id : criterion_ids())
    if (id == suite) return {id};
  throw Error("unknown suite '" + suite + "' (all, lattice, frames, coordinates, glueing, reducer, A1..A11)");
}

int cmd_verify(const Global& g, const std::string& suite) {
  Report R("verify", g);
  try {
    R.input("suite", suite);
    SuiteOptions o;
    o.seed = g.seed;
    o.search.jobs = g.jobs;
    json crit = json::array();
    for (const auto& id : suite_ids(suite)) {
      CriterionResult c = run_criterion(id, o);
      std::string failed;
      for (const auto& d : c.details)
        if (d.rfind("FAILED", 0) == 0) failed += (failed.empty() ? "" : "; ") + d;
      R.verdict(summary_line(c), c.pass(), nullptr, failed);
      crit.push_back(to_json(c));
    }
    R.data()["criteria"] = crit;
  } catch (const std::exception& e) {
    R.error(e.what());
  }
  return R.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modlat: finite modular lattice toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "seed for sampled checks")->default_val(0);
  app.add_option("--jobs", g.jobs, "worker threads for exhaustive searches")->default_val(1)->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "write the report here instead of stdout");

  std::string lattice_file, identity;
  auto* ci = app.add_subcommand("check-identity", "exhaustively check an identity in a finite lattice");
  ci->add_option("lattice", lattice_file, "lattice JSON {n, leq, labels}")->required();
  ci->add_option("identity", identity, "e.g. \"x(y + x z) = x y + x z\"")->required();

  BuildArgs b;
  auto* bd = app.add_subcommand("build", "build a model and run its invariant suite");
  bd->add_option("kind", b.kind, "frame | tower | LA | LG | lambda-model")
      ->required()
      ->check(CLI::IsMember({"frame", "tower", "LA", "LG", "lambda-model"}));
  bd->add_option("--n", b.n, "frame axes, or tower height")->default_val(4);
  bd->add_option("--ring", b.ring, "F<p>, Z<p^k>, optionally [C<m>|S3]")->default_val("F2");
  bd->add_option("--p", b.p, "prime")->default_val(2);
  bd->add_option("--shape", b.shape, "exponents k_1,...,k_r of Z/p^k_1 + ... + Z/p^k_r")->default_val("2,2,1");
  bd->add_option("--group", b.group, "C<m>, S3 or trivial")->default_val("C2");
  bd->add_option("--presentation", b.presentation, "group presentation JSON (lambda-model)");
  bd->add_option("--images", b.images, "generator images as group element indices, comma separated");
  bd->add_flag("--emit", b.emit, "write the model data as an artifact");
  bd->add_option("--artifact-dir", b.artifact_dir, "directory for artifacts")->default_val(".");

  ReduceArgs r;
  auto* rd = app.add_subcommand("reduce", "compile a group presentation and search lambda models");
  rd->add_option("presentation", r.presentation, "{generators: [...], relators: [\"g g\", ...]}")->required();
  rd->add_option("--check-word", r.check_words, "word to test against the constructed models")->allow_extra_args(false);
  rd->add_option("--groups", r.groups, "model groups, comma separated")->default_val("C2,C3,S3");
  rd->add_option("--p", r.p, "prime of the model field")->default_val(2);
  rd->add_option("--pack", r.pack, "term pack JSON {slot: {params, body}}");
  rd->add_option("--beta-word", r.beta_word, "conclusion word w = 1 for beta* (default: first generator)");
  rd->add_flag("--emit-lambda", r.emit_lambda, "write lambda.json");
  rd->add_flag("--emit-plan", r.emit_plan, "write plan.json");
  rd->add_flag("--emit-beta-star", r.emit_beta, "write beta_star.json");
  rd->add_option("--artifact-dir", r.artifact_dir, "directory for artifacts")->default_val(".");

  std::string suite;
  auto* vf = app.add_subcommand("verify", "run a named acceptance suite");
  vf->add_option("suite", suite, "all | lattice | frames | coordinates | glueing | reducer | A1..A11")
      ->default_val("all");

  CLI11_PARSE(app, argc, argv);
  if (*ci) return cmd_check_identity(g, lattice_file, identity);
  if (*bd) return cmd_build(g, b);
  if (*rd) return cmd_reduce(g, r);
  if (*vf) return cmd_verify(g, suite);
  return 2;
}
