#include <doctest.h>

#include <set>

#include "modlat/error.hpp"
#include "modlat/glueing.hpp"
#include "modlat/module.hpp"

using namespace modlat;

namespace {

// Every subgroup of a group of rank at most two, as the span of a pair of
// elements, collected without all_submodules.
std::size_t count_rank2_spans(const FiniteModule& M) {
  auto els = M.all_elements();
  std::vector<Submodule> seen;
  for (const auto& u : els)
    for (const auto& v : els) {
      Submodule S = M.submodule({u, v});
      bool dup = false;
      for (const auto& t : seen) dup = dup || t == S;
      if (!dup) seen.push_back(S);
    }
  return seen.size();
}

std::set<FiniteModule::Vec> element_set(const FiniteModule& M, const Submodule& X) {
  auto e = M.elements(X);
  return {e.begin(), e.end()};
}

}  // namespace

TEST_CASE("subgroup counts") {
  CHECK(abelian_group(2, {1, 1, 1})->all_submodules().size() == 16);
  CHECK(abelian_group(2, {2, 2})->all_submodules().size() == 15);
  CHECK(abelian_group(2, {2, 1})->all_submodules().size() == 8);
  CHECK(abelian_group(3, {1, 1})->all_submodules().size() == 6);
  CHECK(abelian_group(2, {3})->all_submodules().size() == 4);
}

TEST_CASE("all_submodules matches spans of pairs") {
  for (auto shape : std::vector<std::vector<unsigned>>{{2, 2}, {2, 1}, {3, 1}, {1, 1}}) {
    auto M = abelian_group(2, shape);
    CHECK(M->all_submodules().size() == count_rank2_spans(*M));
  }
  auto M3 = abelian_group(3, {2, 1});
  CHECK(M3->all_submodules().size() == count_rank2_spans(*M3));
}

TEST_CASE("normal form is canonical") {
  auto M = abelian_group(2, {2, 2});
  auto e1 = M->e(0), e2 = M->e(1);
  Submodule a = M->submodule({e1, e2});
  Submodule b = M->submodule({M->add(e1, e2), e2, M->scale(2, e1)});
  CHECK(a == b);
  CHECK(a == M->full());
  CHECK(a.hash() == b.hash());
  CHECK(M->submodule({M->scale(4, e1)}) == M->zero());
  CHECK(M->submodule({M->scale(3, e1)}) == M->cyclic(e1));
}

TEST_CASE("sum and intersection agree with element sets") {
  auto M = abelian_group(2, {2, 1});
  auto subs = M->all_submodules();
  for (const auto& X : subs)
    for (const auto& Y : subs) {
      auto ex = element_set(*M, X), ey = element_set(*M, Y);
      std::set<FiniteModule::Vec> meet;
      for (const auto& v : ex)
        if (ey.count(v)) meet.insert(v);
      CHECK(element_set(*M, M->intersect(X, Y)) == meet);
      CHECK(M->size(M->sum(X, Y)) * meet.size() == ex.size() * ey.size());
      CHECK(M->leq(X, Y) == (M->sum(X, Y) == Y));
      for (const auto& v : ex) CHECK(M->contains(X, v));
    }
}

TEST_CASE("module lattices are modular") {
  for (auto shape : std::vector<std::vector<unsigned>>{{2, 2}, {2, 1, 1}, {1, 1, 1}}) {
    auto M = abelian_group(2, shape);
    FiniteLattice L = submodule_lattice(*M, M->all_submodules());
    CHECK(!is_modular(L));
    CHECK(!check_lattice_axioms(L));
  }
}

TEST_CASE("group ring modules") {
  FiniteRing R(2, 1, Group::cyclic(2));
  CHECK(R.size() == 4);
  FiniteModule M(R, 1);
  // F2[C2] is local with the augmentation ideal as unique proper nonzero ideal.
  CHECK(M.all_submodules().size() == 3);
  FiniteRing S(3, 1, Group::symmetric3());
  CHECK(S.size() == 729);
  auto g = S.basis(1);
  CHECK(S.mul(S.one(), g) == g);
  CHECK(S.is_unit(g));
  CHECK(!S.is_unit(S.zero()));
}

TEST_CASE("ring arithmetic") {
  FiniteRing Z8(2, 3, Group::trivial());
  CHECK(Z8.modulus() == 8);
  CHECK(Z8.add(Z8.scalar(5), Z8.scalar(6)) == Z8.scalar(3));
  CHECK(Z8.mul(Z8.scalar(3), Z8.scalar(3)) == Z8.scalar(1));
  CHECK(Z8.neg(Z8.scalar(1)) == Z8.scalar(7));
  CHECK(!Z8.is_unit(Z8.scalar(2)));
  CHECK(Z8.pow(Z8.scalar(3), 2) == Z8.one());
  for (std::uint64_t i = 0; i < Z8.size(); ++i) CHECK(Z8.index(Z8.element(i)) == i);
  CHECK_THROWS_AS(Group::from_cayley({{0, 1}, {0, 1}}), Error);
}

TEST_CASE("relation rows bound additive orders") {
  auto M = abelian_group(2, {2, 1});
  CHECK(M->order() == 8);
  CHECK(M->exponent(0) == 2);
  CHECK(M->exponent(1) == 1);
  CHECK(M->size(M->cyclic(M->e(1))) == 2);
  CHECK(M->size(M->full()) == 8);
}

TEST_CASE("json module description") {
  auto M = module_from_json(nlohmann::json::parse(
      R"({"p": 2, "k": 2, "cayley": [[0]], "rank": 2, "relations": [{"scalar": 2, "basis_index": 1}]})"));
  CHECK(M->order() == 8);
  CHECK(M->all_submodules().size() == 8);
}
