#include <doctest.h>

#include "modlat/acceptance.hpp"
#include "modlat/coords.hpp"
#include "modlat/error.hpp"

using namespace modlat;

TEST_CASE("graph map is a ring isomorphism") {
  for (const auto& R : {FiniteRing(2, 1, Group::trivial()), FiniteRing(3, 1, Group::trivial()),
                        FiniteRing(5, 1, Group::trivial()), FiniteRing(2, 2, Group::trivial()),
                        FiniteRing(3, 2, Group::trivial()), FiniteRing(2, 1, Group::cyclic(2))}) {
    auto f = graph_map_check(R);
    CHECK_MESSAGE(!f, R.p() << "^" << R.k() << " |G|=" << R.dim() << ": " << f.value_or(""));
  }
}

TEST_CASE("coordinate ring tables form a ring") {
  for (const auto& R : {FiniteRing(3, 1, Group::trivial()), FiniteRing(2, 1, Group::cyclic(2))}) {
    FrameModel F = canonical_frame_model(R, 4);
    CoordRing<Submodule> C = canonical_coord_ring(*F.module, F.frame);
    auto j = ring_dump(C);
    const auto& add = j["add"];
    const auto& mul = j["mul"];
    const std::size_t n = j["domain"].size();
    CHECK(n == R.size());
    bool ok = true;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        ok = ok && add[a][b] == add[b][a];
        for (std::size_t c = 0; c < n; ++c) {
          std::size_t ab = add[a][b], bc = add[b][c], mab = mul[a][b], mbc = mul[b][c];
          ok = ok && add[ab][c] == add[a][bc];
          ok = ok && mul[mab][c] == mul[a][mbc];
          std::size_t mac = mul[a][c];
          ok = ok && mul[a][bc] == add[mab][mac];
        }
      }
    CHECK(ok);
  }
}

TEST_CASE("units and inverses") {
  FrameModel F = canonical_frame_model(FiniteRing(2, 2, Group::trivial()), 4);
  CoordRing<Submodule> C = canonical_coord_ring(*F.module, F.frame);
  auto U = C.units();
  CHECK(U.size() == 2);
  for (const auto& u : U) CHECK(C.mul(u, C.inverse(u)) == C.one());
  CHECK_THROWS_AS(C.inverse(C.zero()), Error);
  CHECK(C.add(C.one(), C.neg(C.one())) == C.zero());
  CHECK_THROWS_AS(C.mul(F.frame.ai(2), C.one()), Error);
  CHECK(C.n_times(4) == C.zero());
  CHECK(!(C.n_times(2) == C.zero()));
}

TEST_CASE("construction validates axes") {
  FrameModel F = canonical_frame_model(FiniteRing(2, 1, Group::trivial()), 4);
  const FiniteModule& M = *F.module;
  CHECK_THROWS_AS(CoordRing<Submodule>(M, F.frame, 1, 1, 4), Error);
  CHECK_THROWS_AS(CoordRing<Submodule>(M, F.frame, 1, 3, 5), Error);
  FrameModel G = canonical_frame_model(FiniteRing(2, 1, Group::trivial()), 2);
  CHECK_THROWS_AS(CoordRing<Submodule>(*G.module, G.frame), Error);
}

TEST_CASE("the ring on axes (1, 4) has the same characteristic") {
  for (std::uint32_t p : {2u, 3u}) {
    FrameModel F = canonical_frame_model(FiniteRing(p, 1, Group::trivial()), 4);
    CHECK(has_characteristic(*F.module, F.frame, int(p)));
    auto R14 = ring14(*F.module, F.frame);
    CHECK(R14.one() == F.frame.cij(1, 4));
  }
}

TEST_CASE("characteristic reduction of Z/4 and Z/8 frames") {
  for (unsigned k : {2u, 3u}) {
    FrameModel F = canonical_frame_model(FiniteRing(2, k, Group::trivial()), 4);
    const FiniteModule& M = *F.module;
    CHECK(!has_characteristic(M, F.frame, 2));
    SubFrame G = characteristic_reduce(M, F.frame, 2);
    CHECK(!check_frame(M, G));
    CHECK(has_characteristic(M, G, 2));
  }
  // Already of characteristic p, the reduction point is a_1 itself.
  FrameModel F = canonical_frame_model(FiniteRing(2, 1, Group::trivial()), 4);
  CHECK(same_frame(*F.module, characteristic_reduce(*F.module, F.frame, 2), F.frame));
}

TEST_CASE("stable subgroup and beta_b") {
  const FiniteRing R(2, 1, Group::cyclic(2));
  FrameModel F = canonical_frame_model(R, 4);
  const FiniteModule& M = *F.module;
  auto interval = M.submodules_of(F.frame.ai(1));
  CoordRing<Submodule> C = canonical_coord_ring(M, F.frame);
  auto st = stable_subgroup(C, interval);
  CHECK(st.size() == C.units().size());
  for (const auto& r : st) {
    Submodule b = M.meet(F.frame.ai(1), M.join(r, F.frame.cij(1, 3)));
    CHECK(beta_b(M, F.frame, b, r) == upper_lower_reduce(M, F.frame, b, Direction::Upper).cij(1, 3));
  }
  auto j = ring_dump(C, st);
  CHECK(j["stable"].size() == st.size());
}

TEST_CASE("checking mode keeps results in the domain") {
  FrameModel F = canonical_frame_model(FiniteRing(3, 1, Group::trivial()), 4);
  CoordRing<Submodule> C = canonical_coord_ring(*F.module, F.frame);
  C.set_checking(true);
  for (const auto& r : C.domain())
    for (const auto& s : C.domain()) {
      CHECK(C.in_domain(C.add(r, s)));
      CHECK(C.in_domain(C.mul(r, s)));
    }
}
