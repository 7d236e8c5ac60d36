#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modlat/frames.hpp"
#include "modlat/models.hpp"

#include <json.hpp>

namespace modlat {

// Coordinate ring of a frame on axes (i, j) with auxiliary axis k; the
// default (1, 3, 4) is the ring with zero a_1 and unit c_13. Elements are
// the complements r of a_j in [a_⊥, a_i + a_j].
//
//   r ⊗ s = (a_i+a_j)[(r+c_jk)(a_i+a_k) + (s+c_ik)(a_j+a_k)]
//   r ⊕ s = (a_i+a_j)[(r+a_k)(s_k+a_j) + c_jk],  s_k = (s+c_jk)(a_i+a_k)
//
// Negation and inverses are found by search over the domain.
template <class H>
class CoordRing {
 public:
  CoordRing(const LatticeOracle<H>& O, FrameConfig<H> F, int i = 1, int j = 3, int k = 4)
      : O_(O), F_(std::move(F)), i_(i), j_(j), k_(k) {
    if (F_.n < 3) throw Error("coordinate ring needs a frame with at least three axes");
    for (int x : {i, j, k})
      if (x < 1 || x > F_.n) throw Error("coordinate axis out of range");
    if (i == j || j == k || i == k) throw Error("coordinate axes must be distinct");
    ij_ = O.join(F_.ai(i), F_.ai(j));
    ik_ = O.join(F_.ai(i), F_.ai(k));
    jk_ = O.join(F_.ai(j), F_.ai(k));
  }

  const LatticeOracle<H>& host() const { return O_; }
  const FrameConfig<H>& frame() const { return F_; }
  H zero() const { return F_.ai(i_); }
  H one() const { return F_.cij(i_, j_); }

  bool in_domain(const H& r) const {
    return O_.equal(O_.meet(r, F_.ai(j_)), F_.bot) && O_.equal(O_.join(r, F_.ai(j_)), ij_);
  }

  // Candidates satisfying the two domain equations, in input order.
  std::vector<H> filter_domain(const std::vector<H>& candidates) const {
    std::vector<H> out;
    for (const auto& c : candidates)
      if (in_domain(c)) out.push_back(c);
    return out;
  }
  void set_domain(std::vector<H> d) { domain_ = std::move(d); }
  const std::vector<H>& domain() const { return domain_; }

  H mul(const H& r, const H& s) const {
    check(r);
    check(s);
    H left = O_.meet(O_.join(r, F_.cij(j_, k_)), ik_);
    H right = O_.meet(O_.join(s, F_.cij(i_, k_)), jk_);
    return checked(O_.meet(ij_, O_.join(left, right)));
  }

  H add(const H& r, const H& s) const {
    check(r);
    check(s);
    H sk = O_.meet(O_.join(s, F_.cij(j_, k_)), ik_);
    H x = O_.meet(O_.join(r, F_.ai(k_)), O_.join(sk, F_.ai(j_)));
    return checked(O_.meet(ij_, O_.join(x, F_.cij(j_, k_))));
  }

  // t with r ⊕ t = zero, searched over the domain.
  H neg(const H& r) const {
    for (const auto& t : need_domain())
      if (O_.equal(add(r, t), zero())) return t;
    throw Error("no additive inverse in the domain");
  }

  // r a_i = a_⊥ and r + a_i = a_i + a_j.
  bool is_unit(const H& r) const {
    check(r);
    return O_.equal(O_.meet(r, F_.ai(i_)), F_.bot) && O_.equal(O_.join(r, F_.ai(i_)), ij_);
  }

  H inverse(const H& r) const {
    if (!is_unit(r)) throw Error("element is not a unit");
    for (const auto& t : need_domain())
      if (O_.equal(mul(r, t), one()) && O_.equal(mul(t, r), one())) return t;
    throw Error("no inverse found in the domain");
  }

  std::vector<H> units() const {
    std::vector<H> out;
    for (const auto& r : need_domain())
      if (is_unit(r)) out.push_back(r);
    return out;
  }

  // n ⊗ one, with 1 ⊗ one = one and (n+1) ⊗ one = one ⊕ (n ⊗ one).
  H n_times(int n) const {
    if (n < 1) throw Error("n_times needs n >= 1");
    H acc = one();
    for (int m = 1; m < n; ++m) acc = add(one(), acc);
    return acc;
  }

  // When set, every operation result is checked to lie in the domain.
  void set_checking(bool on) { checking_ = on; }

 private:
  void check(const H& r) const {
    if (!in_domain(r)) throw Error("argument outside the coordinate domain");
  }
  H checked(H r) const {
    if (checking_ && !in_domain(r)) throw Error("operation left the coordinate domain");
    return r;
  }
  const std::vector<H>& need_domain() const {
    if (domain_.empty()) throw Error("coordinate domain not enumerated");
    return domain_;
  }

  const LatticeOracle<H>& O_;
  FrameConfig<H> F_;
  int i_, j_, k_;
  H ij_, ik_, jk_;
  std::vector<H> domain_;
  bool checking_ = false;
};

// The ring on axes (1, 4) with auxiliary axis 3, whose unit is c_14.
template <class H>
CoordRing<H> ring14(const LatticeOracle<H>& O, const FrameConfig<H>& F) {
  return CoordRing<H>(O, F, 1, 4, 3);
}

template <class H>
bool has_characteristic(const LatticeOracle<H>& O, const FrameConfig<H>& F, int p) {
  if (F.n != 4) throw Error("characteristic needs a 4-frame");
  auto R = ring14(O, F);
  return O.equal(R.n_times(p), R.zero());
}

// Lower reduction at a_1(p ⊗ c_14); the result has characteristic p.
template <class H>
FrameConfig<H> characteristic_reduce(const LatticeOracle<H>& O, const FrameConfig<H>& F, int p) {
  if (F.n != 4) throw Error("characteristic reduction needs a 4-frame");
  auto R = ring14(O, F);
  return upper_lower_reduce(O, F, O.meet(F.ai(1), R.n_times(p)), Direction::Lower);
}

// Units of R that are 3-stable, given [a_⊥, a_1] as `interval`. Throws if
// the result is not closed under ⊗ and inverses.
template <class H>
std::vector<H> stable_subgroup(const CoordRing<H>& R, const std::vector<H>& interval, const SearchOptions& opts = {}) {
  const auto& O = R.host();
  std::vector<H> out;
  for (const auto& u : R.units())
    if (is_j_stable(O, R.frame(), u, 3, interval, opts).stable) out.push_back(u);
  auto member = [&](const H& x) {
    for (const auto& y : out)
      if (O.equal(x, y)) return true;
    return false;
  };
  for (const auto& r : out) {
    if (!member(R.inverse(r))) throw Error("stable units not closed under inverse");
    for (const auto& s : out)
      if (!member(R.mul(r, s))) throw Error("stable units not closed under multiplication");
  }
  return out;
}

// β_b(r) = r + ⊥ of the upper reduction Φ^b.
template <class H>
H beta_b(const LatticeOracle<H>& O, const FrameConfig<H>& F, const H& b, const H& r) {
  FrameConfig<H> up = upper_lower_reduce(O, F, b, Direction::Upper);
  return O.join(r, up.bot);
}

// {domain, add, mul, units, stable} with table entries indexing the domain.
template <class H>
nlohmann::json ring_dump(const CoordRing<H>& R, const std::vector<H>& stable = {}) {
  const auto& O = R.host();
  const auto& D = R.domain();
  auto index = [&](const H& x) -> long {
    for (std::size_t i = 0; i < D.size(); ++i)
      if (O.equal(D[i], x)) return long(i);
    return -1;
  };
  nlohmann::json j;
  j["domain"] = nlohmann::json::array();
  for (const auto& x : D) j["domain"].push_back(O.label(x));
  j["add"] = nlohmann::json::array();
  j["mul"] = nlohmann::json::array();
  for (const auto& r : D) {
    nlohmann::json ar = nlohmann::json::array(), mr = nlohmann::json::array();
    for (const auto& s : D) {
      ar.push_back(index(R.add(r, s)));
      mr.push_back(index(R.mul(r, s)));
    }
    j["add"].push_back(ar);
    j["mul"].push_back(mr);
  }
  j["units"] = nlohmann::json::array();
  for (const auto& u : R.units()) j["units"].push_back(index(u));
  j["stable"] = nlohmann::json::array();
  for (const auto& s : stable) j["stable"].push_back(index(s));
  return j;
}

// Ring on axes (i, j; k) of a frame in a finite module, with the domain
// enumerated from the submodules of a_i + a_j.
CoordRing<Submodule> canonical_coord_ring(const FiniteModule& M, const SubFrame& F, int i = 1, int j = 3, int k = 4);

extern template class CoordRing<Submodule>;

}  // namespace modlat
