#include "modlat/models.hpp"

namespace modlat {

SubFrame canonical_frame(const FiniteModule& M, const std::vector<std::size_t>& indices) {
  if (indices.size() < 2) throw Error("canonical frame needs at least two basis indices");
  for (std::size_t i : indices) {
    if (i >= M.rank()) throw Error("basis index out of range");
    if (!M.is_free(i)) throw Error("basis vector e_" + std::to_string(i + 1) + " is not free");
  }
  std::vector<Submodule> a, c1;
  for (std::size_t i : indices) a.push_back(M.cyclic(M.e(i)));
  for (std::size_t t = 1; t < indices.size(); ++t) c1.push_back(M.cyclic(M.sub(M.e(indices[0]), M.e(indices[t]))));
  return make_frame<Submodule>(M, M.zero(), a, c1);
}

Submodule graph_element(const FiniteModule& M, const FiniteRing::Elt& g, std::size_t i, std::size_t j) {
  return M.cyclic(M.sub(M.e(i), M.act(g, M.e(j))));
}

namespace {

struct TowerBuilder {
  const FiniteModule& M;
  std::uint32_t p;
  std::int64_t pw(unsigned e) const { return std::int64_t(ipow(p, e) % M.ring().modulus()); }
  FiniteModule::Vec v(std::vector<std::pair<std::int64_t, std::size_t>> t) const { return M.combo(t); }
  Submodule Z(std::vector<std::pair<std::int64_t, std::size_t>> t) const { return M.cyclic(v(std::move(t))); }
};

}  // namespace

TowerModel tower_canonical_model(int n, std::uint32_t p) {
  if (n < 1) throw Error("tower model needs n >= 1");
  TowerModel T;
  T.n = n;
  T.p = p;
  const unsigned K = unsigned(3 * n - 1);
  T.module = std::make_unique<FiniteModule>(FiniteRing(p, K, Group::trivial()), 4,
                                            std::vector<FiniteModule::Rel>{{std::int64_t(ipow(p, 2)), 0},
                                                                           {std::int64_t(ipow(p, 2)), 2},
                                                                           {std::int64_t(p), 3}});
  const FiniteModule& M = *T.module;
  TowerBuilder B{M, p};
  const std::size_t e1 = 0, e2 = 1, e3 = 2, e4 = 3;
  const std::int64_t P = p;
  for (int k = 1; k <= n; ++k) {
    const unsigned t = unsigned(3 * (n - k));
    const std::string s = "^" + std::to_string(k);
    auto& N = T.named;
    Submodule bot = B.Z({{B.pw(t + 2), e2}});
    auto plus = [&](const Submodule& X) { return M.sum(bot, X); };
    N["bot" + s] = bot;
    N["a2" + s] = B.Z({{B.pw(t), e2}});
    for (std::size_t i : {e1, e3}) {
      const std::string I = std::to_string(i + 1);
      N["a" + I + s] = plus(B.Z({{1, i}}));
      N["c2" + I + s] = B.Z({{B.pw(t), e2}, {-1, i}});
      N["c" + I + "2" + s] = plus(B.Z({{1, i}, {-B.pw(t), e2}}));
      N["a'" + I + s] = plus(B.Z({{P, i}}));
      N["c'2" + I + s] = B.Z({{B.pw(t + 1), e2}, {-P, i}});
      N["c'" + I + "4" + s] = plus(B.Z({{P, i}, {-1, e4}}));
    }
    N["c13" + s] = plus(B.Z({{1, e1}, {-1, e3}}));
    N["a'2" + s] = B.Z({{B.pw(t + 1), e2}});
    N["c'24" + s] = B.Z({{B.pw(t + 1), e2}, {-1, e4}});
    N["c'13" + s] = plus(B.Z({{P, e1}, {-P, e3}}));
    // Missing from the displayed list; the c'_{i4} = a_⊥ + Z(pe_i - e_4)
    // need this axis.
    N["a'4" + s] = plus(B.Z({{1, e4}}));

    SkewFrameConfig<Submodule> S;
    S.inner = make_frame<Submodule>(M, bot, {N["a1" + s], N["a2" + s], N["a3" + s]}, {N["c12" + s], N["c13" + s]});
    S.outer = make_frame<Submodule>(M, bot, {N["a'1" + s], N["a'2" + s], N["a'3" + s], N["a'4" + s]},
                                    {N["c'21" + s], N["c'13" + s], N["c'14" + s]});
    T.tower.levels.push_back(std::move(S));
  }
  return T;
}

Assignment<Submodule> tower_assignment(const TowerModel& T) {
  Assignment<Submodule> A;
  for (int k = 1; k <= T.n; ++k) {
    const auto& F = T.tower.levels[std::size_t(k - 1)].inner;
    const std::string s = "_" + std::to_string(k);
    A["bot" + s] = F.bot;
    A["a1" + s] = F.ai(1);
    A["a2" + s] = F.ai(2);
    A["c12" + s] = F.cij(1, 2);
  }
  const auto& L1 = T.tower.levels[0];
  A["a3_1"] = L1.inner.ai(3);
  A["c13_1"] = L1.inner.cij(1, 3);
  A["a4'_1"] = L1.outer.ai(4);
  A["c14'_1"] = L1.outer.cij(1, 4);
  return A;
}

std::vector<Submodule> interval_submodules(const FiniteModule& M, const Submodule& lo, const Submodule& hi,
                                           std::size_t bound) {
  if (!M.leq(lo, hi)) throw Error("interval bounds are not ordered");
  std::vector<Submodule> out;
  for (auto& X : M.submodules_of(hi, bound))
    if (M.leq(lo, X) && M.leq(X, hi)) out.push_back(std::move(X));
  return out;
}

nlohmann::json tower_to_json(const FiniteModule& M, const SubTower& T) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t k = 0; k < T.levels.size(); ++k) {
    nlohmann::json lvl;
    const auto& S = T.levels[k];
    auto dump = [&](const SubFrame& F, const std::string& prime) {
      for (int i = 1; i <= F.n; ++i) lvl["a" + prime + std::to_string(i)] = M.to_json(F.ai(i));
      for (int i = 1; i <= F.n; ++i)
        for (int l = i + 1; l <= F.n; ++l)
          lvl["c" + prime + std::to_string(i) + std::to_string(l)] = M.to_json(F.cij(i, l));
    };
    lvl["bot"] = M.to_json(S.inner.bot);
    dump(S.inner, "");
    dump(S.outer, "'");
    j.push_back(lvl);
  }
  return j;
}

FrameModel canonical_frame_model(const FiniteRing& R, std::size_t rank) {
  FrameModel out;
  out.module = std::make_unique<FiniteModule>(R, rank);
  std::vector<std::size_t> idx(rank);
  for (std::size_t i = 0; i < rank; ++i) idx[i] = i;
  out.frame = canonical_frame(*out.module, idx);
  return out;
}

std::vector<Submodule> graph_domain(const FiniteModule& M, std::size_t i, std::size_t j) {
  const FiniteRing& R = M.ring();
  std::vector<Submodule> out;
  for (std::uint64_t x = 0; x < R.size(); ++x) out.push_back(graph_element(M, R.element(x), i, j));
  return out;
}

}  // namespace modlat
