#include "modlat/coords.hpp"

namespace modlat {

CoordRing<Submodule> canonical_coord_ring(const FiniteModule& M, const SubFrame& F, int i, int j, int k) {
  CoordRing<Submodule> R(M, F, i, j, k);
  R.set_domain(R.filter_domain(M.submodules_of(M.sum(F.ai(i), F.ai(j)))));
  return R;
}

template class CoordRing<Submodule>;

}  // namespace modlat
