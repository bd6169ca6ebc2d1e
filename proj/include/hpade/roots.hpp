#pragma once

#include <vector>

#include "hpade/polynomial.hpp"

namespace hpade {

struct RootCluster {
  cplx location;
  int multiplicity;
};

/// All roots of p with multiplicity, by Aberth-Ehrlich simultaneous iteration.
///
/// Iterates until every correction is below 1e-13*(1+|z|) or the residual is
/// at the Horner rounding level, then groups approximations whose distance is
/// within 1e-7*(1+|z|) or within their Newton inclusion radii. Each cluster is
/// reported at its centroid, repeated by multiplicity.
/// Throws RootFindingError after 500 sweeps without convergence.
std::vector<cplx> poly_roots(const ComplexPolynomial& p);

/// Same computation, grouped by cluster and sorted by |location|.
std::vector<RootCluster> root_clusters(const ComplexPolynomial& p);

}  // namespace hpade
