#pragma once

#include "torsionlab/spectral.hpp"

namespace torsionlab::oracles {

/// Classical subquotient page dimensions
///   E_k^{p,q} = Z_k^{p,q} / (Z_{k-1}^{p+1,q} + d Z_{k-1}^{p-k+1,q-1}),
///   Z_j^{a,q} = { x in F_a C^q : dx in F_{a+j} C^{q+1} },
/// computed directly from subspace ranks, independently of the page
/// machinery. Test oracle only; the production path is the inductive
/// construction in spectral::.
Index classical_page_dim(const spectral::FilteredMetricComplex& f, int k, int p, int q,
                         const Tolerance& tol = default_tolerance());

/// True iff every entry of the page matches the classical dimension.
bool page_dims_match_classical(const spectral::FilteredMetricComplex& f,
                               const spectral::SpectralPage& page,
                               const Tolerance& tol = default_tolerance());

/// Closed-form circle-bundle torsion: sum_r (-1)^{r+1} log |det(phi_r - I)|,
/// by direct determinant evaluation.
double mapping_torus_log_torsion(const std::vector<Matrix>& monodromies);

}  // namespace torsionlab::oracles
