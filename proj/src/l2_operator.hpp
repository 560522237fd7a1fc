#pragma once

// Momentum-space pieces of the weighted Fokker-Planck collision operator.
//
// Faces carry a = E^{-1} at the face midpoint. With D the forward difference
// across a face and h the momentum spacing, the stiffness form is
//   (K g)_i = h^{-2} sum_faces(i) a_face (g_i - g_neighbour),
// i.e. K = D^T diag(a) D / h^2, symmetric positive semi-definite. Faces on
// the box boundary are absent (zero flux).

#include <array>
#include <cstddef>

#include "bec/common.hpp"
#include "bec/grid.hpp"
#include "bec/weight.hpp"

namespace bec::detail {

struct MomentumFaces {
    int dim = 1;
    int n = 0;
    std::size_t size = 0;
    double inv_h2 = 0.0;
    std::array<std::size_t, 3> stride{0, 0, 0};
    /// a[axis][j]: face between node j and j + e_axis; 0 when j is on the upper face.
    std::array<RealField, 3> a;
};

MomentumFaces build_faces(const Grid& grid, const BoseEinsteinWeight& weight);

/// y = K g
void apply_stiffness(const MomentumFaces& faces, const double* g, double* y);

/// g^T K g
double stiffness_energy(const MomentumFaces& faces, const double* g);

/// Solves (diag(d) + c K) x = b; x holds the initial guess on entry. Returns the
/// iteration count (0 for the direct tridiagonal path).
int solve_shifted(const MomentumFaces& faces, const RealField& d, double c, const double* b, double* x,
                  double rel_tol, int max_iterations);

} // namespace bec::detail
