#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cometq/quiver.hpp"
#include "cometq/types.hpp"

namespace cometq {

// Point of the doubled quiver representation space. Edge k of arm i (0-based)
// joins node k (rank ranks[k]) to node k+1, node m-1 being central:
//   x[i][k][c] has shape ranks[k+1] x ranks[k]   (toward the center)
//   y[i][k][c] has shape ranks[k]   x ranks[k+1] (away from it)
// with c running over the edge multiplicity. Loop matrices a, b are r x r and
// trace-free.
struct Representation {
    std::vector<std::vector<std::vector<cxmat>>> x, y;
    std::vector<cxmat> a, b;
};

Representation zero_representation(const CometQuiver& q);

// Entries i.i.d. complex gaussian, scale * N(0,1) per real component; loop
// draws are projected trace-free. Deterministic in (seed).
Representation random_representation(const CometQuiver& q, std::uint64_t seed, double scale);

// Throws ShapeMismatch if rep does not fit q.
void validate_shapes(const CometQuiver& q, const Representation& rep);

// Largest |tr a_j|, |tr b_j| over loops; the loop matrices are supposed to be
// trace-free to 1e-12 absolute.
double max_trace_defect(const Representation& rep);

// Real coordinates for the solver and the bracket machinery. Fixed order:
// arms in order, edges outer to inner, x block before y block, matrix entries
// row-major; then loops in order, a before b, as coefficients in the
// trace_free_basis. Every complex number occupies two slots, re then im.
//
// x/y entries round-trip bitwise. Loop coefficients round-trip to ~1 ulp: the
// orthonormal basis carries irrational normalizations, and orthonormality is
// what makes the canonical loop pairing exact, so it wins.
class FlatLayout {
  public:
    explicit FlatLayout(const CometQuiver& q);

    int complex_dim() const { return complex_dim_; }
    int real_dim() const { return 2 * complex_dim_; }

    rvec flatten(const Representation& rep) const;
    Representation unflatten(const rvec& v) const;

    // Canonical conjugate index pairs (complex indices): x entry (p,q) with
    // y entry (q,p) of the same edge copy, a coefficient i with b coefficient
    // i of the same loop. First member is the position-like coordinate.
    const std::vector<std::pair<int, int>>& canonical_pairs() const { return pairs_; }

    const CometQuiver& quiver() const { return q_; }

  private:
    CometQuiver q_;
    int complex_dim_ = 0;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<cxmat> basis_;  // trace-free basis at the central rank
};

// Gauge element: one invertible matrix per non-central node plus a
// determinant-one central matrix; unitary gauges preserve all moment norms.
struct GaugeElement {
    std::vector<std::vector<cxmat>> node;  // node[i][k], size ranks[k], k = 0..m-2
    cxmat central;
};

GaugeElement identity_gauge(const CometQuiver& q);
GaugeElement random_unitary_gauge(const CometQuiver& q, std::uint64_t seed);

// x -> g_head x g_tail^-1, y -> g_tail y g_head^-1, loops conjugated by the
// central element.
Representation apply_gauge(const CometQuiver& q, const GaugeElement& g, const Representation& rep);

// The three quaternionic structures acting slotwise on (x, y, a, b):
//   I: (ix, iy, ia, ib)
//   J: (-y*, x*, -b*, a*)      (* is the conjugate transpose)
//   K: (-iy*, ix*, -ib*, ia*)
// They satisfy I^2 = J^2 = K^2 = -id, IJ = K, JK = I, KI = J exactly.
enum class Quaternion { I, J, K };
Representation quaternion_apply(Quaternion s, const Representation& rep);

// Circle action fixing x and a: y -> e^{i theta} y, b -> e^{i theta} b.
// theta == pi uses the exact factor -1 so the half-turn element coincides
// bitwise with the sign involution.
Representation circle_action(const Representation& rep, double theta);

// Flattened images of a basis of the compact gauge Lie algebra under the
// infinitesimal action at rep: u(rank) at every non-central node and su(r) at
// the center. Column count = sum rank^2 + (r^2 - 1).
std::vector<rvec> gauge_orbit_tangent_basis(const CometQuiver& q, const Representation& rep);

}  // namespace cometq
