#pragma once

#include <vector>

#include "cometq/quiver.hpp"
#include "cometq/rep.hpp"
#include "cometq/types.hpp"

namespace cometq {

// One matrix per non-central arm node (arm[i][k], k = 0..m-2, size ranks[k])
// plus the central block. Real moments are Hermitian with a trace-free central
// block; complex moments have a trace-free central block.
struct MomentValue {
    std::vector<std::vector<cxmat>> arm;
    cxmat central;
};

// Vertex-wise real moment: (incoming x x* - y* y) - (outgoing x* x - y y*),
// trace-removed at the center, with [a, a*] + [b, b*] added per loop. At the
// terminal node of each arm the overall sign is flipped (the flag-variety
// convention that makes the terminal value |x_1|^2 - |y_1|^2).
MomentValue real_moment(const CometQuiver& q, const Representation& rep);

// Vertex-wise complex moment: incoming x y - outgoing y x, trace-removed at
// the center, with [a, b] added per loop; terminal sign flipped likewise
// (terminal value y_1 x_1).
MomentValue complex_moment(const CometQuiver& q, const Representation& rep);

// Residual of the six hyperpolygon equation groups at level alpha:
//   eq_i   central real block
//   eq_ii  interior real blocks, nodes k = 2..m-1 (1-based)
//   eq_iii terminal real scalars minus alpha_i
//   eq_I   central complex block
//   eq_II  interior complex blocks
//   eq_III terminal complex scalars
// Frobenius norm per block; aggregate^2 = sum of squared block norms.
struct ResidualReport {
    double eq_i = 0.0;
    std::vector<std::vector<double>> eq_ii;
    std::vector<double> eq_iii;
    double eq_I = 0.0;
    std::vector<std::vector<double>> eq_II;
    std::vector<double> eq_III;
    double aggregate = 0.0;
    bool non_generic = false;  // some alpha entry is not strictly positive
};

using LevelVector = std::vector<double>;

// Arms must be based (terminal rank 1, else ArmNotBased); alpha must have one
// entry per arm (LengthMismatch). Zero entries are permitted and flagged.
ResidualReport hyperpolygon_residual(const CometQuiver& q, const Representation& rep,
                                     const LevelVector& alpha);

// The full residual as a real vector: all block entries, re and im, in report
// order. Its Euclidean norm equals the report aggregate; the solver minimizes
// half its square. Interior blocks enter with all matrix entries, which keeps
// rank analysis faithful (the blocks take values in their symmetry classes
// identically).
rvec residual_vector(const CometQuiver& q, const Representation& rep, const LevelVector& alpha);

// Number of interior-node equation groups per convention: the vertex-wise
// calculus runs k = 2..m-1; a narrower printed variant stops at m-2. Both
// exposed for diagnostics; the library enforces the former.
int interior_node_count(const CometQuiver& q, bool printed_variant = false);

// Reinterpret a representation of n identical arms on the wild comet (one arm,
// multiplicity n) and evaluate the residual at the merged level sum(alpha).
// For solved tame inputs the wild aggregate stays within 1e-10 of the tame one.
ResidualReport wild_specialization_check(const CometQuiver& q, const Representation& rep,
                                         const LevelVector& alpha);

// The wild reinterpretation itself (copy c of each edge = arm c's matrices).
Representation wild_transport(const CometQuiver& q, const Representation& rep);

}  // namespace cometq
