#pragma once

#include <vector>

#include "cometq/quiver.hpp"
#include "cometq/rep.hpp"
#include "cometq/types.hpp"

namespace cometq {

// Matrix-valued side data of the (hyper)polygon figure: one difference side
// per arm, (x x* - y* y)_0 at the center, and [a, a*] + [b, b*] per loop.
// On the y = b = 0 slice these reduce to the plain polygon sides. The sides
// sum to the central real moment, so the closure defect measures the central
// real residual group (eq_i in ResidualReport).
struct PolygonFigure {
    std::vector<cxmat> sides;          // arms first, then loops
    std::vector<double> side_lengths;  // Frobenius norms
    double closure_defect = 0.0;       // Frobenius norm of the sum
};

PolygonFigure polygon_sides(const CometQuiver& q, const Representation& rep);

// Residues of the rational Higgs field: R_i = (x_i y_i)_0 over the last edge
// of each arm, plus the loop commutator sum [b_j, a_j]. The nilpotency order
// of R is the smallest p <= r with ||R^p|| < 1e-8 * ||R||^p (order 1 for the
// zero matrix); solved minimal arms give 2, complete arms give r.
struct HiggsData {
    std::vector<cx> punctures;
    std::vector<cxmat> residues;
    std::vector<int> nilpotency_orders;
    std::vector<double> nilpotency_defects;  // ||R^order|| / max(||R||^order, tiny)
    cxmat loop_commutator_sum;
    double residue_identity_defect = 0.0;  // ||sum R_i - sum [b_j, a_j]||
};

// Punctures: one per arm, pairwise distinct (DuplicatePunctures), finite.
HiggsData higgs_data(const CometQuiver& q, const Representation& rep,
                     const std::vector<cx>& punctures);

// || sum R_i - sum [b_j, a_j] ||: zero on the hyperpolygon locus by the
// central complex equation, for any genus (the g = 0 form asserts sum R_i = 0).
double residue_sum_check(const CometQuiver& q, const Representation& rep);

// phi(z) = sum R_i / (z - z_i); throws EvaluationAtPole at punctures.
cxmat higgs_eval(const HiggsData& data, cx z);

// Coefficients c_1..c_k of det(lambda I - M) = lambda^k + sum c_j lambda^{k-j},
// computed from the eigenvalues via elementary symmetric polynomials (backward
// stable: the computed values are exact coefficients of a nearby matrix).
std::vector<cx> char_coefficients(const cxmat& m);

}  // namespace cometq
