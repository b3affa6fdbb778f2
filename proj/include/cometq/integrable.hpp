#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cometq/moment.hpp"
#include "cometq/quiver.hpp"
#include "cometq/rep.hpp"
#include "cometq/solver.hpp"

namespace cometq {

// The three Hamiltonian families.
//
// arm_block_trace (arm, level k, degree j): take the edge of the arm whose
// head rank is the smallest one >= k, form the trace-free product (x y)_0
// summed over nothing (tame only), keep the leading principal (k-1) x (k-1)
// block, and return its j-th elementary symmetric eigenvalue polynomial
// (j = 1 trace, j = block size determinant). On a complete arm this is the
// block of the k x k matrix of edge k-2. minimal_corner (arm): entry (1, r)
// of the full trace-free product of the single edge. loop_entry (loop, p, q):
// the (p, q) entry of b_loop, 0-based, (r-1, r-1) excluded.
enum class HamiltonianKind { arm_block_trace, minimal_corner, loop_entry };

struct HamiltonianDescriptor {
    HamiltonianKind kind = HamiltonianKind::arm_block_trace;
    int arm = -1;
    int level = 0;
    int degree = 0;
    int loop = -1;
    int row = 0;
    int col = 0;
};

enum class GtPolicy { corollary, tally_greedy };

struct HamiltonianSet {
    std::vector<HamiltonianDescriptor> members;
    GtPolicy policy = GtPolicy::corollary;
    int tally = 0;            // the closed-form independent count
    int corollary_count = 0;  // size of the published listing
    bool complete = true;     // greedy reached the tally
};

// Optional hook applied to the product matrix before the block is taken, for
// experiments with alternative normal forms. Identity by default; the plain
// leading principal block already commutes on-shell.
struct GtOptions {
    std::function<cxmat(const cxmat&)> normal_form;
};

cx evaluate_hamiltonian(const CometQuiver& q, const Representation& rep,
                        const HamiltonianDescriptor& desc, const GtOptions& opts = {});

using HoloFn = std::function<cx(const Representation&)>;
HoloFn make_hamiltonian(const CometQuiver& q, const HamiltonianDescriptor& desc,
                        const GtOptions& opts = {});

// The published listing: complete arms contribute all (k, j), minimal arms
// their corner; arms 1..n enter for g >= 1 and arms r+2..n (1-based) for
// g = 0; loops 2..g contribute entries of b (all but (r,r)) when g > 1.
HamiltonianSet gt_corollary(const CometQuiver& q);

// Greedy selection sized by count_gt_hamiltonians: enumerate the corollary
// families for every arm (minimal arms topped up with principal-block
// coefficients), then loop entries (loops 2..g before loop 1), and keep a
// candidate when its differential raises the rank restricted to the physical
// tangent space at the solved point. complete=false when the tally is not
// reached.
HamiltonianSet gt_tally_greedy(const CometQuiver& q, const Representation& rep,
                               const LevelVector& alpha, const GtOptions& opts = {});

HamiltonianSet gt_hamiltonians(const CometQuiver& q, GtPolicy policy,
                               const Representation* rep = nullptr,
                               const LevelVector* alpha = nullptr);

// Complex partial derivatives along every canonical coordinate, by central
// differences with step 1e-5 * (1 + |coordinate|) on the real slot (exact for
// holomorphic integrands up to O(h^2)).
cxvec canonical_gradient(const FlatLayout& layout, const HoloFn& f, const rvec& at);

// Canonical holomorphic bracket: sum over conjugate pairs of
// df/dq dg/dp - df/dp dg/dq, with {x_pq, y_qp} = 1 (index transpose) and
// {a_i, b_i} = 1 in the orthonormal trace-free basis.
cx poisson_bracket(const FlatLayout& layout, const HoloFn& f, const HoloFn& g, const rvec& at);

struct CommutationReport {
    Eigen::MatrixXcd brackets;
    double max_normalized = 0.0;  // max |{H_k,H_l}| / max(1, |grad H_k| |grad H_l|)
    bool on_shell = true;
    double residual = 0.0;
};

// All pairwise brackets of the set at rep. Throws NotOnShell when the residual
// aggregate exceeds 1e-8, unless require_on_shell is false (diagnostic mode).
CommutationReport commutation_matrix(const CometQuiver& q, const Representation& rep,
                                     const LevelVector& alpha, const HamiltonianSet& set,
                                     bool require_on_shell = true, const GtOptions& opts = {});

struct IndependenceReport {
    int rank = 0;            // complex functional rank on the quotient
    int restricted_real_rank = 0;
    double gap = 0.0;
    int tally = 0;
    bool odd_rank = false;   // real rank came out odd; rank rounded down
};

// Rank of the set's differentials restricted to the physical tangent space
// (level-set kernel minus gauge directions). Throws NotOnShell off-shell and
// SingularPoint when the rank gaps at rep are weak.
IndependenceReport independence_rank(const CometQuiver& q, const Representation& rep,
                                     const LevelVector& alpha, const HamiltonianSet& set,
                                     const GtOptions& opts = {});

}  // namespace cometq
