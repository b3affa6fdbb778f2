#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cometq/moment.hpp"
#include "cometq/quiver.hpp"
#include "cometq/rep.hpp"

namespace cometq {

struct SolveOptions {
    std::uint64_t seed = 0;
    double tolerance = 1e-11;   // on the residual aggregate
    int max_iterations = 400;   // per start
    int starts = 8;
    void validate() const;
};

struct SolveResult {
    Representation rep;
    ResidualReport report;
    bool converged = false;
    int iterations = 0;  // of the winning start
    int best_start = 0;
    std::vector<std::string> warnings;
};

// Multi-start damped least squares on the full coordinate set. Deterministic
// in (q, alpha, opts): each start draws from a child seed and the reduction
// takes the lexicographic minimum of (residual, start index), so thread
// scheduling cannot change the outcome. Throws InvalidLevel for non-positive
// alpha entries, LengthMismatch for a wrong count. Non-convergence is a flag,
// not an error; the best iterate is retained.
SolveResult solve(const CometQuiver& q, const LevelVector& alpha, const SolveOptions& opts = {});

// Same system restricted to the circle-fixed slice y = b = 0 (only x and a
// vary). The output satisfies the full residual at the same level: the complex
// equations vanish identically on the slice.
SolveResult solve_polygon(const CometQuiver& q, const LevelVector& alpha,
                          const SolveOptions& opts = {});

// Numerical rank and the gap sigma_rank / sigma_rank+1 that justifies it
// (infinite when nothing is cut). Default cutoff max(dims) * machine-eps *
// sigma_max suits machine-accurate matrices (the constraint Jacobian is exact
// to rounding); pass a relative cutoff for data with a known noise floor,
// such as finite-difference Hamiltonian gradients.
struct RankAnalysis {
    int rank = 0;
    double gap = 0.0;
    rvec singular_values;
};
RankAnalysis numerical_rank(const rmat& m, double relative_cutoff = 0.0);

struct DimensionReport {
    int ambient_real = 0;
    int constraint_rank = 0;
    int level_set_real = 0;
    int gauge_orbit_real = 0;
    int quotient_real = 0;
    int quotient_complex = 0;
    int predicted_complex = 0;
    double constraint_gap = 0.0;
    double gauge_gap = 0.0;
    double gap = 0.0;  // min of the two
    bool singular = false;
    double residual_aggregate = 0.0;
};

// Tangent counting at a solved point: ambient minus constraint-Jacobian rank
// minus gauge-orbit rank, halved for the complex dimension, compared against
// the closed-form prediction. A rank gap under 1e3 flags the point singular;
// the report is still produced.
DimensionReport dimension_report(const CometQuiver& q, const Representation& rep,
                                 const LevelVector& alpha);

// Jacobian of the residual vector in flat coordinates by central differences
// with unit step: every residual entry is polynomial of degree <= 2 in each
// real coordinate, so the central difference is exact up to rounding.
rmat residual_jacobian(const FlatLayout& layout, const rvec& at, const LevelVector& alpha);

// Orthonormal columns spanning ker(constraint Jacobian) intersected with the
// Frobenius-orthogonal complement of the gauge orbit at rep: the physical
// tangent directions of the quotient.
rmat physical_tangent_basis(const CometQuiver& q, const Representation& rep,
                            const LevelVector& alpha);

}  // namespace cometq
