#pragma once

#include <vector>

#include "cometq/types.hpp"

namespace cometq {

// One arm of a comet: a strictly increasing string of positive ranks ending at
// the central rank r. The string (1,2,...,r) is the complete flag, (1,r) the
// minimal one; for r = 2 they coincide and count as complete.
struct FlagString {
    std::vector<int> ranks;

    int length() const { return static_cast<int>(ranks.size()); }
    int top() const { return ranks.back(); }
    bool is_complete() const;
    bool is_minimal() const;
    bool operator==(const FlagString&) const = default;
};

// Sum over consecutive pairs of r_i * (r_{i+1} - r_i): the complex dimension of
// the partial flag variety the arm contributes.
int flag_dim(const FlagString& f);

// Comet-shaped quiver: n arms glued to a central node of rank r carrying g
// loops. multiplicity[i][k] counts parallel copies of the k-th consecutive
// edge of arm i (all 1 for tame comets; wild comets from merged arms carry n).
struct CometQuiver {
    std::vector<FlagString> arms;
    int loops = 0;
    std::vector<std::vector<int>> multiplicity;
    int central = 0;  // rank of the central node; redundant with arms when n > 0

    int num_arms() const { return static_cast<int>(arms.size()); }
    int central_rank() const { return central; }
    bool tame() const;  // all multiplicities 1
    bool operator==(const CometQuiver&) const = default;
};

// Validates and assembles a comet. Arms must agree on the central rank
// (MismatchedCentralRank) and each flag string must be strictly increasing and
// positive (InvalidFlag). Arms may be absent (n = 0) when loops are present;
// central_rank must then be given explicitly.
CometQuiver build_comet(const std::vector<std::vector<int>>& arms, int loops,
                        const std::vector<std::vector<int>>& multiplicity = {},
                        int central_rank = 0);

// Complex dimension of the polygon space: sum of flag_dim over arms plus
// (g - 1)(r^2 - 1). May be negative; treat negative values as an
// empty-likely advisory rather than an error.
int dim_polygon_space(const CometQuiver& q);

// Complex dimension of the hyperpolygon space: twice dim_polygon_space.
int dim_hyperpolygon_space(const CometQuiver& q);

inline bool empty_likely(const CometQuiver& q) { return dim_polygon_space(q) < 0; }

// Independent Hamiltonian tally for comets whose arms are all complete or
// minimal: c * r(r-1)/2 + (n-c)(r-1) + (g-1)(r^2-1) with c the number of
// complete arms. Throws UnsupportedFlagType otherwise.
int count_gt_hamiltonians(const CometQuiver& q);

// Merge n identical multiplicity-one arms into a single arm of multiplicity n
// on every consecutive pair (the wild comet). Throws NonIdenticalArms if the
// arms differ or already carry multiplicities.
CometQuiver wildify(const CometQuiver& q);

}  // namespace cometq
