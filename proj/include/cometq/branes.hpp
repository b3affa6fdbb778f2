#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "cometq/quiver.hpp"
#include "cometq/rep.hpp"

namespace cometq {

// (x, y, a, b) -> (x, -y, a, -b): the half-turn of the circle action. An exact
// involution (sign flips only).
Representation sign_involution(const Representation& rep);

// How the involution interacts with one quaternionic structure over random
// samples: commutator defect |S(inv(v)) - inv(S(v))| / |v| and the
// anticommutator analogue. B when it commutes, A when it anticommutes.
struct StructureDefects {
    double commutator = 0.0;
    double anticommutator = 0.0;
    char classification = '?';
};

struct BraneReport {
    std::map<char, StructureDefects> structures;  // keys 'I', 'J', 'K'
    std::string signature;                        // e.g. "(B,A,A)"
    int samples = 0;
    std::uint64_t seed = 0;
};

// Classifies the sign involution against I, J, K by sampling `samples` random
// representations. Throws Inconclusive if a structure neither commutes nor
// anticommutes within 1e-12 relative.
BraneReport involution_type_report(const CometQuiver& q, int samples, std::uint64_t seed);

/// Largest Frobenius norm among the y and b blocks: zero iff rep sits on the
// involution-fixed (polygon) locus.
double fixed_locus_defect(const Representation& rep);
bool fixed_locus_check(const Representation& rep, double tol = 1e-12);

}  // namespace cometq
