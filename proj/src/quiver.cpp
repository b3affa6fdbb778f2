#include "cometq/quiver.hpp"

#include <numeric>

namespace cometq {

bool FlagString::is_complete() const {
    for (int i = 0; i < length(); ++i)
        if (ranks[i] != i + 1) return false;
    return true;
}

bool FlagString::is_minimal() const {
    return length() == 2 && ranks[0] == 1;
}

int flag_dim(const FlagString& f) {
    int d = 0;
    for (int i = 0; i + 1 < f.length(); ++i) d += f.ranks[i] * (f.ranks[i + 1] - f.ranks[i]);
    return d;
}

bool CometQuiver::tame() const {
    for (const auto& arm : multiplicity)
        for (int m : arm)
            if (m != 1) return false;
    return true;
}

CometQuiver build_comet(const std::vector<std::vector<int>>& arms, int loops,
                        const std::vector<std::vector<int>>& multiplicity, int central_rank) {
    if (loops < 0) throw InvalidFlag("loop count must be nonnegative");
    CometQuiver q;
    q.loops = loops;
    for (const auto& a : arms) {
        if (a.size() < 2) throw InvalidFlag("flag string needs at least two ranks");
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] < 1) throw InvalidFlag("flag ranks must be positive");
            if (i > 0 && a[i] <= a[i - 1]) throw InvalidFlag("flag ranks must be strictly increasing");
        }
        q.arms.push_back(FlagString{a});
    }
    for (std::size_t i = 1; i < q.arms.size(); ++i)
        if (q.arms[i].top() != q.arms[0].top())
            throw MismatchedCentralRank("arms disagree on the central rank");
    if (q.arms.empty()) {
        if (central_rank < 1) throw InvalidFlag("armless comet needs an explicit central rank");
        q.central = central_rank;
    } else {
        if (central_rank != 0 && central_rank != q.arms[0].top())
            throw MismatchedCentralRank("stated central rank disagrees with the arms");
        q.central = q.arms[0].top();
    }
    if (multiplicity.empty()) {
        for (const auto& arm : q.arms)
            q.multiplicity.emplace_back(arm.length() - 1, 1);
    } else {
        if (multiplicity.size() != q.arms.size())
            throw ShapeMismatch("multiplicity list does not match arm count");
        for (std::size_t i = 0; i < multiplicity.size(); ++i) {
            if (static_cast<int>(multiplicity[i].size()) != q.arms[i].length() - 1)
                throw ShapeMismatch("multiplicity list does not match arm length");
            for (int m : multiplicity[i])
                if (m < 1) throw InvalidFlag("edge multiplicities must be positive");
        }
        q.multiplicity = multiplicity;
    }
    return q;
}

int dim_polygon_space(const CometQuiver& q) {
    int r = q.central_rank();
    int d = (q.loops - 1) * (r * r - 1);
    for (const auto& arm : q.arms) d += flag_dim(arm);
    return d;
}

int dim_hyperpolygon_space(const CometQuiver& q) { return 2 * dim_polygon_space(q); }

int count_gt_hamiltonians(const CometQuiver& q) {
    int r = q.central_rank();
    int complete = 0;
    for (const auto& arm : q.arms) {
        if (arm.is_complete())
            ++complete;
        else if (!arm.is_minimal())
            throw UnsupportedFlagType("arm is neither complete nor minimal");
    }
    int minimal = q.num_arms() - complete;
    return complete * r * (r - 1) / 2 + minimal * (r - 1) + (q.loops - 1) * (r * r - 1);
}

CometQuiver wildify(const CometQuiver& q) {
    if (q.arms.empty()) throw NonIdenticalArms("nothing to merge: comet has no arms");
    for (const auto& arm : q.arms)
        if (!(arm == q.arms.front())) throw NonIdenticalArms("arms must be identical to merge");
    if (!q.tame()) throw NonIdenticalArms("arms already carry multiplicities");
    CometQuiver w;
    w.arms = {q.arms.front()};
    w.loops = q.loops;
    w.multiplicity = {std::vector<int>(q.arms.front().length() - 1, q.num_arms())};
    w.central = q.central;
    return w;
}

}  // namespace cometq
