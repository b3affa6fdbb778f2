#include "cometq/integrable.hpp"

#include <cmath>

#include "cometq/geometry.hpp"

namespace cometq {

namespace {

void require_tame(const CometQuiver& q) {
    if (!q.tame()) throw UnsupportedFlagType("Hamiltonian families are defined for tame comets");
}

// edge of the arm whose head rank is the smallest >= level
int edge_for_level(const CometQuiver& q, int arm, int level) {
    const auto& ranks = q.arms[arm].ranks;
    for (int k = 0; k + 1 < static_cast<int>(ranks.size()); ++k)
        if (ranks[k + 1] >= level) return k;
    throw InvalidLevel("level exceeds the central rank");
}

cxmat product_matrix(const CometQuiver& q, const Representation& rep, int arm, int edge,
                     const GtOptions& opts) {
    cxmat m = trace_free(rep.x[arm][edge][0] * rep.y[arm][edge][0]);
    if (opts.normal_form) m = opts.normal_form(m);
    return m;
}

}  // namespace

cx evaluate_hamiltonian(const CometQuiver& q, const Representation& rep,
                        const HamiltonianDescriptor& desc, const GtOptions& opts) {
    require_tame(q);
    validate_shapes(q, rep);
    switch (desc.kind) {
        case HamiltonianKind::arm_block_trace: {
            if (desc.arm < 0 || desc.arm >= q.num_arms()) throw InvalidLevel("arm index out of range");
            if (desc.level < 2 || desc.level > q.central_rank())
                throw InvalidLevel("block level must lie in 2..r");
            const int edge = edge_for_level(q, desc.arm, desc.level);
            const cxmat m = product_matrix(q, rep, desc.arm, edge, opts);
            const int bs = desc.level - 1;
            if (desc.degree < 1 || desc.degree > bs) throw InvalidLevel("degree must lie in 1..level-1");
            const std::vector<cx> coeff = char_coefficients(m.topLeftCorner(bs, bs));
            const double sign = (desc.degree % 2 == 0) ? 1.0 : -1.0;
            return sign * coeff[desc.degree - 1];
        }
        case HamiltonianKind::minimal_corner: {
            if (desc.arm < 0 || desc.arm >= q.num_arms()) throw InvalidLevel("arm index out of range");
            const cxmat m = product_matrix(q, rep, desc.arm, 0, opts);
            return m(0, m.cols() - 1);
        }
        case HamiltonianKind::loop_entry: {
            if (desc.loop < 0 || desc.loop >= q.loops) throw InvalidLevel("loop index out of range");
            return rep.b[desc.loop](desc.row, desc.col);
        }
    }
    throw Error("unreachable");
}

HoloFn make_hamiltonian(const CometQuiver& q, const HamiltonianDescriptor& desc,
                        const GtOptions& opts) {
    return [q, desc, opts](const Representation& rep) {
        return evaluate_hamiltonian(q, rep, desc, opts);
    };
}

namespace {

std::vector<HamiltonianDescriptor> arm_family(const CometQuiver& q, int arm) {
    std::vector<HamiltonianDescriptor> fam;
    if (q.arms[arm].is_complete()) {
        for (int level = 2; level <= q.central_rank(); ++level)
            for (int degree = 1; degree <= level - 1; ++degree)
                fam.push_back({HamiltonianKind::arm_block_trace, arm, level, degree, -1, 0, 0});
    } else if (q.arms[arm].is_minimal()) {
        fam.push_back({HamiltonianKind::minimal_corner, arm, 0, 0, -1, 0, 0});
    } else {
        throw UnsupportedFlagType("arm is neither complete nor minimal");
    }
    return fam;
}

std::vector<HamiltonianDescriptor> loop_family(const CometQuiver& q, int loop) {
    std::vector<HamiltonianDescriptor> fam;
    const int r = q.central_rank();
    for (int p = 0; p < r; ++p)
        for (int c = 0; c < r; ++c)
            if (!(p == r - 1 && c == r - 1))
                fam.push_back({HamiltonianKind::loop_entry, -1, 0, 0, loop, p, c});
    return fam;
}

}  // namespace

HamiltonianSet gt_corollary(const CometQuiver& q) {
    require_tame(q);
    HamiltonianSet set;
    set.policy = GtPolicy::corollary;
    set.tally = count_gt_hamiltonians(q);
    const int first_arm = (q.loops == 0) ? q.central_rank() + 1 : 0;  // 0-based
    for (int i = first_arm; i < q.num_arms(); ++i)
        for (const auto& d : arm_family(q, i)) set.members.push_back(d);
    for (int j = 1; j < q.loops; ++j)
        for (const auto& d : loop_family(q, j)) set.members.push_back(d);
    set.corollary_count = static_cast<int>(set.members.size());
    return set;
}

namespace {

// 2 x (restricted dim) real differential block of a holomorphic function,
// rebuilt from the complex canonical gradient via the Cauchy-Riemann pairing.
rmat restricted_rows(const cxvec& grad, const rmat& tangent) {
    rmat rows(2, grad.size() * 2);
    for (Eigen::Index i = 0; i < grad.size(); ++i) {
        rows(0, 2 * i) = grad[i].real();
        rows(0, 2 * i + 1) = -grad[i].imag();
        rows(1, 2 * i) = grad[i].imag();
        rows(1, 2 * i + 1) = grad[i].real();
    }
    return rows * tangent;
}

}  // namespace

HamiltonianSet gt_tally_greedy(const CometQuiver& q, const Representation& rep,
                               const LevelVector& alpha, const GtOptions& opts) {
    require_tame(q);
    HamiltonianSet set;
    set.policy = GtPolicy::tally_greedy;
    set.tally = count_gt_hamiltonians(q);
    set.corollary_count = static_cast<int>(gt_corollary(q).members.size());

    std::vector<HamiltonianDescriptor> candidates;
    for (int i = 0; i < q.num_arms(); ++i) {
        for (const auto& d : arm_family(q, i)) candidates.push_back(d);
        if (q.arms[i].is_minimal()) {
            // top up the corner with principal-block coefficients
            for (int level = 2; level <= q.central_rank(); ++level)
                for (int degree = 1; degree <= level - 1; ++degree)
                    candidates.push_back({HamiltonianKind::arm_block_trace, i, level, degree, -1, 0, 0});
        }
    }
    for (int j = 1; j < q.loops; ++j)
        for (const auto& d : loop_family(q, j)) candidates.push_back(d);
    if (q.loops >= 1)
        for (const auto& d : loop_family(q, 0)) candidates.push_back(d);

    const FlatLayout layout(q);
    const rvec at = layout.flatten(rep);
    const rmat tangent = physical_tangent_basis(q, rep, alpha);

    rmat stacked(0, tangent.cols());
    int current_rank = 0;
    for (const auto& cand : candidates) {
        if (static_cast<int>(set.members.size()) == set.tally) break;
        const cxvec grad = canonical_gradient(layout, make_hamiltonian(q, cand, opts), at);
        rmat rows = restricted_rows(grad, tangent);
        const double norm = rows.norm();
        if (norm < 1e-12) continue;
        rows /= norm;
        rmat trial(stacked.rows() + 2, tangent.cols());
        trial << stacked, rows;
        const RankAnalysis ra = numerical_rank(trial, 1e-6);  // above the finite-difference noise floor
        if (ra.rank >= current_rank + 2) {
            stacked = std::move(trial);
            current_rank = ra.rank;
            set.members.push_back(cand);
        }
    }
    set.complete = static_cast<int>(set.members.size()) == set.tally;
    return set;
}

HamiltonianSet gt_hamiltonians(const CometQuiver& q, GtPolicy policy, const Representation* rep,
                               const LevelVector* alpha) {
    if (policy == GtPolicy::corollary) return gt_corollary(q);
    if (!rep || !alpha)
        throw NotOnShell("tally_greedy selection needs a solved point");
    return gt_tally_greedy(q, *rep, *alpha);
}

cxvec canonical_gradient(const FlatLayout& layout, const HoloFn& f, const rvec& at) {
    cxvec grad(layout.complex_dim());
    rvec v = at;
    for (int i = 0; i < layout.complex_dim(); ++i) {
        const double mag = std::hypot(at[2 * i], at[2 * i + 1]);
        const double h = 1e-5 * (1.0 + mag);
        const double saved = v[2 * i];
        v[2 * i] = saved + h;
        const cx fp = f(layout.unflatten(v));
        v[2 * i] = saved - h;
        const cx fm = f(layout.unflatten(v));
        v[2 * i] = saved;
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

cx poisson_bracket(const FlatLayout& layout, const HoloFn& f, const HoloFn& g, const rvec& at) {
    const cxvec gf = canonical_gradient(layout, f, at);
    const cxvec gg = canonical_gradient(layout, g, at);
    cx sum(0.0, 0.0);
    for (const auto& [pos, mom] : layout.canonical_pairs())
        sum += gf[pos] * gg[mom] - gf[mom] * gg[pos];
    return sum;
}

CommutationReport commutation_matrix(const CometQuiver& q, const Representation& rep,
                                     const LevelVector& alpha, const HamiltonianSet& set,
                                     bool require_on_shell, const GtOptions& opts) {
    CommutationReport report;
    report.residual = hyperpolygon_residual(q, rep, alpha).aggregate;
    report.on_shell = report.residual <= 1e-8;
    if (require_on_shell && !report.on_shell)
        throw NotOnShell("commutation matrix requested at an off-shell point");

    const FlatLayout layout(q);
    const rvec at = layout.flatten(rep);
    const int n = static_cast<int>(set.members.size());
    std::vector<cxvec> grads;
    grads.reserve(n);
    for (const auto& d : set.members)
        grads.push_back(canonical_gradient(layout, make_hamiltonian(q, d, opts), at));

    report.brackets = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        for (int l = k + 1; l < n; ++l) {
            cx sum(0.0, 0.0);
            for (const auto& [pos, mom] : layout.canonical_pairs())
                sum += grads[k][pos] * grads[l][mom] - grads[k][mom] * grads[l][pos];
            report.brackets(k, l) = sum;
            report.brackets(l, k) = -sum;
            const double scale = std::max(1.0, grads[k].norm() * grads[l].norm());
            report.max_normalized = std::max(report.max_normalized, std::abs(sum) / scale);
        }
    }
    return report;
}

IndependenceReport independence_rank(const CometQuiver& q, const Representation& rep,
                                     const LevelVector& alpha, const HamiltonianSet& set,
                                     const GtOptions& opts) {
    const double residual = hyperpolygon_residual(q, rep, alpha).aggregate;
    if (residual > 1e-8) throw NotOnShell("independence rank requested at an off-shell point");
    const DimensionReport dr = dimension_report(q, rep, alpha);
    if (dr.singular) throw SingularPoint("rank gaps too weak for a trustworthy quotient rank");

    const FlatLayout layout(q);
    const rvec at = layout.flatten(rep);
    const rmat tangent = physical_tangent_basis(q, rep, alpha);

    rmat stacked(2 * static_cast<Eigen::Index>(set.members.size()), tangent.cols());
    for (std::size_t k = 0; k < set.members.size(); ++k) {
        const cxvec grad = canonical_gradient(layout, make_hamiltonian(q, set.members[k], opts), at);
        rmat rows = restricted_rows(grad, tangent);
        const double norm = rows.norm();
        if (norm > 0) rows /= norm;  // scale-free rank
        stacked.middleRows(2 * static_cast<Eigen::Index>(k), 2) = rows;
    }
    const RankAnalysis ra = numerical_rank(stacked, 1e-6);  // above the finite-difference noise floor
    IndependenceReport rep_out;
    rep_out.restricted_real_rank = ra.rank;
    rep_out.rank = ra.rank / 2;
    rep_out.odd_rank = (ra.rank % 2) != 0;
    rep_out.gap = ra.gap;
    rep_out.tally = count_gt_hamiltonians(q);
    return rep_out;
}

}  // namespace cometq
