#include "cometq/moment.hpp"

#include <cmath>
#include <numeric>

namespace cometq {

namespace {

enum class Part { Real, Complex };

MomentValue moment(const CometQuiver& q, const Representation& rep, Part part) {
    validate_shapes(q, rep);
    MomentValue mv;
    const int r = q.central_rank();

    auto edge_head_term = [&](int i, int k) {
        // contribution at the head node of edge k (size ranks[k+1])
        const int n = q.arms[i].ranks[k + 1];
        cxmat s = cxmat::Zero(n, n);
        for (std::size_t c = 0; c < rep.x[i][k].size(); ++c) {
            const cxmat& x = rep.x[i][k][c];
            const cxmat& y = rep.y[i][k][c];
            if (part == Part::Real)
                s += x * x.adjoint() - y.adjoint() * y;
            else
                s += x * y;
        }
        return s;
    };
    auto edge_tail_term = [&](int i, int k) {
        // contribution at the tail node of edge k (size ranks[k])
        const int n = q.arms[i].ranks[k];
        cxmat s = cxmat::Zero(n, n);
        for (std::size_t c = 0; c < rep.x[i][k].size(); ++c) {
            const cxmat& x = rep.x[i][k][c];
            const cxmat& y = rep.y[i][k][c];
            if (part == Part::Real)
                s += x.adjoint() * x - y * y.adjoint();
            else
                s += y * x;
        }
        return s;
    };

    for (int i = 0; i < q.num_arms(); ++i) {
        const int m = q.arms[i].length();
        std::vector<cxmat> nodes;
        for (int k = 0; k + 1 < m; ++k) {
            const int n = q.arms[i].ranks[k];
            cxmat v = cxmat::Zero(n, n);
            if (k >= 1) v += edge_head_term(i, k - 1);
            v -= edge_tail_term(i, k);
            if (k == 0) v = -v;  // terminal sign convention
            nodes.push_back(std::move(v));
        }
        mv.arm.push_back(std::move(nodes));
    }

    cxmat central = cxmat::Zero(r, r);
    for (int i = 0; i < q.num_arms(); ++i) central += edge_head_term(i, q.arms[i].length() - 2);
    central = trace_free(central);
    for (int j = 0; j < q.loops; ++j) {
        const cxmat& a = rep.a[j];
        const cxmat& b = rep.b[j];
        if (part == Part::Real) {
            const cxmat as = a.adjoint();
            const cxmat bs = b.adjoint();
            central += a * as - as * a + b * bs - bs * b;
        } else {
            central += a * b - b * a;
        }
    }
    mv.central = std::move(central);
    return mv;
}

void check_level(const CometQuiver& q, const LevelVector& alpha, bool& non_generic) {
    if (static_cast<int>(alpha.size()) != q.num_arms())
        throw LengthMismatch("alpha needs one entry per arm");
    for (const auto& arm : q.arms)
        if (arm.ranks.front() != 1) throw ArmNotBased("terminal arm rank must be 1");
    for (double a : alpha)
        if (!(a > 0.0)) non_generic = true;
}

}  // namespace

MomentValue real_moment(const CometQuiver& q, const Representation& rep) {
    return moment(q, rep, Part::Real);
}

MomentValue complex_moment(const CometQuiver& q, const Representation& rep) {
    return moment(q, rep, Part::Complex);
}

int interior_node_count(const CometQuiver& q, bool printed_variant) {
    int count = 0;
    for (const auto& arm : q.arms) {
        const int m = arm.length();
        count += std::max(0, m - 2 - (printed_variant ? 1 : 0));
    }
    return count;
}

ResidualReport hyperpolygon_residual(const CometQuiver& q, const Representation& rep,
                                     const LevelVector& alpha) {
    ResidualReport rr;
    check_level(q, alpha, rr.non_generic);
    const MomentValue mu = real_moment(q, rep);
    const MomentValue nu = complex_moment(q, rep);

    double sumsq = 0.0;
    auto block = [&sumsq](const cxmat& m) {
        const double n = m.norm();
        sumsq += n * n;
        return n;
    };

    rr.eq_i = block(mu.central);
    rr.eq_I = block(nu.central);
    for (int i = 0; i < q.num_arms(); ++i) {
        std::vector<double> real_interior, complex_interior;
        for (std::size_t k = 1; k < mu.arm[i].size(); ++k) {
            real_interior.push_back(block(mu.arm[i][k]));
            complex_interior.push_back(block(nu.arm[i][k]));
        }
        rr.eq_ii.push_back(std::move(real_interior));
        rr.eq_II.push_back(std::move(complex_interior));
        rr.eq_iii.push_back(block(mu.arm[i][0] - alpha[i] * cxmat::Identity(1, 1)));
        rr.eq_III.push_back(block(nu.arm[i][0]));
    }
    rr.aggregate = std::sqrt(sumsq);
    return rr;
}

rvec residual_vector(const CometQuiver& q, const Representation& rep, const LevelVector& alpha) {
    bool non_generic = false;
    check_level(q, alpha, non_generic);
    const MomentValue mu = real_moment(q, rep);
    const MomentValue nu = complex_moment(q, rep);

    std::vector<double> out;
    auto block = [&out](const cxmat& m) {
        for (int p = 0; p < m.rows(); ++p) {
            for (int qq = 0; qq < m.cols(); ++qq) {
                out.push_back(m(p, qq).real());
                out.push_back(m(p, qq).imag());
            }
        }
    };

    block(mu.central);
    block(nu.central);
    for (int i = 0; i < q.num_arms(); ++i) {
        for (std::size_t k = 1; k < mu.arm[i].size(); ++k) {
            block(mu.arm[i][k]);
            block(nu.arm[i][k]);
        }
        block(mu.arm[i][0] - alpha[i] * cxmat::Identity(1, 1));
        block(nu.arm[i][0]);
    }
    return Eigen::Map<rvec>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Representation wild_transport(const CometQuiver& q, const Representation& rep) {
    validate_shapes(q, rep);
    const CometQuiver w = wildify(q);
    Representation out;
    const int edges = q.arms[0].length() - 1;
    std::vector<std::vector<cxmat>> wx(edges), wy(edges);
    for (int k = 0; k < edges; ++k) {
        for (int i = 0; i < q.num_arms(); ++i) {
            wx[k].push_back(rep.x[i][k][0]);
            wy[k].push_back(rep.y[i][k][0]);
        }
    }
    out.x.push_back(std::move(wx));
    out.y.push_back(std::move(wy));
    out.a = rep.a;
    out.b = rep.b;
    validate_shapes(w, out);
    return out;
}

ResidualReport wild_specialization_check(const CometQuiver& q, const Representation& rep,
                                         const LevelVector& alpha) {
    if (static_cast<int>(alpha.size()) != q.num_arms())
        throw LengthMismatch("alpha needs one entry per arm");
    const CometQuiver w = wildify(q);
    const Representation wrep = wild_transport(q, rep);
    const double merged = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    return hyperpolygon_residual(w, wrep, {merged});
}

}  // namespace cometq
