#include "cometq/rep.hpp"

#include <cmath>
#include <numbers>

#include "cometq/rng.hpp"

namespace cometq {

namespace {

cxmat random_cxmat(Rng& rng, int rows, int cols, double scale) {
    cxmat m(rows, cols);
    for (int p = 0; p < rows; ++p)
        for (int q = 0; q < cols; ++q)
            m(p, q) = cx(scale * rng.next_gaussian(), scale * rng.next_gaussian());
    return m;
}

// Haar-ish unitary: QR of a gaussian matrix with the R diagonal phases folded in.
cxmat random_unitary(Rng& rng, int n) {
    cxmat g = random_cxmat(rng, n, n, 1.0);
    Eigen::HouseholderQR<cxmat> qr(g);
    cxmat qmat = qr.householderQ();
    cxmat rmat_ = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        cx d = rmat_(j, j);
        qmat.col(j) *= (std::abs(d) > 0) ? d / std::abs(d) : cx(1.0, 0.0);
    }
    return qmat;
}

}  // namespace

Representation zero_representation(const CometQuiver& q) {
    Representation rep;
    for (int i = 0; i < q.num_arms(); ++i) {
        const auto& ranks = q.arms[i].ranks;
        std::vector<std::vector<cxmat>> ax, ay;
        for (int k = 0; k + 1 < q.arms[i].length(); ++k) {
            std::vector<cxmat> ex(q.multiplicity[i][k], cxmat::Zero(ranks[k + 1], ranks[k]));
            std::vector<cxmat> ey(q.multiplicity[i][k], cxmat::Zero(ranks[k], ranks[k + 1]));
            ax.push_back(std::move(ex));
            ay.push_back(std::move(ey));
        }
        rep.x.push_back(std::move(ax));
        rep.y.push_back(std::move(ay));
    }
    const int r = q.central_rank();
    rep.a.assign(q.loops, cxmat::Zero(r, r));
    rep.b.assign(q.loops, cxmat::Zero(r, r));
    return rep;
}

Representation random_representation(const CometQuiver& q, std::uint64_t seed, double scale) {
    Rng rng(seed);
    Representation rep = zero_representation(q);
    for (int i = 0; i < q.num_arms(); ++i) {
        for (std::size_t k = 0; k < rep.x[i].size(); ++k) {
            for (std::size_t c = 0; c < rep.x[i][k].size(); ++c) {
                rep.x[i][k][c] = random_cxmat(rng, rep.x[i][k][c].rows(), rep.x[i][k][c].cols(), scale);
                rep.y[i][k][c] = random_cxmat(rng, rep.y[i][k][c].rows(), rep.y[i][k][c].cols(), scale);
            }
        }
    }
    const int r = q.central_rank();
    for (int j = 0; j < q.loops; ++j) {
        rep.a[j] = trace_free(random_cxmat(rng, r, r, scale));
        rep.b[j] = trace_free(random_cxmat(rng, r, r, scale));
    }
    return rep;
}

void validate_shapes(const CometQuiver& q, const Representation& rep) {
    auto fail = [] { throw ShapeMismatch("representation does not fit quiver"); };
    if (static_cast<int>(rep.x.size()) != q.num_arms() || rep.y.size() != rep.x.size()) fail();
    for (int i = 0; i < q.num_arms(); ++i) {
        const auto& ranks = q.arms[i].ranks;
        const int edges = q.arms[i].length() - 1;
        if (static_cast<int>(rep.x[i].size()) != edges || static_cast<int>(rep.y[i].size()) != edges) fail();
        for (int k = 0; k < edges; ++k) {
            if (static_cast<int>(rep.x[i][k].size()) != q.multiplicity[i][k]) fail();
            if (static_cast<int>(rep.y[i][k].size()) != q.multiplicity[i][k]) fail();
            for (const auto& m : rep.x[i][k])
                if (m.rows() != ranks[k + 1] || m.cols() != ranks[k]) fail();
            for (const auto& m : rep.y[i][k])
                if (m.rows() != ranks[k] || m.cols() != ranks[k + 1]) fail();
        }
    }
    const int r = q.central_rank();
    if (static_cast<int>(rep.a.size()) != q.loops || static_cast<int>(rep.b.size()) != q.loops) fail();
    for (int j = 0; j < q.loops; ++j) {
        if (rep.a[j].rows() != r || rep.a[j].cols() != r) fail();
        if (rep.b[j].rows() != r || rep.b[j].cols() != r) fail();
    }
}

double max_trace_defect(const Representation& rep) {
    double d = 0.0;
    for (const auto& m : rep.a) d = std::max(d, std::abs(m.trace()));
    for (const auto& m : rep.b) d = std::max(d, std::abs(m.trace()));
    return d;
}

FlatLayout::FlatLayout(const CometQuiver& q) : q_(q) {
    int idx = 0;
    for (int i = 0; i < q.num_arms(); ++i) {
        const auto& ranks = q.arms[i].ranks;
        for (int k = 0; k + 1 < q.arms[i].length(); ++k) {
            const int rows = ranks[k + 1], cols = ranks[k];
            for (int c = 0; c < q.multiplicity[i][k]; ++c) {
                const int xbase = idx;
                idx += rows * cols;
                const int ybase = idx;
                idx += rows * cols;
                for (int p = 0; p < rows; ++p)
                    for (int qq = 0; qq < cols; ++qq)
                        pairs_.emplace_back(xbase + p * cols + qq, ybase + qq * rows + p);
            }
        }
    }
    const int r = q.central_rank();
    if (q.loops > 0) basis_ = trace_free_basis(r);
    const int nb = r * r - 1;
    for (int j = 0; j < q.loops; ++j) {
        const int abase = idx;
        idx += nb;
        const int bbase = idx;
        idx += nb;
        for (int t = 0; t < nb; ++t) pairs_.emplace_back(abase + t, bbase + t);
    }
    complex_dim_ = idx;
}

rvec FlatLayout::flatten(const Representation& rep) const {
    validate_shapes(q_, rep);
    rvec v(real_dim());
    int idx = 0;
    auto put = [&](cx z) {
        v[2 * idx] = z.real();
        v[2 * idx + 1] = z.imag();
        ++idx;
    };
    auto put_mat = [&](const cxmat& m) {
        for (int p = 0; p < m.rows(); ++p)
            for (int qq = 0; qq < m.cols(); ++qq) put(m(p, qq));
    };
    for (int i = 0; i < q_.num_arms(); ++i) {
        for (std::size_t k = 0; k < rep.x[i].size(); ++k) {
            for (std::size_t c = 0; c < rep.x[i][k].size(); ++c) {
                put_mat(rep.x[i][k][c]);
                put_mat(rep.y[i][k][c]);
            }
        }
    }
    for (int j = 0; j < q_.loops; ++j) {
        for (const auto& bm : basis_) put((rep.a[j] * bm).trace());
        for (const auto& bm : basis_) put((rep.b[j] * bm).trace());
    }
    return v;
}

Representation FlatLayout::unflatten(const rvec& v) const {
    if (v.size() != real_dim()) throw ShapeMismatch("flat vector has wrong length");
    Representation rep = zero_representation(q_);
    int idx = 0;
    auto get = [&]() {
        cx z(v[2 * idx], v[2 * idx + 1]);
        ++idx;
        return z;
    };
    auto get_mat = [&](cxmat& m) {
        for (int p = 0; p < m.rows(); ++p)
            for (int qq = 0; qq < m.cols(); ++qq) m(p, qq) = get();
    };
    for (int i = 0; i < q_.num_arms(); ++i) {
        for (std::size_t k = 0; k < rep.x[i].size(); ++k) {
            for (std::size_t c = 0; c < rep.x[i][k].size(); ++c) {
                get_mat(rep.x[i][k][c]);
                get_mat(rep.y[i][k][c]);
            }
        }
    }
    const int r = q_.central_rank();
    for (int j = 0; j < q_.loops; ++j) {
        rep.a[j] = cxmat::Zero(r, r);
        for (const auto& bm : basis_) rep.a[j] += get() * bm;
        rep.b[j] = cxmat::Zero(r, r);
        for (const auto& bm : basis_) rep.b[j] += get() * bm;
    }
    return rep;
}

GaugeElement identity_gauge(const CometQuiver& q) {
    GaugeElement g;
    for (int i = 0; i < q.num_arms(); ++i) {
        std::vector<cxmat> nodes;
        for (int k = 0; k + 1 < q.arms[i].length(); ++k) {
            const int n = q.arms[i].ranks[k];
            nodes.push_back(cxmat::Identity(n, n));
        }
        g.node.push_back(std::move(nodes));
    }
    const int r = q.central_rank();
    g.central = cxmat::Identity(r, r);
    return g;
}

GaugeElement random_unitary_gauge(const CometQuiver& q, std::uint64_t seed) {
    Rng rng(seed);
    GaugeElement g = identity_gauge(q);
    for (int i = 0; i < q.num_arms(); ++i)
        for (std::size_t k = 0; k < g.node[i].size(); ++k)
            g.node[i][k] = random_unitary(rng, g.node[i][k].rows());
    const int r = q.central_rank();
    if (r > 0) {
        cxmat u = random_unitary(rng, r);
        // pull the determinant phase out to land in the special unitary group
        cx det = u.determinant();
        u *= std::polar(1.0, -std::arg(det) / r);
        g.central = u;
    }
    return g;
}

Representation apply_gauge(const CometQuiver& q, const GaugeElement& g, const Representation& rep) {
    validate_shapes(q, rep);
    Representation out = rep;
    for (int i = 0; i < q.num_arms(); ++i) {
        const int edges = q.arms[i].length() - 1;
        for (int k = 0; k < edges; ++k) {
            const cxmat& tail = g.node[i][k];
            const cxmat head = (k + 1 < edges) ? g.node[i][k + 1] : g.central;
            const cxmat tail_inv = tail.inverse();
            const cxmat head_inv = head.inverse();
            for (std::size_t c = 0; c < rep.x[i][k].size(); ++c) {
                out.x[i][k][c] = head * rep.x[i][k][c] * tail_inv;
                out.y[i][k][c] = tail * rep.y[i][k][c] * head_inv;
            }
        }
    }
    const cxmat central_inv = g.central.inverse();
    for (std::size_t j = 0; j < rep.a.size(); ++j) {
        out.a[j] = g.central * rep.a[j] * central_inv;
        out.b[j] = g.central * rep.b[j] * central_inv;
    }
    return out;
}

namespace {

Representation slotwise(const Representation& rep,
                        cxmat (*fx)(const cxmat&, const cxmat&),
                        cxmat (*fy)(const cxmat&, const cxmat&)) {
    Representation out = rep;
    for (std::size_t i = 0; i < rep.x.size(); ++i) {
        for (std::size_t k = 0; k < rep.x[i].size(); ++k) {
            for (std::size_t c = 0; c < rep.x[i][k].size(); ++c) {
                out.x[i][k][c] = fx(rep.x[i][k][c], rep.y[i][k][c]);
                out.y[i][k][c] = fy(rep.x[i][k][c], rep.y[i][k][c]);
            }
        }
    }
    for (std::size_t j = 0; j < rep.a.size(); ++j) {
        out.a[j] = fx(rep.a[j], rep.b[j]);
        out.b[j] = fy(rep.a[j], rep.b[j]);
    }
    return out;
}

}  // namespace

Representation quaternion_apply(Quaternion s, const Representation& rep) {
    const cx im(0.0, 1.0);
    switch (s) {
        case Quaternion::I:
            return slotwise(
                rep, [](const cxmat& x, const cxmat&) -> cxmat { return cx(0, 1) * x; },
                [](const cxmat&, const cxmat& y) -> cxmat { return cx(0, 1) * y; });
        case Quaternion::J:
            return slotwise(
                rep, [](const cxmat&, const cxmat& y) -> cxmat { return -y.adjoint(); },
                [](const cxmat& x, const cxmat&) -> cxmat { return x.adjoint(); });
        case Quaternion::K:
            return slotwise(
                rep, [](const cxmat&, const cxmat& y) -> cxmat { return cx(0, -1) * y.adjoint(); },
                [](const cxmat& x, const cxmat&) -> cxmat { return cx(0, 1) * x.adjoint(); });
    }
    throw Error("unreachable");
}

Representation circle_action(const Representation& rep, double theta) {
    // the half-turn is the sign involution; keep it exact
    const cx phase = (theta == std::numbers::pi) ? cx(-1.0, 0.0) : std::polar(1.0, theta);
    Representation out = rep;
    for (std::size_t i = 0; i < rep.y.size(); ++i)
        for (std::size_t k = 0; k < rep.y[i].size(); ++k)
            for (std::size_t c = 0; c < rep.y[i][k].size(); ++c) out.y[i][k][c] = phase * rep.y[i][k][c];
    for (std::size_t j = 0; j < rep.b.size(); ++j) out.b[j] = phase * rep.b[j];
    return out;
}

namespace {

// Anti-Hermitian basis of u(n): i E_pp, then for p < q the pair
// (E_pq - E_qp) and i(E_pq + E_qp).
std::vector<cxmat> antihermitian_basis(int n) {
    std::vector<cxmat> basis;
    for (int p = 0; p < n; ++p) {
        cxmat m = cxmat::Zero(n, n);
        m(p, p) = cx(0, 1);
        basis.push_back(m);
    }
    for (int p = 0; p < n; ++p) {
        for (int q = p + 1; q < n; ++q) {
            cxmat m = cxmat::Zero(n, n);
            m(p, q) = 1;
            m(q, p) = -1;
            basis.push_back(m);
            m = cxmat::Zero(n, n);
            m(p, q) = cx(0, 1);
            m(q, p) = cx(0, 1);
            basis.push_back(m);
        }
    }
    return basis;
}

// su(r): i times the trace-free Hermitian basis.
std::vector<cxmat> special_antihermitian_basis(int r) {
    std::vector<cxmat> basis = trace_free_basis(r);
    for (auto& m : basis) m = cx(0, 1) * m;
    return basis;
}

}  // namespace

std::vector<rvec> gauge_orbit_tangent_basis(const CometQuiver& q, const Representation& rep) {
    validate_shapes(q, rep);
    FlatLayout layout(q);
    std::vector<rvec> out;

    // infinitesimal action of xi supported at a single node
    auto push_arm_node = [&](int arm, int node, const cxmat& xi) {
        Representation d = zero_representation(q);
        // edge node-1 has this node as head, edge node has it as tail
        if (node >= 1) {
            for (std::size_t c = 0; c < rep.x[arm][node - 1].size(); ++c) {
                d.x[arm][node - 1][c] = xi * rep.x[arm][node - 1][c];
                d.y[arm][node - 1][c] = -rep.y[arm][node - 1][c] * xi;
            }
        }
        for (std::size_t c = 0; c < rep.x[arm][node].size(); ++c) {
            d.x[arm][node][c] -= rep.x[arm][node][c] * xi;
            d.y[arm][node][c] += xi * rep.y[arm][node][c];
        }
        out.push_back(layout.flatten(d));
    };

    for (int i = 0; i < q.num_arms(); ++i) {
        for (int k = 0; k + 1 < q.arms[i].length(); ++k) {
            for (const auto& xi : antihermitian_basis(q.arms[i].ranks[k])) push_arm_node(i, k, xi);
        }
    }

    const int r = q.central_rank();
    if (r > 0) {
        for (const auto& xi : special_antihermitian_basis(r)) {
            Representation d = zero_representation(q);
            for (int i = 0; i < q.num_arms(); ++i) {
                const int last = q.arms[i].length() - 2;
                for (std::size_t c = 0; c < rep.x[i][last].size(); ++c) {
                    d.x[i][last][c] = xi * rep.x[i][last][c];
                    d.y[i][last][c] = -rep.y[i][last][c] * xi;
                }
            }
            for (int j = 0; j < q.loops; ++j) {
                d.a[j] = xi * rep.a[j] - rep.a[j] * xi;
                d.b[j] = xi * rep.b[j] - rep.b[j] * xi;
            }
            out.push_back(layout.flatten(d));
        }
    }
    return out;
}

}  // namespace cometq
