#include "cometq/geometry.hpp"

#include <cmath>

namespace cometq {

PolygonFigure polygon_sides(const CometQuiver& q, const Representation& rep) {
    validate_shapes(q, rep);
    PolygonFigure fig;
    const int r = q.central_rank();
    cxmat sum = cxmat::Zero(r, r);
    for (int i = 0; i < q.num_arms(); ++i) {
        const int last = q.arms[i].length() - 2;
        cxmat side = cxmat::Zero(r, r);
        for (std::size_t c = 0; c < rep.x[i][last].size(); ++c) {
            const cxmat& x = rep.x[i][last][c];
            const cxmat& y = rep.y[i][last][c];
            side += x * x.adjoint() - y.adjoint() * y;
        }
        side = trace_free(side);
        sum += side;
        fig.side_lengths.push_back(side.norm());
        fig.sides.push_back(std::move(side));
    }
    for (int j = 0; j < q.loops; ++j) {
        const cxmat as = rep.a[j].adjoint();
        const cxmat bs = rep.b[j].adjoint();
        cxmat side = rep.a[j] * as - as * rep.a[j] + rep.b[j] * bs - bs * rep.b[j];
        sum += side;
        fig.side_lengths.push_back(side.norm());
        fig.sides.push_back(std::move(side));
    }
    fig.closure_defect = sum.norm();
    return fig;
}

namespace {

cxmat arm_residue(const CometQuiver& q, const Representation& rep, int i) {
    const int r = q.central_rank();
    const int last = q.arms[i].length() - 2;
    cxmat sum = cxmat::Zero(r, r);
    for (std::size_t c = 0; c < rep.x[i][last].size(); ++c)
        sum += rep.x[i][last][c] * rep.y[i][last][c];
    return trace_free(sum);
}

cxmat loop_commutators(const Representation& rep, int r) {
    cxmat sum = cxmat::Zero(r, r);
    for (std::size_t j = 0; j < rep.a.size(); ++j)
        sum += rep.b[j] * rep.a[j] - rep.a[j] * rep.b[j];
    return sum;
}

}  // namespace

HiggsData higgs_data(const CometQuiver& q, const Representation& rep,
                     const std::vector<cx>& punctures) {
    validate_shapes(q, rep);
    if (static_cast<int>(punctures.size()) != q.num_arms())
        throw LengthMismatch("one puncture per arm required");
    for (std::size_t i = 0; i < punctures.size(); ++i) {
        if (!std::isfinite(punctures[i].real()) || !std::isfinite(punctures[i].imag()))
            throw DuplicatePunctures("punctures must be finite");
        for (std::size_t j = i + 1; j < punctures.size(); ++j)
            if (punctures[i] == punctures[j]) throw DuplicatePunctures("punctures must be distinct");
    }
    HiggsData data;
    data.punctures = punctures;
    const int r = q.central_rank();
    for (int i = 0; i < q.num_arms(); ++i) {
        cxmat R = arm_residue(q, rep, i);
        const double base = R.norm();
        int order = 1;
        double defect = base;
        if (base > 0.0) {
            cxmat power = R;
            order = r;
            for (int p = 2; p <= r; ++p) {
                power = power * R;
                const double rel = power.norm() / std::pow(base, p);
                if (rel < 1e-8 || p == r) {
                    order = p;
                    defect = rel;
                    break;
                }
            }
        } else {
            defect = 0.0;  // zero residue: already nilpotent at first power
        }
        data.residues.push_back(std::move(R));
        data.nilpotency_orders.push_back(order);
        data.nilpotency_defects.push_back(defect);
    }
    data.loop_commutator_sum = loop_commutators(rep, r);
    cxmat total = -data.loop_commutator_sum;
    for (const auto& R : data.residues) total += R;
    data.residue_identity_defect = total.norm();
    return data;
}

double residue_sum_check(const CometQuiver& q, const Representation& rep) {
    validate_shapes(q, rep);
    const int r = q.central_rank();
    cxmat total = -loop_commutators(rep, r);
    for (int i = 0; i < q.num_arms(); ++i) total += arm_residue(q, rep, i);
    return total.norm();
}

cxmat higgs_eval(const HiggsData& data, cx z) {
    if (data.residues.empty()) throw LengthMismatch("no residues to evaluate");
    const int r = static_cast<int>(data.residues[0].rows());
    cxmat value = cxmat::Zero(r, r);
    for (std::size_t i = 0; i < data.residues.size(); ++i) {
        const cx d = z - data.punctures[i];
        if (std::abs(d) < 1e-13 * (1.0 + std::abs(data.punctures[i])))
            throw EvaluationAtPole("evaluation point hits a puncture");
        value += data.residues[i] / d;
    }
    return value;
}

std::vector<cx> char_coefficients(const cxmat& m) {
    if (m.rows() != m.cols()) throw ShapeMismatch("characteristic coefficients need a square matrix");
    const int k = static_cast<int>(m.rows());
    Eigen::ComplexEigenSolver<cxmat> es(m, false);
    const cxvec ev = es.eigenvalues();
    // expand prod (lambda - ev_i); poly[j] is the coefficient of lambda^{k-j}
    std::vector<cx> poly(static_cast<std::size_t>(k) + 1, cx(0.0, 0.0));
    poly[0] = cx(1.0, 0.0);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j >= 1; --j) poly[j] -= ev[i] * poly[j - 1];
    return {poly.begin() + 1, poly.end()};
}

}  // namespace cometq
