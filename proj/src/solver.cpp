#include "cometq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <numeric>
#include <thread>

#include "cometq/rng.hpp"

namespace cometq {

namespace {

using ResidualFn = std::function<rvec(const rvec&)>;

rmat central_difference_jacobian(const ResidualFn& f, const rvec& x) {
    const double h = 1.0;  // exact for the quadratic residual structure
    rmat J(f(x).size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        rvec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return J;
}

struct LmOutcome {
    rvec x;
    double residual = 0.0;
    bool converged = false;
    int iterations = 0;
};

LmOutcome levenberg_marquardt(const ResidualFn& f, rvec x, double tol, int max_iter) {
    LmOutcome out;
    rvec r = f(x);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    int iter = 0;
    while (iter < max_iter && std::sqrt(cost) > tol) {
        ++iter;
        const rmat J = central_difference_jacobian(f, x);
        const rmat A = J.transpose() * J;
        const rvec g = J.transpose() * r;
        bool accepted = false;
        while (lambda < 1e15) {
            rmat damped = A;
            damped.diagonal().array() += lambda;
            const rvec step = Eigen::LDLT<rmat>(damped).solve(-g);
            const rvec x2 = x + step;
            const rvec r2 = f(x2);
            const double cost2 = r2.squaredNorm();
            if (cost2 < cost) {
                x = x2;
                r = r2;
                cost = cost2;
                lambda = std::max(lambda * 0.35, 1e-14);
                accepted = true;
                break;
            }
            lambda *= 7.0;
        }
        if (!accepted) break;  // stalled: damping exhausted without descent
    }
    out.x = std::move(x);
    out.residual = std::sqrt(cost);
    out.converged = out.residual <= tol;
    out.iterations = iter;
    return out;
}

int thread_budget() {
    if (const char* env = std::getenv("COMETQ_THREADS")) {
        const int k = std::atoi(env);
        if (k > 0) return k;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs `starts` independent LM descents concurrently and picks the best by
// (residual, index); per-start state is isolated so the schedule cannot leak
// into the result.
LmOutcome multi_start(const ResidualFn& f, const std::function<rvec(std::uint64_t)>& init,
                      std::uint64_t seed, double tol, int max_iter, int starts, int& best_index) {
    std::vector<LmOutcome> outcomes(starts);
    const int budget = std::max(1, thread_budget());
    for (int base = 0; base < starts; base += budget) {
        const int batch = std::min(budget, starts - base);
        std::vector<std::future<LmOutcome>> futures;
        futures.reserve(batch);
        for (int s = 0; s < batch; ++s) {
            const std::uint64_t child = Rng::child_seed(seed, static_cast<std::uint64_t>(base + s));
            futures.push_back(std::async(std::launch::async, [&f, &init, child, tol, max_iter] {
                return levenberg_marquardt(f, init(child), tol, max_iter);
            }));
        }
        for (int s = 0; s < batch; ++s) outcomes[base + s] = futures[s].get();
    }
    best_index = 0;
    for (int s = 1; s < starts; ++s)
        if (outcomes[s].residual < outcomes[best_index].residual) best_index = s;
    return outcomes[best_index];
}

void check_solver_level(const CometQuiver& q, const LevelVector& alpha) {
    if (static_cast<int>(alpha.size()) != q.num_arms())
        throw LengthMismatch("alpha needs one entry per arm");
    for (double a : alpha)
        if (!(a > 0.0)) throw InvalidLevel("alpha entries must be positive");
}

std::vector<std::string> solver_warnings(const CometQuiver& q, const LevelVector&) {
    std::vector<std::string> w;
    const int r = q.central_rank();
    if (q.loops == 0 && q.num_arms() < r + 1) {
        bool all_minimal = true;
        for (const auto& arm : q.arms)
            if (!arm.is_minimal()) all_minimal = false;
        if (all_minimal && q.num_arms() > 0)
            w.push_back("minimal comet with no loops has fewer than r+1 arms; expect an empty space");
    }
    if (empty_likely(q)) w.push_back("predicted dimension is negative; the space is likely empty");
    return w;
}

double init_scale(const LevelVector& alpha) {
    if (alpha.empty()) return 1.0;
    return std::sqrt(std::accumulate(alpha.begin(), alpha.end(), 0.0) / alpha.size());
}

}  // namespace

void SolveOptions::validate() const {
    if (!(tolerance > 0.0)) throw InvalidLevel("tolerance must be positive");
    if (max_iterations < 1 || starts < 1) throw InvalidLevel("iteration and start counts must be positive");
}

SolveResult solve(const CometQuiver& q, const LevelVector& alpha, const SolveOptions& opts) {
    opts.validate();
    check_solver_level(q, alpha);
    FlatLayout layout(q);
    const double scale = init_scale(alpha);
    ResidualFn f = [&layout, &alpha](const rvec& v) {
        return residual_vector(layout.quiver(), layout.unflatten(v), alpha);
    };
    auto init = [&layout, scale](std::uint64_t child) {
        return layout.flatten(random_representation(layout.quiver(), child, scale));
    };
    SolveResult res;
    res.warnings = solver_warnings(q, alpha);
    LmOutcome best = multi_start(f, init, opts.seed, opts.tolerance, opts.max_iterations,
                                 opts.starts, res.best_start);
    res.rep = layout.unflatten(best.x);
    res.report = hyperpolygon_residual(q, res.rep, alpha);
    res.converged = best.converged;
    res.iterations = best.iterations;
    return res;
}

SolveResult solve_polygon(const CometQuiver& q, const LevelVector& alpha, const SolveOptions& opts) {
    opts.validate();
    check_solver_level(q, alpha);
    FlatLayout layout(q);
    // position coordinates (x entries, a coefficients) are exactly the first
    // members of the canonical pairs; momenta stay pinned at zero
    std::vector<int> position;
    position.reserve(layout.canonical_pairs().size());
    for (const auto& [pos, mom] : layout.canonical_pairs()) position.push_back(pos);

    auto embed = [&layout, &position](const rvec& p) {
        rvec full = rvec::Zero(layout.real_dim());
        for (std::size_t i = 0; i < position.size(); ++i) {
            full[2 * position[i]] = p[2 * i];
            full[2 * position[i] + 1] = p[2 * i + 1];
        }
        return full;
    };
    ResidualFn f = [&layout, &alpha, &embed](const rvec& p) {
        return residual_vector(layout.quiver(), layout.unflatten(embed(p)), alpha);
    };
    const double scale = init_scale(alpha);
    auto init = [&position, scale](std::uint64_t child) {
        Rng rng(child);
        rvec p(2 * position.size());
        for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = scale * rng.next_gaussian();
        return p;
    };
    SolveResult res;
    res.warnings = solver_warnings(q, alpha);
    LmOutcome best = multi_start(f, init, opts.seed, opts.tolerance, opts.max_iterations,
                                 opts.starts, res.best_start);
    res.rep = layout.unflatten(embed(best.x));
    res.report = hyperpolygon_residual(q, res.rep, alpha);
    res.converged = best.converged;
    res.iterations = best.iterations;
    return res;
}

RankAnalysis numerical_rank(const rmat& m, double relative_cutoff) {
    RankAnalysis ra;
    if (m.rows() == 0 || m.cols() == 0) {
        ra.gap = std::numeric_limits<double>::infinity();
        return ra;
    }
    Eigen::JacobiSVD<rmat> svd(m);
    ra.singular_values = svd.singularValues();
    const double rel = (relative_cutoff > 0.0)
                           ? relative_cutoff
                           : std::max(m.rows(), m.cols()) * std::numeric_limits<double>::epsilon();
    const double cutoff = rel * ra.singular_values[0];
    int rank = 0;
    while (rank < ra.singular_values.size() && ra.singular_values[rank] > cutoff) ++rank;
    ra.rank = rank;
    if (rank == 0)
        ra.gap = 0.0;
    else if (rank < ra.singular_values.size() && ra.singular_values[rank] > 0.0)
        ra.gap = ra.singular_values[rank - 1] / ra.singular_values[rank];
    else
        ra.gap = std::numeric_limits<double>::infinity();
    return ra;
}

rmat residual_jacobian(const FlatLayout& layout, const rvec& at, const LevelVector& alpha) {
    ResidualFn f = [&layout, &alpha](const rvec& v) {
        return residual_vector(layout.quiver(), layout.unflatten(v), alpha);
    };
    return central_difference_jacobian(f, at);
}

DimensionReport dimension_report(const CometQuiver& q, const Representation& rep,
                                 const LevelVector& alpha) {
    FlatLayout layout(q);
    const rvec x = layout.flatten(rep);
    DimensionReport dr;
    dr.ambient_real = layout.real_dim();
    dr.residual_aggregate = hyperpolygon_residual(q, rep, alpha).aggregate;

    const rmat J = residual_jacobian(layout, x, alpha);
    const RankAnalysis cj = numerical_rank(J);
    dr.constraint_rank = cj.rank;
    dr.constraint_gap = cj.gap;
    dr.level_set_real = dr.ambient_real - cj.rank;

    const std::vector<rvec> dirs = gauge_orbit_tangent_basis(q, rep);
    rmat G(layout.real_dim(), static_cast<Eigen::Index>(dirs.size()));
    for (std::size_t j = 0; j < dirs.size(); ++j) G.col(static_cast<Eigen::Index>(j)) = dirs[j];
    const RankAnalysis cg = numerical_rank(G);
    dr.gauge_orbit_real = cg.rank;
    dr.gauge_gap = cg.gap;

    dr.quotient_real = dr.level_set_real - dr.gauge_orbit_real;
    dr.quotient_complex = dr.quotient_real / 2;
    dr.predicted_complex = dim_hyperpolygon_space(q);
    dr.gap = std::min(dr.constraint_gap, dr.gauge_gap);
    dr.singular = !(dr.gap >= 1e3) || (dr.quotient_real % 2 != 0);
    return dr;
}

rmat physical_tangent_basis(const CometQuiver& q, const Representation& rep,
                            const LevelVector& alpha) {
    FlatLayout layout(q);
    const rvec x = layout.flatten(rep);
    const rmat J = residual_jacobian(layout, x, alpha);

    Eigen::JacobiSVD<rmat> svd(J, Eigen::ComputeFullV);
    const rvec sv = svd.singularValues();
    const double cutoff =
        std::max(J.rows(), J.cols()) * std::numeric_limits<double>::epsilon() * (sv.size() ? sv[0] : 0.0);
    int rank = 0;
    while (rank < sv.size() && sv[rank] > cutoff) ++rank;
    const rmat kernel = svd.matrixV().rightCols(J.cols() - rank);

    const std::vector<rvec> dirs = gauge_orbit_tangent_basis(q, rep);
    if (dirs.empty()) return kernel;
    rmat G(layout.real_dim(), static_cast<Eigen::Index>(dirs.size()));
    for (std::size_t j = 0; j < dirs.size(); ++j) G.col(static_cast<Eigen::Index>(j)) = dirs[j];

    const rmat Gk = kernel.transpose() * G;  // orbit directions in kernel coordinates
    Eigen::JacobiSVD<rmat> gsvd(Gk, Eigen::ComputeFullU);
    const rvec gs = gsvd.singularValues();
    const double gcut =
        std::max(Gk.rows(), Gk.cols()) * std::numeric_limits<double>::epsilon() * (gs.size() ? gs[0] : 0.0);
    int grank = 0;
    while (grank < gs.size() && gs[grank] > gcut) ++grank;
    return kernel * gsvd.matrixU().rightCols(Gk.rows() - grank);
}

}  // namespace cometq
