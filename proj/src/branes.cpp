#include "cometq/branes.hpp"

#include <cmath>

#include "cometq/rng.hpp"

namespace cometq {

Representation sign_involution(const Representation& rep) {
    Representation out = rep;
    for (std::size_t i = 0; i < rep.y.size(); ++i)
        for (std::size_t k = 0; k < rep.y[i].size(); ++k)
            for (std::size_t c = 0; c < rep.y[i][k].size(); ++c) out.y[i][k][c] = -rep.y[i][k][c];
    for (std::size_t j = 0; j < rep.b.size(); ++j) out.b[j] = -rep.b[j];
    return out;
}

namespace {

double rep_norm(const Representation& rep) {
    double s = 0.0;
    for (const auto& arm : rep.x)
        for (const auto& edge : arm)
            for (const auto& m : edge) s += m.squaredNorm();
    for (const auto& arm : rep.y)
        for (const auto& edge : arm)
            for (const auto& m : edge) s += m.squaredNorm();
    for (const auto& m : rep.a) s += m.squaredNorm();
    for (const auto& m : rep.b) s += m.squaredNorm();
    return std::sqrt(s);
}

double rep_distance(const Representation& u, const Representation& v, double sign) {
    // || u + sign * v ||
    double s = 0.0;
    for (std::size_t i = 0; i < u.x.size(); ++i)
        for (std::size_t k = 0; k < u.x[i].size(); ++k)
            for (std::size_t c = 0; c < u.x[i][k].size(); ++c) {
                s += (u.x[i][k][c] + sign * v.x[i][k][c]).squaredNorm();
                s += (u.y[i][k][c] + sign * v.y[i][k][c]).squaredNorm();
            }
    for (std::size_t j = 0; j < u.a.size(); ++j) {
        s += (u.a[j] + sign * v.a[j]).squaredNorm();
        s += (u.b[j] + sign * v.b[j]).squaredNorm();
    }
    return std::sqrt(s);
}

}  // namespace

BraneReport involution_type_report(const CometQuiver& q, int samples, std::uint64_t seed) {
    if (samples < 1) throw LengthMismatch("sample count must be positive");
    BraneReport report;
    report.samples = samples;
    report.seed = seed;
    for (char key : {'I', 'J', 'K'}) report.structures[key] = StructureDefects{};

    const Quaternion structs[3] = {Quaternion::I, Quaternion::J, Quaternion::K};
    const char keys[3] = {'I', 'J', 'K'};
    for (int s = 0; s < samples; ++s) {
        const Representation v =
            random_representation(q, Rng::child_seed(seed, static_cast<std::uint64_t>(s)), 1.0);
        const double scale = std::max(rep_norm(v), 1e-300);
        const Representation iv = sign_involution(v);
        for (int t = 0; t < 3; ++t) {
            const Representation si = quaternion_apply(structs[t], iv);
            const Representation is = sign_involution(quaternion_apply(structs[t], v));
            auto& d = report.structures[keys[t]];
            d.commutator = std::max(d.commutator, rep_distance(si, is, -1.0) / scale);
            d.anticommutator = std::max(d.anticommutator, rep_distance(si, is, 1.0) / scale);
        }
    }
    std::string sig = "(";
    for (int t = 0; t < 3; ++t) {
        auto& d = report.structures[keys[t]];
        if (d.commutator < 1e-12)
            d.classification = 'B';
        else if (d.anticommutator < 1e-12)
            d.classification = 'A';
        else
            throw Inconclusive("structure neither commutes nor anticommutes with the involution");
        sig += d.classification;
        sig += (t < 2) ? "," : ")";
    }
    report.signature = sig;
    return report;
}

double fixed_locus_defect(const Representation& rep) {
    double worst = 0.0;
    for (const auto& arm : rep.y)
        for (const auto& edge : arm)
            for (const auto& m : edge) worst = std::max(worst, m.norm());
    for (const auto& m : rep.b) worst = std::max(worst, m.norm());
    return worst;
}

bool fixed_locus_check(const Representation& rep, double tol) {
    return fixed_locus_defect(rep) <= tol;
}

}  // namespace cometq
