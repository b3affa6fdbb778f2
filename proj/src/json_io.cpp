#include "cometq/json_io.hpp"

#include <limits>

#include "cometq/version.hpp"

namespace cometq {

namespace {

json complex_to_json(cx z) { return json::array({z.real(), z.imag()}); }

cx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("complex entries must be [re, im] pairs");
    return cx(j[0].get<double>(), j[1].get<double>());
}

json matrix_to_json(const cxmat& m) {
    json rows = json::array();
    for (int p = 0; p < m.rows(); ++p) {
        json row = json::array();
        for (int q = 0; q < m.cols(); ++q) row.push_back(complex_to_json(m(p, q)));
        rows.push_back(std::move(row));
    }
    return rows;
}

cxmat matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty array of rows");
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw ParseError("matrix rows must be nonempty arrays");
    cxmat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t p = 0; p < j.size(); ++p) {
        if (!j[p].is_array() || j[p].size() != cols) throw ParseError("ragged matrix rows");
        for (std::size_t q = 0; q < cols; ++q) m(p, q) = complex_from_json(j[p][q]);
    }
    return m;
}

// JSON has no infinity; keep reports readable
json finite_or_string(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
}

void reject_unknown_fields(const json& doc, std::initializer_list<const char*> allowed,
                           const char* what) {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        bool ok = false;
        for (const char* name : allowed)
            if (it.key() == name) ok = true;
        if (!ok) throw ParseError(std::string(what) + ": unknown field '" + it.key() + "'");
    }
}

}  // namespace

json quiver_to_json(const CometQuiver& q) {
    json doc;
    json arms = json::array();
    for (const auto& arm : q.arms) arms.push_back(arm.ranks);
    doc["arms"] = std::move(arms);
    doc["loops"] = q.loops;
    if (!q.tame()) doc["multiplicities"] = q.multiplicity;
    if (q.arms.empty()) doc["central_rank"] = q.central_rank();
    return doc;
}

CometQuiver quiver_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("quiver document must be an object");
    reject_unknown_fields(doc, {"arms", "loops", "multiplicities", "central_rank"}, "quiver");
    if (!doc.contains("arms") || !doc["arms"].is_array())
        throw ParseError("quiver: 'arms' must be an array of rank strings");
    if (!doc.contains("loops") || !doc["loops"].is_number_integer())
        throw ParseError("quiver: 'loops' must be an integer");
    std::vector<std::vector<int>> arms;
    for (const auto& a : doc["arms"]) {
        if (!a.is_array()) throw ParseError("quiver: each arm must be an array of ranks");
        std::vector<int> ranks;
        for (const auto& r : a) {
            if (!r.is_number_integer()) throw ParseError("quiver: ranks must be integers");
            ranks.push_back(r.get<int>());
        }
        arms.push_back(std::move(ranks));
    }
    std::vector<std::vector<int>> mult;
    if (doc.contains("multiplicities")) {
        if (!doc["multiplicities"].is_array()) throw ParseError("quiver: bad multiplicities");
        for (const auto& a : doc["multiplicities"]) {
            if (!a.is_array()) throw ParseError("quiver: bad multiplicities");
            std::vector<int> row;
            for (const auto& m : a) {
                if (!m.is_number_integer()) throw ParseError("quiver: multiplicities must be integers");
                row.push_back(m.get<int>());
            }
            mult.push_back(std::move(row));
        }
    }
    int central = 0;
    if (doc.contains("central_rank")) {
        if (!doc["central_rank"].is_number_integer()) throw ParseError("quiver: bad central_rank");
        central = doc["central_rank"].get<int>();
    }
    return build_comet(arms, doc["loops"].get<int>(), mult, central);
}

json solution_to_json(const CometQuiver& q, const Representation& rep, const LevelVector* alpha) {
    validate_shapes(q, rep);
    json doc;
    doc["quiver"] = quiver_to_json(q);
    if (alpha) doc["alpha"] = *alpha;
    auto edges_to_json = [](const std::vector<std::vector<std::vector<cxmat>>>& blocks) {
        json arms = json::array();
        for (const auto& arm : blocks) {
            json edges = json::array();
            for (const auto& edge : arm) {
                json copies = json::array();
                for (const auto& m : edge) copies.push_back(matrix_to_json(m));
                edges.push_back(std::move(copies));
            }
            arms.push_back(std::move(edges));
        }
        return arms;
    };
    doc["x"] = edges_to_json(rep.x);
    doc["y"] = edges_to_json(rep.y);
    json a = json::array(), b = json::array();
    for (const auto& m : rep.a) a.push_back(matrix_to_json(m));
    for (const auto& m : rep.b) b.push_back(matrix_to_json(m));
    doc["a"] = std::move(a);
    doc["b"] = std::move(b);
    return doc;
}

SolutionDocument solution_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("solution document must be an object");
    reject_unknown_fields(doc, {"quiver", "alpha", "x", "y", "a", "b"}, "solution");
    if (!doc.contains("quiver")) throw ParseError("solution: missing quiver");
    SolutionDocument out;
    out.quiver = quiver_from_json(doc["quiver"]);
    if (doc.contains("alpha")) {
        if (!doc["alpha"].is_array()) throw ParseError("solution: alpha must be an array");
        for (const auto& v : doc["alpha"]) {
            if (!v.is_number()) throw ParseError("solution: alpha entries must be numbers");
            out.alpha.push_back(v.get<double>());
        }
        out.has_alpha = true;
    }
    auto edges_from_json = [](const json& arms) {
        std::vector<std::vector<std::vector<cxmat>>> out_blocks;
        if (!arms.is_array()) throw ParseError("solution: arm blocks must be arrays");
        for (const auto& arm : arms) {
            if (!arm.is_array()) throw ParseError("solution: edge blocks must be arrays");
            std::vector<std::vector<cxmat>> edges;
            for (const auto& edge : arm) {
                if (!edge.is_array()) throw ParseError("solution: copy blocks must be arrays");
                std::vector<cxmat> copies;
                for (const auto& m : edge) copies.push_back(matrix_from_json(m));
                edges.push_back(std::move(copies));
            }
            out_blocks.push_back(std::move(edges));
        }
        return out_blocks;
    };
    if (!doc.contains("x") || !doc.contains("y") || !doc.contains("a") || !doc.contains("b"))
        throw ParseError("solution: missing representation blocks");
    out.rep.x = edges_from_json(doc["x"]);
    out.rep.y = edges_from_json(doc["y"]);
    for (const auto& m : doc["a"]) out.rep.a.push_back(matrix_from_json(m));
    for (const auto& m : doc["b"]) out.rep.b.push_back(matrix_from_json(m));
    validate_shapes(out.quiver, out.rep);
    if (out.has_alpha && static_cast<int>(out.alpha.size()) != out.quiver.num_arms())
        throw LengthMismatch("solution: alpha length does not match arm count");
    return out;
}

json residual_report_to_json(const ResidualReport& r) {
    json doc;
    doc["eq_i"] = r.eq_i;
    doc["eq_ii"] = r.eq_ii;
    doc["eq_iii"] = r.eq_iii;
    doc["eq_I"] = r.eq_I;
    doc["eq_II"] = r.eq_II;
    doc["eq_III"] = r.eq_III;
    doc["aggregate"] = r.aggregate;
    doc["non_generic"] = r.non_generic;
    return doc;
}

json dimension_report_to_json(const DimensionReport& d) {
    json doc;
    doc["ambient_real"] = d.ambient_real;
    doc["constraint_rank"] = d.constraint_rank;
    doc["level_set_real"] = d.level_set_real;
    doc["gauge_orbit_real"] = d.gauge_orbit_real;
    doc["quotient_real"] = d.quotient_real;
    doc["quotient_complex"] = d.quotient_complex;
    doc["predicted_complex"] = d.predicted_complex;
    doc["constraint_gap"] = finite_or_string(d.constraint_gap);
    doc["gauge_gap"] = finite_or_string(d.gauge_gap);
    doc["gap"] = finite_or_string(d.gap);
    doc["singular"] = d.singular;
    doc["residual_aggregate"] = d.residual_aggregate;
    return doc;
}

json polygon_figure_to_json(const PolygonFigure& f) {
    json doc;
    json sides = json::array();
    for (const auto& s : f.sides) sides.push_back(matrix_to_json(s));
    doc["sides"] = std::move(sides);
    doc["side_lengths"] = f.side_lengths;
    doc["closure_defect"] = f.closure_defect;
    return doc;
}

json higgs_data_to_json(const HiggsData& h) {
    json doc;
    json punctures = json::array();
    for (cx z : h.punctures) punctures.push_back(complex_to_json(z));
    doc["punctures"] = std::move(punctures);
    json residues = json::array();
    for (const auto& m : h.residues) residues.push_back(matrix_to_json(m));
    doc["residues"] = std::move(residues);
    doc["nilpotency_orders"] = h.nilpotency_orders;
    doc["nilpotency_defects"] = h.nilpotency_defects;
    doc["loop_commutator_sum"] = matrix_to_json(h.loop_commutator_sum);
    doc["residue_identity_defect"] = h.residue_identity_defect;
    return doc;
}

json brane_report_to_json(const BraneReport& b) {
    json doc;
    for (const auto& [key, d] : b.structures) {
        json s;
        s["classification"] = std::string(1, d.classification);
        s["commutator_defect"] = d.commutator;
        s["anticommutator_defect"] = d.anticommutator;
        doc[std::string(1, key)] = std::move(s);
    }
    doc["signature"] = b.signature;
    doc["samples"] = b.samples;
    doc["seed"] = b.seed;
    return doc;
}

namespace {

const char* kind_name(HamiltonianKind k) {
    switch (k) {
        case HamiltonianKind::arm_block_trace: return "arm_block_trace";
        case HamiltonianKind::minimal_corner: return "minimal_corner";
        case HamiltonianKind::loop_entry: return "loop_entry";
    }
    return "?";
}

}  // namespace

json hamiltonian_set_to_json(const HamiltonianSet& s) {
    json doc;
    json members = json::array();
    for (const auto& d : s.members) {
        json m;
        m["kind"] = kind_name(d.kind);
        if (d.kind == HamiltonianKind::loop_entry) {
            m["loop"] = d.loop;
            m["row"] = d.row;
            m["col"] = d.col;
        } else {
            m["arm"] = d.arm;
            if (d.kind == HamiltonianKind::arm_block_trace) {
                m["level"] = d.level;
                m["degree"] = d.degree;
            }
        }
        members.push_back(std::move(m));
    }
    doc["members"] = std::move(members);
    doc["policy"] = s.policy == GtPolicy::corollary ? "corollary" : "tally_greedy";
    doc["tally"] = s.tally;
    doc["corollary_count"] = s.corollary_count;
    doc["complete"] = s.complete;
    return doc;
}

json commutation_report_to_json(const CommutationReport& c) {
    json doc;
    json rows = json::array();
    for (int p = 0; p < c.brackets.rows(); ++p) {
        json row = json::array();
        for (int q = 0; q < c.brackets.cols(); ++q) row.push_back(complex_to_json(c.brackets(p, q)));
        rows.push_back(std::move(row));
    }
    doc["brackets"] = std::move(rows);
    doc["max_normalized"] = c.max_normalized;
    doc["on_shell"] = c.on_shell;
    doc["residual"] = c.residual;
    return doc;
}

json independence_report_to_json(const IndependenceReport& i) {
    json doc;
    doc["rank"] = i.rank;
    doc["restricted_real_rank"] = i.restricted_real_rank;
    doc["gap"] = finite_or_string(i.gap);
    doc["tally"] = i.tally;
    doc["odd_rank"] = i.odd_rank;
    return doc;
}

std::string quiver_hash(const CometQuiver& q) {
    const std::string canonical = quiver_to_json(q).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json meta_block(const CometQuiver& q, std::uint64_t seed) {
    json meta;
    meta["seed"] = seed;
    meta["version"] = kVersion;
    meta["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                    "." + std::to_string(EIGEN_MINOR_VERSION);
    meta["quiver_hash"] = quiver_hash(q);
    return meta;
}

}  // namespace cometq
