#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "cometq/branes.hpp"
#include "cometq/geometry.hpp"
#include "cometq/integrable.hpp"
#include "cometq/moment.hpp"
#include "cometq/quiver.hpp"
#include "cometq/rep.hpp"
#include "cometq/solver.hpp"

namespace cometq {

using json = nlohmann::json;

// Quiver document: {"arms": [[1,2],...], "loops": g} with optional
// "multiplicities" (nested, one entry per consecutive pair) and
// "central_rank" (required when arms are absent). Unknown fields rejected.
json quiver_to_json(const CometQuiver& q);
CometQuiver quiver_from_json(const json& doc);

// Solution document: embedded quiver plus x/y (arm -> edge -> copy -> matrix)
// and a/b (loop -> matrix), every complex entry a [re, im] pair, matrices
// row-major; "alpha" records the level when one was used. Shapes are checked
// against the quiver on load.
json solution_to_json(const CometQuiver& q, const Representation& rep,
                      const LevelVector* alpha = nullptr);
struct SolutionDocument {
    CometQuiver quiver;
    Representation rep;
    LevelVector alpha;  // empty if the document carries none
    bool has_alpha = false;
};
SolutionDocument solution_from_json(const json& doc);

json residual_report_to_json(const ResidualReport& r);
json dimension_report_to_json(const DimensionReport& d);
json polygon_figure_to_json(const PolygonFigure& f);
json higgs_data_to_json(const HiggsData& h);
json brane_report_to_json(const BraneReport& b);
json hamiltonian_set_to_json(const HamiltonianSet& s);
json commutation_report_to_json(const CommutationReport& c);
json independence_report_to_json(const IndependenceReport& i);

// FNV-1a over the canonical (sorted-key) dump of the quiver document.
std::string quiver_hash(const CometQuiver& q);

// Run metadata stamped on every CLI artifact.
json meta_block(const CometQuiver& q, std::uint64_t seed);

}  // namespace cometq
