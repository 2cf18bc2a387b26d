#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lienard/center.hpp"
#include "lienard/cohomology.hpp"
#include "lienard/cycles.hpp"
#include "lienard/errors.hpp"
#include "lienard/field.hpp"
#include "lienard/obstruction.hpp"
#include "lienard/poly_index.hpp"

namespace lienard {

using Json = nlohmann::ordered_json;

/// {"type":"lienard","F":["0","-1","0","1/3"]}. Throws ParseError.
LienardField field_from_json(const Json& j);
/// {"terms":[{"i":1,"j":1,"c":"2"}]}. Throws ParseError.
BiPoly bipoly_from_json(const Json& j);

/// Reads and parses a file; ParseError on I/O or syntax problems.
Json read_json_file(const std::string& path);
LienardField load_field(const std::string& path);
BiPoly load_bipoly(const std::string& path);

Json to_json(const LienardField& field);
Json to_json(const BiPoly& poly);
Json to_json(const LimitCycle& cycle);
Json to_json(const CycleSet& cycles);
Json to_json(const ObstructionReport& report);
Json to_json(const RegionLabel& label);
/// Grid metadata, row-major values (null where not solved), status mask,
/// region indices and the summary block.
Json to_json(const CohomSolution& solution);
Json to_json(const IndexReport& report, bool with_timings = true);
Json to_json(const std::vector<IndexReport>& sweep, bool with_timings = true);
Json to_json(const CokernelGram& gram);
Json to_json(const CenterReport& report);
Json to_json(const Error& error);

/// Region number 0..n (inner disk, annuli, exterior) for a label.
int region_index(const RegionLabel& label, std::size_t cycle_count);

/// Pretty-printed text with keys in insertion order and every float at 17
/// significant digits; non-finite floats become null.
std::string dump(const Json& j);

}  // namespace lienard
