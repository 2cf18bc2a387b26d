#include "lienard/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace lienard {

namespace {

Rational rational_from_json(const Json& v, const std::string& where) {
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw ParseError(where + ": expected an integer or a \"p/q\" string");
}

int int_from_json(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    throw ParseError(std::string("term field '") + key + "' must be an integer");
  }
  const long v = obj[key].get<long>();
  if (v < 0 || v > 1000) throw ParseError(std::string("term field '") + key + "' out of range");
  return static_cast<int>(v);
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

LienardField field_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("field: expected a JSON object");
  if (!j.contains("type") || j["type"] != "lienard") throw ParseError("field: \"type\" must be \"lienard\"");
  if (!j.contains("F") || !j["F"].is_array()) throw ParseError("field: \"F\" must be an array of coefficients");
  std::vector<Rational> coeffs;
  for (std::size_t i = 0; i < j["F"].size(); ++i) {
    coeffs.push_back(rational_from_json(j["F"][i], "field: F[" + std::to_string(i) + "]"));
  }
  return LienardField(UniPoly(std::move(coeffs)));
}

BiPoly bipoly_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array()) {
    throw ParseError("polynomial: expected {\"terms\": [...]}");
  }
  BiPoly out;
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("c")) throw ParseError("polynomial: each term needs i, j and c");
    out += BiPoly::monomial(int_from_json(t, "i"), int_from_json(t, "j"), rational_from_json(t["c"], "polynomial: c"));
  }
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

LienardField load_field(const std::string& path) { return field_from_json(read_json_file(path)); }
BiPoly load_bipoly(const std::string& path) { return bipoly_from_json(read_json_file(path)); }

Json to_json(const LienardField& field) {
  Json f = Json::array();
  for (const auto& c : field.F().coefficients()) f.push_back(c.str());
  return Json{{"type", "lienard"}, {"F", f}};
}

Json to_json(const BiPoly& poly) {
  Json terms = Json::array();
  for (const auto& [m, c] : poly.terms()) terms.push_back(Json{{"i", m.i}, {"j", m.j}, {"c", c.str()}});
  return Json{{"terms", terms}};
}

Json to_json(const LimitCycle& c) {
  return Json{{"nesting_index", c.nesting_index},
              {"section_y", number(c.section_y)},
              {"period", number(c.period)},
              {"multiplier", number(c.multiplier)},
              {"fd_multiplier", number(c.fd_multiplier)},
              {"stability", to_string(c.stability)},
              {"fixed_point_residual", number(c.fixed_point_residual)}};
}

Json to_json(const CycleSet& cycles) {
  Json list = Json::array();
  for (const auto& c : cycles.cycles) list.push_back(to_json(c));
  return Json{{"count", cycles.count()},
              {"origin_stability", to_string(cycles.origin_stability)},
              {"infinity_stability", to_string(cycles.infinity_stability())},
              {"cycles", list}};
}

Json to_json(const ObstructionReport& r) {
  Json cycles = Json::array();
  for (std::size_t i = 0; i < r.cycle_integrals.size(); ++i) {
    cycles.push_back(Json{{"nesting_index", i + 1},
                          {"integral", number(r.cycle_integrals[i])},
                          {"period", number(r.periods[i])},
                          {"ratio", number(r.cycle_integrals[i] / r.periods[i])}});
  }
  return Json{{"admissible", r.admissible},
              {"tolerance", number(r.tolerance)},
              {"f_at_origin", number(r.f_at_origin)},
              {"cycles", cycles}};
}

Json to_json(const RegionLabel& l) {
  return Json{{"kind", l.str()},
              {"forward_limit", l.forward_limit.str()},
              {"backward_limit", l.backward_limit.str()},
              {"solver_limit", l.solver_limit().str()}};
}

int region_index(const RegionLabel& label, std::size_t cycle_count) {
  switch (label.kind) {
    case RegionKind::inner_disk:
      return 0;
    case RegionKind::annulus:
      return label.annulus_index;
    case RegionKind::exterior:
      return static_cast<int>(cycle_count);
  }
  return 0;
}

Json to_json(const CohomSolution& s) {
  const std::size_t n = s.chain.constants.empty() ? 0 : s.chain.constants.size() - 1;
  Json values = Json::array();
  Json status = Json::array();
  Json regions = Json::array();
  Json trunc = Json::array();
  double max_trunc = 0.0;
  std::map<std::string, std::size_t> kinds;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    values.push_back(number(s.values[k]));
    status.push_back(static_cast<int>(s.status[k]));
    regions.push_back(region_index(s.labels[k], n));
    trunc.push_back(number(s.truncation_error[k]));
    if (std::isfinite(s.truncation_error[k])) max_trunc = std::max(max_trunc, s.truncation_error[k]);
  }
  for (const auto& [idx, kind] : s.failures) ++kinds[kind];
  Json failure_kinds = Json::object();
  for (const auto& [kind, count] : kinds) failure_kinds[kind] = count;
  Json constants = Json::array();
  for (double c : s.chain.constants) constants.push_back(number(c));
  Json disc = Json::array();
  for (double d : s.chain.discrepancies) disc.push_back(number(d));
  Json summary{{"residual_max", number(s.residual_max)},
               {"max_truncation_error", number(max_trunc)},
               {"solved_count", s.values.size() - s.excluded_count - s.failed_count},
               {"excluded_count", s.excluded_count},
               {"failed_count", s.failed_count},
               {"failure_kinds", failure_kinds},
               {"divergence_slope", s.divergence_slope ? number(*s.divergence_slope) : Json(nullptr)},
               {"chain_failure", s.chain_failure ? Json(*s.chain_failure) : Json(nullptr)}};
  return Json{{"grid",
               {{"x_min", s.grid.x_min},
                {"x_max", s.grid.x_max},
                {"y_min", s.grid.y_min},
                {"y_max", s.grid.y_max},
                {"h", s.grid.h},
                {"nx", s.grid.nx()},
                {"ny", s.grid.ny()}}},
              {"constants", constants},
              {"discrepancies", disc},
              {"summary", summary},
              {"status_codes", {{"solved", 0}, {"excluded", 1}, {"failed", 2}}},
              {"values", values},
              {"status", status},
              {"regions", regions},
              {"truncation_error", trunc}};
}

Json to_json(const IndexReport& r, bool with_timings) {
  Json j{{"d_in", r.d_in},         {"d_out", r.d_out}, {"rows", r.rows},
         {"cols", r.cols},         {"rank", r.rank},   {"kernel_dim", r.kernel_dim},
         {"cokernel_dim", r.cokernel_dim}, {"index", r.index}};
  if (with_timings) j["millis"] = r.millis;
  return j;
}

Json to_json(const std::vector<IndexReport>& sweep, bool with_timings) {
  Json rows = Json::array();
  for (const auto& r : sweep) rows.push_back(to_json(r, with_timings));
  return Json{{"target_degree_rule", "d_out = d_in + max(deg F - 1, 0)"}, {"rows", rows}};
}

Json to_json(const CokernelGram& g) {
  Json m = Json::array();
  for (const auto& row : g.matrix) {
    Json r = Json::array();
    for (double v : row) r.push_back(number(v));
    m.push_back(r);
  }
  return Json{{"matrix", m},
              {"determinant", number(g.determinant)},
              {"margin", number(g.margin)},
              {"nonsingular", g.nonsingular}};
}

Json to_json(const CenterReport& r) {
  Json orbits = Json::array();
  for (const auto& o : r.orbits) {
    orbits.push_back(Json{{"s", number(o.s)},
                          {"displacement", number(o.displacement)},
                          {"period", number(o.period)},
                          {"parabola", number(o.parabola)},
                          {"transformed", number(o.transformed)},
                          {"parabola_spread", number(o.parabola_spread)},
                          {"transformed_spread", number(o.transformed_spread)},
                          {"crossing_gap", number(o.crossing_gap)}});
  }
  return Json{{"tolerance", number(r.tolerance)},
              {"max_displacement", number(r.max_displacement)},
              {"max_parabola_spread", number(r.max_parabola_spread)},
              {"max_transformed_spread", number(r.max_transformed_spread)},
              {"parabola_monotone", r.parabola_monotone},
              {"transformed_monotone", r.transformed_monotone},
              {"orbits", orbits}};
}

Json to_json(const Error& e) {
  static const char* categories[] = {"input", "numerics", "obstruction"};
  Json j{{"error", e.kind()}, {"category", categories[static_cast<int>(e.category())]}, {"message", e.what()}};
  if (const auto* d = dynamic_cast<const ObstructionDivergence*>(&e)) j["slope"] = number(d->slope());
  return j;
}

namespace {

void write(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << Json(it.key()).dump() << ": ";
        write(os, it.value(), indent + 1);
      }
      os << '\n' << pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool scalars = true;
      for (const auto& v : j) scalars = scalars && !v.is_structured();
      if (scalars) {
        os << '[';
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) os << ", ";
          write(os, j[k], indent + 1);
        }
        os << ']';
        return;
      }
      os << "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) os << ",\n";
        os << inner;
        write(os, j[k], indent + 1);
      }
      os << '\n' << pad << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::string text(buf);
      if (text.find_first_of(".eEn") == std::string::npos) text += ".0";
      os << text;
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump(const Json& j) {
  std::ostringstream os;
  write(os, j, 0);
  os << '\n';
  return os.str();
}

}  // namespace lienard
