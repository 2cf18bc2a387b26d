#include <doctest.h>

#include <cmath>
#include <fstream>

#include "corpus.hpp"
#include "lienard/errors.hpp"
#include "lienard/json_io.hpp"
#include "lienard/svg.hpp"

using namespace lienard;
using namespace lienard::testing;

TEST_SUITE("json_svg") {
  TEST_CASE("fields round-trip through json") {
    for (const auto& c : corpus()) {
      const Json j = to_json(c.field);
      CHECK(field_from_json(j).F() == c.field.F());
      CHECK(field_from_json(Json::parse(dump(j))).F() == c.field.F());
    }
    const Json vdp = to_json(van_der_pol());
    CHECK(vdp["F"][3] == "1/3");
  }

  TEST_CASE("polynomials round-trip through json") {
    const BiPoly g = BiPoly::x() * BiPoly::x() + Rational(-3, 4) * BiPoly::x() * BiPoly::y();
    CHECK(bipoly_from_json(to_json(g)) == g);
    CHECK(bipoly_from_json(Json::parse(R"({"terms": []})")).is_zero());
  }

  TEST_CASE("malformed input is a parse error") {
    CHECK_THROWS_AS(field_from_json(Json::parse(R"({"type": "lienard"})")), ParseError);
    CHECK_THROWS_AS(field_from_json(Json::parse(R"({"type": "other", "F": ["0", "1"]})")), ParseError);
    CHECK_THROWS_AS(field_from_json(Json::parse(R"({"type": "lienard", "F": ["0", "x"]})")), ParseError);
    CHECK_THROWS_AS(bipoly_from_json(Json::parse(R"({"terms": [{"i": -1, "j": 0, "c": "1"}]})")), ParseError);
    CHECK_THROWS_AS(read_json_file("/nonexistent/field.json"), ParseError);
    const std::string path = "lienard_malformed_test.json";
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(load_field(path), ParseError);
    std::remove(path.c_str());
  }

  TEST_CASE("dump writes 17 significant digits and nulls for non-finite values") {
    Json j;
    j["a"] = 0.1;
    j["b"] = 1.0;
    j["c"] = std::nan("");
    j["d"] = std::vector<double>{1.5, -2.0};
    j["e"] = 7;
    const std::string text = dump(j);
    CHECK(text.find("0.10000000000000001") != std::string::npos);
    CHECK(text.find("\"b\": 1.0") != std::string::npos);
    CHECK(text.find("\"c\": null") != std::string::npos);
    CHECK(text.find("[1.5, -2.0]") != std::string::npos);
    CHECK(text.find("\"e\": 7") != std::string::npos);
    // Keys keep insertion order.
    CHECK(text.find("\"a\"") < text.find("\"e\""));
    // Values parse back exactly.
    CHECK(Json::parse(text)["a"].get<double>() == 0.1);
  }

  TEST_CASE("error objects carry the category") {
    const Json j = to_json(ObstructionDivergence("grows", 0.5));
    CHECK(j["error"] == "ObstructionDivergence");
    CHECK(j["category"] == "obstruction");
    CHECK(j["slope"].get<double>() == 0.5);
    CHECK(to_json(ParseError("bad"))["category"] == "input");
  }

  TEST_CASE("cycle sets serialize their cycles in order") {
    const CycleSet cs = find_cycles(two_cycle(), {}, {});
    const Json j = to_json(cs);
    REQUIRE(j["cycles"].size() == 2);
    CHECK(j["cycles"][0]["stability"] == "repelling");
    CHECK(j["cycles"][1]["stability"] == "attracting");
    CHECK(j["cycles"][0]["section_y"].get<double>() == cs.cycles[0].section_y);
  }

  TEST_CASE("phase portraits are deterministic svg") {
    const CycleSet cs = find_cycles(van_der_pol(), {}, {});
    PortraitOptions o;
    o.sample_orbits = 3;
    o.orbit_time = 10;
    const std::string a = phase_portrait_svg(van_der_pol(), cs, o);
    const std::string b = phase_portrait_svg(van_der_pol(), cs, o);
    CHECK(a == b);
    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a.find("</svg>") != std::string::npos);
    CHECK(a.find("attracting") != std::string::npos);
  }
}
