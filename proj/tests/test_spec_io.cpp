#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "twistkit/spec_io.hpp"

using namespace twistkit;
using nlohmann::json;

namespace {

const json kSu2 = json::parse(R"J({"dimension": 3, "coordinates": ["x1","x2","x3"],
  "bivector": {"1,2": "x3", "2,3": "x1", "3,1": "x2"}, "two_form": {}})J");

ErrorKind parse_kind(json doc) {
  try {
    parse_spec(doc);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("spec accepted");
  return ErrorKind::IoError;
}

json patched(std::string_view patch) { return kSu2.patch(json::parse(patch)); }

bool same_tensor(const auto& a, const auto& b) { return (a - b).is_zero(); }

}  // namespace

TEST_CASE("parse_spec: catalog shape") {
  const ManifoldSpec spec = parse_spec(kSu2);
  CHECK(spec.dim() == 3);
  CHECK(spec.has_two_form());
  CHECK(spec.pi.at({2, 0}) == testing::expr("x2", 3));
  CHECK(spec.pi.at({0, 2}) == testing::expr("-x2", 3));
}

TEST_CASE("parse_spec: schema errors") {
  CHECK(parse_kind(patched(R"J([{"op":"add","path":"/bivector/1,1","value":"x1"}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(patched(R"J([{"op":"add","path":"/three_form","value":{}}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(patched(R"J([{"op":"remove","path":"/two_form"}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(patched(R"J([{"op":"remove","path":"/bivector"}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(patched(R"J([{"op":"add","path":"/extra","value":1}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(patched(R"J([{"op":"replace","path":"/dimension","value":4}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(patched(R"J([{"op":"replace","path":"/dimension","value":"3"}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(patched(R"J([{"op":"replace","path":"/coordinates/1","value":"x1"}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(patched(R"J([{"op":"replace","path":"/coordinates/1","value":"2x"}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(patched(R"J([{"op":"add","path":"/bivector/1,4","value":"1"}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(patched(R"J([{"op":"add","path":"/bivector/1,2,3","value":"1"}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(patched(R"J([{"op":"add","path":"/bivector/a,b","value":"1"}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(patched(R"J([{"op":"add","path":"/bivector/0,1","value":"1"}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(patched(R"J([{"op":"replace","path":"/bivector/1,2","value":3}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(patched(R"J([{"op":"replace","path":"/two_form","value":[]}])J")) == ErrorKind::SchemaError);
  CHECK(parse_kind(json::array()) == ErrorKind::SchemaError);
}

TEST_CASE("parse_spec: expression errors") {
  CHECK(parse_kind(patched(R"J([{"op":"replace","path":"/bivector/1,2","value":"y"}])J")) == ErrorKind::ExpressionError);
  CHECK(parse_kind(patched(R"J([{"op":"replace","path":"/bivector/1,2","value":"x1 +"}])J")) == ErrorKind::ExpressionError);
  CHECK(parse_kind(patched(R"J([{"op":"replace","path":"/bivector/1,2","value":"1/(x1-x1)"}])J")) == ErrorKind::ExpressionError);
}

TEST_CASE("parse_spec: unordered keys and duplicates normalize") {
  const ManifoldSpec a = parse_spec(json::parse(R"J({"dimension": 2, "coordinates": ["q","p"],
    "bivector": {"2,1": "q", "1,2": "p"}, "two_form": {}})J"));
  CHECK(a.pi.at({0, 1}) == parse_scalar("p - q", a.chart));
}

TEST_CASE("load_spec: io errors") {
  const auto dir = std::filesystem::temp_directory_path();
  CHECK_THROWS_WITH_AS(load_spec(dir / "twistkit-no-such-file.json"), doctest::Contains("IoError"), Error);
  const auto bad = dir / "twistkit-bad-json.json";
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_WITH_AS(load_spec(bad), doctest::Contains("IoError"), Error);
  std::filesystem::remove(bad);
}

TEST_CASE("property: serialization round-trips") {
  testing::Gen gen(4101);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.uniform_int(2, 5));
    ManifoldSpec spec{Chart::standard(n), KVector(2, n), TwoFormBackground{KForm(2, n)}};
    std::vector<std::pair<IndexTuple, ScalarExpr>> raw;
    for (int e = 0; e < 3; ++e) {
      auto r = gen.raw_components(2, n, 2, 9, 1);
      raw.emplace_back(r[0].first, gen.rational_expr(n, 2));
    }
    spec.pi = make_antisymmetric<Variance::Contravariant>(2, n, raw);
    const bool three = gen.coin();
    if (three && n >= 3)
      spec.background = ThreeFormBackground{make_antisymmetric<Variance::Covariant>(3, n, gen.raw_components(3, n, 2, 9, 2))};
    else
      spec.background = TwoFormBackground{make_antisymmetric<Variance::Covariant>(2, n, gen.raw_components(2, n, 2, 9, 2))};

    const ordered_json text = spec_to_json(spec);
    const ManifoldSpec back = parse_spec(json::parse(text.dump()));
    CHECK(back.chart == spec.chart);
    CHECK(same_tensor(back.pi, spec.pi));
    REQUIRE(back.has_two_form() == spec.has_two_form());
    if (spec.has_two_form())
      CHECK(same_tensor(std::get<TwoFormBackground>(back.background).omega,
                        std::get<TwoFormBackground>(spec.background).omega));
    else
      CHECK(same_tensor(std::get<ThreeFormBackground>(back.background).h,
                        std::get<ThreeFormBackground>(spec.background).h));
    CHECK(spec_to_json(back) == text);
  }
}

TEST_CASE("reports render deterministically in every format") {
  const ManifoldSpec spec = parse_spec(kSu2);
  for (auto format : {OutputFormat::Text, OutputFormat::Json, OutputFormat::Csv}) {
    CHECK(render_report(spec, check(spec), format) == render_report(parse_spec(kSu2), check(parse_spec(kSu2)), format));
  }
  const std::string text = render_report(spec, check(spec), OutputFormat::Text);
  CHECK(text.find("poisson: true") != std::string::npos);
  const std::string structure = render_structure(spec, structure_functions(spec.pi, effective_h(spec)), OutputFormat::Text);
  CHECK(structure.find("c^{12}_3 = -1") != std::string::npos);
  const json report = json::parse(render_report(spec, check(spec), OutputFormat::Json));
  CHECK(report["conventions"]["twisted_symplectic_sign"] == kTwistedSymplecticSign);
  CHECK(report["residual"].empty());
}

TEST_CASE("closure tables") {
  const ManifoldSpec spec = parse_spec(json::parse(R"J({"dimension": 4, "coordinates": ["x1","x2","x3","x4"],
    "bivector": {"1,2": "-1", "3,4": "-1/(1 + x1)"}, "two_form": {"1,2": "x1", "3,4": "-x1"}})J"));
  const std::vector<std::size_t> sites{16, 32, 64};
  const std::string csv = render_closure(closure_study(spec, sites, 9), OutputFormat::Csv);
  CHECK(csv.rfind("N,max_constraint,closure_residual,ratio_to_previous\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv == render_closure(closure_study(spec, sites, 9), OutputFormat::Csv));
  const json j = json::parse(render_closure(closure_study(spec, sites, 9), OutputFormat::Json));
  CHECK(j["passed"] == true);
  CHECK(j["rows"].size() == 3);
}

TEST_CASE("parse_format") {
  CHECK(parse_format("csv") == OutputFormat::Csv);
  CHECK_THROWS_AS(parse_format("yaml"), Error);
}
