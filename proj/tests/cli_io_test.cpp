#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"
#include "tdq/io.hpp"

using namespace tdq;
using namespace tdq::testing;

namespace {

using M = Matrix<Q>;

TEST(FixtureJson, LayoutOfGeneratedFixture) {
  const QRacahParams<Q> p{1, Q(2), Q(3), Q(5)};
  const auto fx = fixture_from_leonard(leonard_suite(p, Basis::u), default_field_spec<Q>());
  const Json j = fixture_json(fx);
  EXPECT_EQ(j.at("format"), kFixtureFormat);
  EXPECT_EQ(j.at("basis"), "u");
  EXPECT_EQ(j.at("matrices").at("M"), Json::parse(R"([["2","3/4"],["0","1/2"]])"));
  EXPECT_EQ(j.at("matrices").at("T_w_to_u"), Json::parse(R"([["1","1/2"],["0","1"]])"));
}

TEST(FixtureJson, RoundTripLeonard) {
  for (const auto& p : grid(4)) {
    for (auto basis : kAllBases) {
      const auto fx = fixture_from_leonard(leonard_suite(p, basis), default_field_spec<Q>());
      const auto back = fixture_from_json<Q>(Json::parse(dump(fixture_json(fx))));
      EXPECT_EQ(back, fx);
      EXPECT_EQ(dump(fixture_json(back)), dump(fixture_json(fx)));
    }
  }
}

TEST(FixtureJson, RoundTripSuites) {
  Gen g(81);
  for (int d = 1; d <= 3; ++d) {
    const QRacahParams<Q> p{d, Q(3), Q(2), Q(7)};
    const M s = g.invertible(static_cast<std::size_t>(d + 1));
    const M sinv = inverse(s);
    const auto suite = derive_suite(EngineInput<Q>{s * operator_matrix_formula(OperatorKind::A, Basis::u, p) * sinv,
                                                   s * operator_matrix_formula(OperatorKind::K, Basis::u, p) * sinv,
                                                   std::nullopt, p});
    const auto fx = fixture_from_suite(suite, default_field_spec<Q>());
    const auto back = fixture_from_json<Q>(Json::parse(dump(fixture_json(fx))));
    EXPECT_EQ(back, fx);
    EXPECT_EQ(suite_from_fixture(back), suite);
  }
  const auto f = full_fixture();
  const auto suite = derive_suite(EngineInput<Q>{f.A, std::nullopt, f.Astar, f.params});
  const auto fx = fixture_from_suite(suite, default_field_spec<Q>());
  EXPECT_EQ(suite_from_fixture(fixture_from_json<Q>(fixture_json(fx))), suite);
}

TEST(FixtureJson, RoundTripSymbolic) {
  const auto p = symbolic_params(2);
  const auto fx = fixture_from_leonard(leonard_suite(p, Basis::w), default_field_spec<R>());
  EXPECT_EQ(fixture_from_json<R>(Json::parse(dump(fixture_json(fx)))), fx);
}

Json minimal_fixture() {
  return Json::parse(R"({
    "format": "tdq-fixture/1",
    "field": {"kind": "rational"},
    "params": {"d": 1, "q": "2", "a": "3"},
    "basis": "abstract",
    "matrices": {"A": [["37/6", "0"], ["1", "13/6"]], "K": [["2", "0"], ["0", "1/2"]]}
  })");
}

TEST(FixtureJson, MinimalInputParses) {
  const auto fx = fixture_from_json<Q>(minimal_fixture());
  EXPECT_EQ(fx.dimension(), 2U);
  EXPECT_FALSE(fx.params.b.has_value());
  const auto [in, claims] = engine_input(fx);
  EXPECT_TRUE(claims.empty());
  EXPECT_TRUE(in.K.has_value());
}

TEST(FixtureJson, FormatErrors) {
  auto j = minimal_fixture();
  j["format"] = "tdq-fixture/0";
  EXPECT_THROW(fixture_field(j), FormatError);

  j = minimal_fixture();
  j["matrices"]["K"] = Json::parse(R"([["2", "0"]])");
  EXPECT_THROW(fixture_from_json<Q>(j), Error);

  j = minimal_fixture();
  j["matrices"]["A"][0][0] = 1.5;
  EXPECT_THROW(fixture_from_json<Q>(j), Error);

  j = minimal_fixture();
  j["matrices"]["A"][0][0] = "q";
  EXPECT_THROW(fixture_from_json<Q>(j), Error);

  // A ratfunc fixture may only use the variables it declares.
  j = minimal_fixture();
  j["field"] = Json::parse(R"({"kind": "ratfunc", "variables": ["q"]})");
  j["params"]["a"] = "a";
  EXPECT_THROW(fixture_from_json<R>(j), Error);
  j["field"]["variables"] = Json::parse(R"(["q", "a"])");
  EXPECT_NO_THROW(fixture_from_json<R>(j));

  j = minimal_fixture();
  j.erase("params");
  EXPECT_THROW(fixture_from_json<Q>(j), Error);
}

TEST(Report, CountsAndExitCode) {
  VerificationReport r;
  r.entries.push_back({"x", "anchor x", ItemStatus::pass, std::nullopt});
  r.entries.push_back({"y", "anchor y", ItemStatus::skipped_needs_astar, std::nullopt});
  ReportInstance inst{"f.json", "rational", "u", Json::object(), 2};
  Json j = report_json(inst, r);
  EXPECT_EQ(j.at("format"), kReportFormat);
  EXPECT_EQ(j.at("summary").at("total"), 2);
  EXPECT_EQ(j.at("summary").at("skipped-needs-Astar"), 1);
  EXPECT_EQ(j.at("exit_code"), 0);
  EXPECT_TRUE(j.at("entries").at(0).at("witness").is_null());

  r.entries.push_back({"z", "anchor z", ItemStatus::fail, Witness{"broken", {{"lhs", "[[1]]"}}}});
  j = report_json(inst, r);
  EXPECT_EQ(j.at("exit_code"), 1);
  EXPECT_EQ(j.at("entries").at(2).at("witness").at("data").at("lhs"), "[[1]]");
  const std::string text = report_text(inst, r);
  EXPECT_NE(text.find("fail  broken"), std::string::npos);
  EXPECT_NE(text.find("pass 1, fail 1, skipped 1"), std::string::npos);
}

TEST(Report, LeonardFixtureCheck) {
  const QRacahParams<Q> p{2, Q(2), Q(3), Q(5)};
  auto fx = fixture_from_leonard(leonard_suite(p, Basis::udd), default_field_spec<Q>());
  EXPECT_EQ(leonard_fixture_check(fx).status, ItemStatus::pass);
  fx.matrices.at("T_u_to_w")(0, 1) += Q(1);
  const auto e = leonard_fixture_check(fx);
  EXPECT_EQ(e.status, ItemStatus::fail);
  ASSERT_TRUE(e.witness.has_value());
  EXPECT_NE(e.witness->message.find("T_u_to_w"), std::string::npos);
}

TEST(Report, AxiomsEntry) {
  const auto f = full_fixture();
  EXPECT_EQ(axioms_entry(f.A, f.Astar, f.params).status, ItemStatus::pass);
  const auto g = full_fixture(Q(0));
  EXPECT_EQ(axioms_entry(g.A, g.Astar, g.params).status, ItemStatus::fail);
}

TEST(Files, AtomicWriteReplacesContent) {
  const auto dir = std::filesystem::temp_directory_path() / ("tdq_io_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.json";
  write_file_atomic(path, "{\"x\": 1}\n");
  write_file_atomic(path, "{\"x\": 2}\n");
  EXPECT_EQ(read_json_file(path).at("x"), 2);
  std::size_t count = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++count;
  EXPECT_EQ(count, 1U);
  std::filesystem::remove_all(dir);
  EXPECT_THROW(read_json_file(path), FormatError);
}

}  // namespace
