#include "mubkit/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace mubkit;

TEST(FormatDouble, SeventeenDigitsAndNoNegativeZero) {
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_double(-0.0), "0");
  EXPECT_EQ(io::format_double(1.0), "1");
  EXPECT_EQ(io::format_double(-2.5), "-2.5");
}

TEST(FormatDouble, RoundTripsRandomValues) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int k = 0; k < 2000; ++k) {
    const double v = dist(rng);
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
}

TEST(Dump, LayoutIsStable) {
  io::Json j;
  j["dim"] = 2;
  j["row"] = io::Json::array({1.5, -0.0});
  j["nested"] = io::Json::array({io::Json::array({1, 2}), io::Json::array({3})});
  EXPECT_EQ(io::dump(j), "{\n  \"dim\": 2,\n  \"row\": [1.5, 0],\n  \"nested\": [\n    [1, 2],\n    [3]\n  ]\n}\n");
}

TEST(Amplitude, ExactEncoding) {
  const auto j = io::amplitude_to_json(PhaseExponent(4, 3), 1);
  EXPECT_EQ(j["num"], 4);
  EXPECT_EQ(j["mod"], 6);
  EXPECT_EQ(j["scale_sqrt_dim"], 1);
  EXPECT_TRUE(io::amplitude_to_json(std::nullopt, 1).is_null());
}

TEST(MatrixJson, ExactGridForV) {
  const auto j = io::matrix_to_json(build_v(3, 1));
  EXPECT_EQ(j["dim"], 3);
  EXPECT_EQ(j["mod"], 6);
  EXPECT_EQ(j["entries"].size(), 9u);
  EXPECT_EQ(j["exact"][1], 2);
  EXPECT_TRUE(j["exact"][0].is_null());
  EXPECT_FALSE(io::matrix_to_json(OperatorMatrix(Eigen::MatrixXcd::Identity(2, 2))).contains("exact"));
}

TEST(Labels, ParseAndPrint) {
  EXPECT_EQ(io::label_from_json(io::Json("s")), BasisLabel::spherical());
  EXPECT_EQ(io::label_from_json(io::Json(3)), BasisLabel::parameter(3));
  EXPECT_EQ(io::label_from_json(io::Json("class:4")), BasisLabel::commuting_class(4));
  EXPECT_THROW(io::label_from_json(io::Json("q")), ParameterError);
  for (const auto& l : {BasisLabel::spherical(), BasisLabel::parameter(2), BasisLabel::commuting_class(7)})
    EXPECT_EQ(io::label_from_json(io::label_to_json(l)), l);
}

TEST(MubSetJson, RoundTripIsByteStable) {
  for (int d : {2, 3, 5, 7}) {
    for (bool exact : {false, true}) {
      const auto set = build_complete_set(d);
      const std::string first = io::dump(io::mubset_to_json(set, exact));
      const auto back = io::mubset_from_json(io::Json::parse(first));
      EXPECT_EQ(io::dump(io::mubset_to_json(back, exact)), first) << d << " " << exact;
      ASSERT_EQ(back.bases.size(), set.bases.size());
      for (std::size_t b = 0; b < set.bases.size(); ++b) {
        EXPECT_EQ(back.bases[b].label, set.bases[b].label);
        EXPECT_EQ(back.bases[b].has_exact(), exact);
        EXPECT_EQ((back.bases[b].as_matrix() - set.bases[b].as_matrix()).cwiseAbs().maxCoeff(), 0.0);
      }
      EXPECT_TRUE(verify_set(back).summary.passed);
    }
  }
}

TEST(MubSetJson, CompositeMembersSurvive) {
  const auto set = build_composite_set(2, 2);
  const auto back = io::mubset_from_json(io::Json::parse(io::dump(io::mubset_to_json(set, false))));
  for (std::size_t b = 0; b < set.bases.size(); ++b) EXPECT_EQ(back.bases[b].members, set.bases[b].members);
  EXPECT_TRUE(verify_set(back, 1e-9).summary.passed);
}

TEST(MubSetJson, RejectsMalformedInput) {
  auto j = io::mubset_to_json(build_complete_set(3), true);
  auto bad_mod = j;
  bad_mod["bases"][1]["vectors"][0][0]["mod"] = 10;
  EXPECT_THROW(io::mubset_from_json(bad_mod), DimensionError);
  auto short_vec = j;
  short_vec["bases"][0]["vectors"][0].erase(0);
  EXPECT_THROW(io::mubset_from_json(short_vec), DimensionError);
  EXPECT_THROW(io::mubset_from_json(io::Json::object()), nlohmann::json::exception);
  EXPECT_THROW(io::read_json_file("/nonexistent/set.json"), ParameterError);
}

TEST(MubSetCsv, HeaderAndRows) {
  const auto csv = io::mubset_to_csv(build_complete_set(2));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "basis,index,re0,im0,re1,im1");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
  EXPECT_NE(csv.find("\ns,0,1,0,0,0\n"), std::string::npos);
}

TEST(ReportJson, Fields) {
  const auto rep = q_commutation_residual(3, 1);
  const auto j = io::report_to_json(rep);
  EXPECT_EQ(j["pass"], true);
  EXPECT_EQ(j["exact_pass"], true);
  EXPECT_TRUE(j["residuals"].is_object());
}
