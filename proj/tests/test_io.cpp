#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "lorentz/io.hpp"
#include "support.hpp"

using namespace lorentz;
using nlohmann::json;

namespace {

json finite_pair() {
  return json::parse(R"({"format_version": 1, "kind": "finite",
    "finite": {"n": 2, "d": [[0, 1], [1, 0]], "leq": [[true, true], [false, true]],
               "ll": [[false, true], [false, false]], "tau": [[0, "1.5"], [0, 0]]}})");
}

}  // namespace

TEST(Io, RealsRoundTripAsStrings) {
  const double x = 0.1 + 0.2;
  EXPECT_EQ(io::read_real(io::real(x), "x"), x);
  EXPECT_EQ(io::real_string(0.05), "0.050000000000000003");
  EXPECT_EQ(io::read_real(json("1e-9"), "x"), 1e-9);
  EXPECT_EQ(io::read_real(json(2), "x"), 2.0);
  EXPECT_THROW(io::read_real(json("abc"), "x"), StructuralError);
  EXPECT_THROW(io::read_real(json(true), "x"), StructuralError);
}

TEST(Io, SyntaxErrorHasLineAndColumn) {
  try {
    io::parse_json("{\n  \"a\": [1, 2,\n}", "mem");
    FAIL() << "no exception";
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.line, 3u);
    EXPECT_GE(e.column, 1u);
    EXPECT_NE(std::string(e.what()).find("mem:3:"), std::string::npos);
  }
}

TEST(Io, FiniteSpace) {
  const auto f = io::parse_space(finite_pair());
  const auto& s = std::get<FiniteLorentzSpace>(f.space);
  EXPECT_EQ(s.tau(0, 1), 1.5);
  EXPECT_TRUE(validate_axioms(s).passed());
}

TEST(Io, VersionAndKindChecked) {
  auto j = finite_pair();
  j["format_version"] = 2;
  EXPECT_THROW(io::parse_space(j), StructuralError);
  j = finite_pair();
  j["kind"] = "sphere";
  EXPECT_THROW(io::parse_space(j), StructuralError);
  j = finite_pair();
  j["finite"]["tau"][1] = json::array({0});
  EXPECT_THROW(io::parse_space(j), StructuralError);
}

TEST(Io, ProductAndTolerances) {
  const auto j = json::parse(R"({"format_version": 1, "kind": "product", "mesh": "0.05",
    "tolerances": {"busemann": "0.02"},
    "product": {"factor": {"kind": "euclidean_segment", "a": 0, "b": 1, "n": 21},
                "grid": {"t_min": -1, "t_max": 1, "t_step": "0.5"}}})");
  const auto f = io::parse_space(j);
  EXPECT_EQ(f.mesh, 0.05);
  EXPECT_EQ(*f.tol.busemann, 0.02);
  const auto& X = std::get<ProductSpace>(f.space);
  EXPECT_EQ(X.factor().size(), 21u);
  EXPECT_EQ(X.sample_points().size(), 21u * 5u);
}

TEST(Io, PointArguments) {
  EXPECT_EQ(io::parse_point_arg<PointId>("3"), 3u);
  const auto m = io::parse_point_arg<MinkowskiPoint>("1.5,-2");
  EXPECT_EQ(m.t, 1.5);
  EXPECT_EQ(m.x, -2.0);
  const auto p = io::parse_point_arg<ProductPoint>("0.25,7");
  EXPECT_EQ(p.x, 7u);
  EXPECT_THROW(io::parse_point_arg<ProductPoint>("0.25,0.5"), StructuralError);
  EXPECT_THROW(io::parse_point_arg<PointId>("-1"), StructuralError);
}

TEST(Io, LinesVerified) {
  MinkowskiSpace m;
  const auto ok = json::parse(R"({"format_version": 1, "kind": "line", "points": [[0,0],[1,0],[2,0]], "anchor": 1})");
  const auto l = io::parse_line(m, ok);
  EXPECT_EQ(l.tau_params, (std::vector<double>{-1, 0, 1}));
  const auto bad = json::parse(R"({"format_version": 1, "kind": "line", "points": [[0,0],[1,20],[2,0]]})");
  EXPECT_THROW(io::parse_line(m, bad), VerificationError);
  const auto vert = json::parse(R"({"format_version": 1, "kind": "line", "vertical": {"x": 0, "s_min": -1, "s_max": 1, "step": 1}})");
  EXPECT_THROW(io::parse_line(m, vert), StructuralError);
}

TEST(Io, ShippedExamplesLoad) {
  const std::filesystem::path dir = LORENTZ_EXAMPLES_DIR;
  for (const char* name : {"finite_diamond.json", "minkowski_strip.json", "product_segment21.json"})
    EXPECT_NO_THROW(io::load_space((dir / name).string())) << name;
  const auto f = io::load_space((dir / "product_segment21.json").string());
  EXPECT_NO_THROW(io::load_line(std::get<ProductSpace>(f.space), (dir / "line_vertical.json").string()));
  EXPECT_THROW(io::load_space((dir / "missing.json").string()), io::IoError);
}

TEST(Io, AtomicWrite) {
  const auto path = std::filesystem::temp_directory_path() / "lorentz_io_test.json";
  io::write_atomic(path.string(), "{}\n");
  std::ifstream in(path);
  std::string s;
  std::getline(in, s);
  EXPECT_EQ(s, "{}");
  std::filesystem::remove(path);
}
