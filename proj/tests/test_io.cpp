#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stokes_afem/error.hpp"
#include "stokes_afem/io.hpp"
#include "support.hpp"

namespace stokes_afem {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("stokes_afem_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Io, NumberedNames) {
  EXPECT_EQ(numbered_name("mesh_", 7, ".vtk"), "mesh_0007.vtk");
  EXPECT_EQ(numbered_name("indicators_", 123, ".csv"), "indicators_0123.csv");
}

TEST(Io, ResultsCsvMatchesGoldenFile) {
  const fs::path dir = scratch("golden");
  {
    ResultsCsv csv(dir / "results.csv");
    csv.append(0, 3584, 53.791088168843, 65.87105758, 1.446397001, 0.1371);
    csv.append(1, 14336, 52.742490882411, 18.80083073, std::nullopt, 12.5);
  }
  EXPECT_EQ(slurp(dir / "results.csv"), slurp(fs::path(STOKES_AFEM_TEST_DATA) / "results_golden.csv"));
}

TEST(Io, ResultsRowsAreOnDiskBeforeClose) {
  const fs::path dir = scratch("flush");
  ResultsCsv csv(dir / "results.csv");
  csv.append(0, 10, 1.0, 1.0, std::nullopt, 0.0);
  EXPECT_EQ(slurp(dir / "results.csv"),
            "l,dof,lambda1,eta2,err_vs_ref,seconds\n0,10,1.000000000000,1.000000000e+00,,0.000\n");
}

TEST(Io, LegacyVtkLayout) {
  const fs::path dir = scratch("vtk");
  const SimplicialMesh m = testing::two_triangle_square();
  write_vtk(dir / "m.vtk", m, {{"eta2", {1.5, 2.5}}});
  const std::string text = slurp(dir / "m.vtk");
  EXPECT_EQ(text.rfind("# vtk DataFile Version 3.0\n", 0), 0u);
  EXPECT_NE(text.find("DATASET UNSTRUCTURED_GRID"), std::string::npos);
  EXPECT_NE(text.find("POINTS 4 double"), std::string::npos);
  EXPECT_NE(text.find("CELLS 2 8\n3 1 2 0\n3 3 0 2\n"), std::string::npos);
  EXPECT_NE(text.find("CELL_TYPES 2\n5\n5\n"), std::string::npos);
  EXPECT_NE(text.find("CELL_DATA 2\nSCALARS eta2 double 1\nLOOKUP_TABLE default\n1.5\n2.5\n"),
            std::string::npos);
  EXPECT_THROW(write_vtk(dir / "bad.vtk", m, {{"x", {1.0}}}), Error);
}

TEST(Io, IndicatorCsv) {
  const fs::path dir = scratch("ind");
  IndicatorField f;
  f.eta2_R = {1, 2};
  f.eta2_E = {0.5, 0};
  f.eta2_J = {0.25, 1};
  f.eta2 = {1.75, 3};
  write_indicators_csv(dir / "i.csv", f);
  EXPECT_EQ(slurp(dir / "i.csv"), "element_id,eta2_R,eta2_E,eta2_J,eta2\n0,1,0.5,0.25,1.75\n1,2,0,1,3\n");
  EXPECT_EQ(indicator_cell_fields(f).size(), 4u);
}

TEST(Io, MatrixMarketDump) {
  const fs::path dir = scratch("mtx");
  const SimplicialMesh m = testing::two_triangle_square();
  const AssembledSystem sys = assemble(m, BrokenSpaceLayout(m, 1));
  write_matrices(dir, "level_0000_", sys);
  for (const char* name : {"A", "B", "M"}) {
    const std::string text = slurp(dir / (std::string("level_0000_") + name + ".mtx"));
    EXPECT_EQ(text.rfind("%%MatrixMarket matrix coordinate", 0), 0u) << name;
    EXPECT_NE(text.find("real general"), std::string::npos) << name;
  }
  const std::string b = slurp(dir / "level_0000_B.mtx");
  EXPECT_NE(b.find("\n2 12 "), std::string::npos);
}

TEST(Io, UnwritablePathRaisesIoError) {
  try {
    ResultsCsv csv("/proc/definitely/not/here/results.csv");
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}

}  // namespace
}  // namespace stokes_afem
