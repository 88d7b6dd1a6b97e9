#include "stokes_afem/io.hpp"

#include <fstream>

#include <fmt/format.h>
#include <fmt/os.h>
#include <unsupported/Eigen/SparseExtra>

#include "stokes_afem/error.hpp"

namespace stokes_afem {

namespace {

std::ofstream open_for_writing(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  STOKES_AFEM_REQUIRE(out.good(), Io, "cannot open '" + path.string() + "' for writing");
  out.precision(17);
  return out;
}

}  // namespace

std::string numbered_name(const std::string& stem, int index, const std::string& extension) {
  return fmt::format("{}{:04d}{}", stem, index, extension);
}

void write_vtk(const std::filesystem::path& path, const SimplicialMesh& mesh,
               const std::vector<CellField>& cell_data) {
  for (const auto& [name, values] : cell_data) {
    STOKES_AFEM_REQUIRE(static_cast<int>(values.size()) == mesh.num_elements(), InvalidArgument,
                        "cell field '" + name + "' has wrong length");
  }
  std::ofstream out = open_for_writing(path);
  out << "# vtk DataFile Version 3.0\n"
      << "stokes-afem mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Point& v : mesh.vertices()) out << v.x() << ' ' << v.y() << " 0\n";
  out << "CELLS " << mesh.num_elements() << ' ' << 4 * mesh.num_elements() << '\n';
  for (const auto& t : mesh.elements()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.num_elements() << '\n';
  for (int e = 0; e < mesh.num_elements(); ++e) out << "5\n";
  if (!cell_data.empty()) {
    out << "CELL_DATA " << mesh.num_elements() << '\n';
    for (const auto& [name, values] : cell_data) {
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) out << v << '\n';
    }
  }
  STOKES_AFEM_REQUIRE(out.good(), Io, "failed writing '" + path.string() + "'");
}

std::vector<CellField> indicator_cell_fields(const IndicatorField& indicators) {
  return {{"eta2", indicators.eta2},
          {"eta2_R", indicators.eta2_R},
          {"eta2_E", indicators.eta2_E},
          {"eta2_J", indicators.eta2_J}};
}

void write_indicators_csv(const std::filesystem::path& path, const IndicatorField& indicators) {
  std::ofstream out = open_for_writing(path);
  out << "element_id,eta2_R,eta2_E,eta2_J,eta2\n";
  for (int e = 0; e < indicators.size(); ++e) {
    out << e << ',' << indicators.eta2_R[e] << ',' << indicators.eta2_E[e] << ','
        << indicators.eta2_J[e] << ',' << indicators.eta2[e] << '\n';
  }
  STOKES_AFEM_REQUIRE(out.good(), Io, "failed writing '" + path.string() + "'");
}

void write_matrices(const std::filesystem::path& directory, const std::string& prefix,
                    const AssembledSystem& system) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  const std::pair<const char*, const SparseMatrix*> blocks[] = {
      {"A", &system.A}, {"B", &system.B}, {"M", &system.M}};
  for (const auto& [name, matrix] : blocks) {
    const std::filesystem::path file = directory / (prefix + name + ".mtx");
    STOKES_AFEM_REQUIRE(Eigen::saveMarket(*matrix, file.string()), Io,
                        "cannot write '" + file.string() + "'");
  }
}

ResultsCsv::ResultsCsv(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  file_ = std::fopen(path.c_str(), "w");
  STOKES_AFEM_REQUIRE(file_ != nullptr, Io, "cannot open '" + path.string() + "' for writing");
  fmt::print(file_, "{}\n", kHeader);
  std::fflush(file_);
}

ResultsCsv::~ResultsCsv() {
  if (file_) std::fclose(file_);
}

void ResultsCsv::append(int level, long dofs, double lambda1, double eta2,
                        std::optional<double> error, double seconds) {
  const std::string err = error ? fmt::format("{:.9e}", *error) : std::string();
  fmt::print(file_, "{},{},{:.12f},{:.9e},{},{:.3f}\n", level, dofs, lambda1, eta2, err, seconds);
  STOKES_AFEM_REQUIRE(std::fflush(file_) == 0, Io, "failed writing results.csv");
}

}  // namespace stokes_afem
