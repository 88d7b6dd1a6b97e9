#pragma once

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stokes_afem/assembly.hpp"
#include "stokes_afem/estimator.hpp"
#include "stokes_afem/mesh.hpp"

namespace stokes_afem {

using CellField = std::pair<std::string, std::vector<double>>;

/// Legacy ASCII VTK unstructured grid (triangles, cell type 5) with optional
/// per-cell scalar fields.
void write_vtk(const std::filesystem::path& path, const SimplicialMesh& mesh,
               const std::vector<CellField>& cell_data = {});

/// The indicator components as VTK cell fields.
std::vector<CellField> indicator_cell_fields(const IndicatorField& indicators);

/// CSV with header element_id,eta2_R,eta2_E,eta2_J,eta2.
void write_indicators_csv(const std::filesystem::path& path, const IndicatorField& indicators);

/// MatrixMarket coordinate dumps A.mtx, B.mtx, M.mtx with the given prefix.
void write_matrices(const std::filesystem::path& directory, const std::string& prefix,
                    const AssembledSystem& system);

/// results.csv writer. Every row is flushed so an aborted run keeps the rows
/// written so far.
class ResultsCsv {
public:
  static constexpr const char* kHeader = "l,dof,lambda1,eta2,err_vs_ref,seconds";

  explicit ResultsCsv(const std::filesystem::path& path);
  ~ResultsCsv();
  ResultsCsv(const ResultsCsv&) = delete;
  ResultsCsv& operator=(const ResultsCsv&) = delete;

  void append(int level, long dofs, double lambda1, double eta2, std::optional<double> error,
              double seconds);

private:
  std::FILE* file_ = nullptr;
};

/// Four-digit zero-padded file name, e.g. numbered_name("mesh_", 7, ".vtk")
/// gives "mesh_0007.vtk".
std::string numbered_name(const std::string& stem, int index, const std::string& extension);

}  // namespace stokes_afem
