#pragma once

#include "stokes_afem/basis.hpp"
#include "stokes_afem/mesh.hpp"

namespace stokes_afem {

/// Fully discontinuous P_k^2 x P_{k-1} degree-of-freedom map.
///
/// Global numbering puts all velocity dofs first, element by element, then all
/// pressure dofs. Within an element the velocity block is [u_x basis...,
/// u_y basis...]. Pressure indices returned by `pressure_dof` are relative to
/// the start of the pressure block.
class BrokenSpaceLayout {
public:
  BrokenSpaceLayout(const SimplicialMesh& mesh, int k);

  int degree() const { return k_; }
  int num_elements() const { return num_elements_; }
  const ReferenceBasis& velocity_basis() const { return velocity_; }
  const ReferenceBasis& pressure_basis() const { return pressure_; }

  int velocity_dim() const { return velocity_.dim(); }
  int pressure_dim() const { return pressure_.dim(); }
  int velocity_block() const { return 2 * velocity_.dim(); }

  int num_velocity_dofs() const { return num_elements_ * velocity_block(); }
  int num_pressure_dofs() const { return num_elements_ * pressure_dim(); }
  int num_dofs() const { return num_velocity_dofs() + num_pressure_dofs(); }

  int velocity_offset(int e) const { return e * velocity_block(); }
  int velocity_dof(int e, int component, int i) const {
    return velocity_offset(e) + component * velocity_dim() + i;
  }
  int pressure_offset(int e) const { return e * pressure_dim(); }
  int pressure_dof(int e, int i) const { return pressure_offset(e) + i; }
  int global_pressure_dof(int e, int i) const { return num_velocity_dofs() + pressure_dof(e, i); }

  /// True if the layout was built on a mesh with the same element count.
  bool matches(const SimplicialMesh& mesh) const { return mesh.num_elements() == num_elements_; }

private:
  int k_;
  int num_elements_;
  ReferenceBasis velocity_;
  ReferenceBasis pressure_;
};

BrokenSpaceLayout layout(const SimplicialMesh& mesh, int k);

}  // namespace stokes_afem
