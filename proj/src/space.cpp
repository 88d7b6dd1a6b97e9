#include "stokes_afem/space.hpp"

#include <string>

#include "stokes_afem/error.hpp"

namespace stokes_afem {

namespace {

int checked_velocity_degree(int k) {
  STOKES_AFEM_REQUIRE(k >= 1 && k <= kMaxDegree, InvalidArgument,
                      "velocity degree must be in [1, " + std::to_string(kMaxDegree) +
                          "], got " + std::to_string(k));
  return k;
}

}  // namespace

BrokenSpaceLayout::BrokenSpaceLayout(const SimplicialMesh& mesh, int k)
    : k_(checked_velocity_degree(k)),
      num_elements_(mesh.num_elements()),
      velocity_(k),
      pressure_(k - 1) {}

BrokenSpaceLayout layout(const SimplicialMesh& mesh, int k) { return BrokenSpaceLayout(mesh, k); }

}  // namespace stokes_afem
