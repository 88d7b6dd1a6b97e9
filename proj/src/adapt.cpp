#include "stokes_afem/adapt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "stokes_afem/basis.hpp"
#include "stokes_afem/error.hpp"
#include "stokes_afem/quadrature.hpp"

namespace stokes_afem {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

long dofs_for(int elements, int k) {
  return static_cast<long>(elements) * (2 * poly_dim(k) + poly_dim(k - 1));
}

double segment_distance(const Point& x, const Point& a, const Point& b) {
  const Point d = b - a;
  const double t = std::clamp((x - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (x - (a + t * d)).norm();
}

// Distance from x to the closed triangle e.
double element_distance(const SimplicialMesh& mesh, int e, const Point& x) {
  const auto& t = mesh.element(e);
  const Point& a = mesh.vertex(t[0]);
  const Point& b = mesh.vertex(t[1]);
  const Point& c = mesh.vertex(t[2]);
  auto cross = [](const Point& u, const Point& v) { return u.x() * v.y() - u.y() * v.x(); };
  if (cross(b - a, x - a) >= 0.0 && cross(c - b, x - b) >= 0.0 && cross(a - c, x - c) >= 0.0) {
    return 0.0;
  }
  return std::min({segment_distance(x, a, b), segment_distance(x, b, c), segment_distance(x, c, a)});
}

struct Level {
  IterationRecord record;
  std::vector<int> marked;
  EigenSolution eigen;
};

// Assemble, solve, estimate and mark on one mesh.
Level process_level(const SimplicialMesh& mesh, const AdaptiveOptions& o, int level,
                    const std::optional<Eigen::VectorXd>& warm, Clock::time_point t0) {
  const BrokenSpaceLayout space(mesh, o.k);
  AssemblyOptions ao;
  ao.gamma_c1 = o.gamma_c1;
  ao.threads = o.threads;
  const AssembledSystem system = assemble(mesh, space, ao);

  EigenOptions eo;
  eo.nev = std::max(o.nev, o.marked_pairs);
  if (warm) eo.initial_velocity = *warm;
  Level out;
  out.eigen = solve_eigen(system, eo);
  STOKES_AFEM_REQUIRE(static_cast<int>(out.eigen.eigenvalues.size()) >= o.marked_pairs, Solver,
                      "fewer converged eigenpairs than requested for marking");

  EstimatorOptions es;
  es.gamma = system.gamma;
  es.half_interior_jump = o.half_interior_jump;
  es.threads = o.threads;
  std::vector<IndicatorField> fields;
  for (int m = 0; m < o.marked_pairs; ++m) {
    fields.push_back(estimate(mesh, space, out.eigen.eigenvalues[m], out.eigen.velocity[m],
                              out.eigen.pressure[m], es));
  }
  const IndicatorField indicators = sum_indicators(fields);
  out.marked = dorfler_mark(indicators.eta2, o.theta);

  IterationRecord& r = out.record;
  r.level = level;
  r.dofs = space.num_dofs();
  r.elements = mesh.num_elements();
  r.lambda1 = out.eigen.eigenvalues.front();
  r.eigenvalues = out.eigen.eigenvalues;
  r.eta2 = indicators.eta2_total;
  r.marked = static_cast<int>(out.marked.size());
  r.max_eta_element = indicators.argmax();
  if (r.max_eta_element >= 0) {
    r.max_eta_diameter = mesh.diameter(r.max_eta_element);
    if (const auto sp = singular_point(o.domain)) {
      r.max_eta_distance = element_distance(mesh, r.max_eta_element, *sp);
    }
  }
  r.seconds = seconds_since(t0);
  if (o.on_level) o.on_level(LevelState{mesh, space, system, out.eigen, indicators, r});
  return out;
}

void validate(const AdaptiveOptions& o) {
  STOKES_AFEM_REQUIRE(o.k >= 1 && o.k <= 3, InvalidArgument, "k must be 1, 2 or 3");
  STOKES_AFEM_REQUIRE(o.theta > 0.0 && o.theta < 1.0, InvalidArgument, "theta must lie in (0, 1)");
  STOKES_AFEM_REQUIRE(o.n >= 1, InvalidArgument, "n must be >= 1");
  STOKES_AFEM_REQUIRE(o.nev >= 1 && o.marked_pairs >= 1, InvalidArgument,
                      "nev and marked pairs must be >= 1");
  STOKES_AFEM_REQUIRE(o.max_dof > 0 && o.max_levels >= 1, InvalidArgument,
                      "dof budget and level cap must be positive");
}

}  // namespace

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::MaxDof: return "max-dof";
    case Termination::EtaTolerance: return "eta-tol";
    case Termination::EstimatorZero: return "estimator-zero";
    case Termination::MaxLevels: return "max-levels";
    case Termination::Completed: return "completed";
  }
  return "unknown";
}

std::vector<int> dorfler_mark(std::span<const double> eta2, double theta) {
  STOKES_AFEM_REQUIRE(theta > 0.0 && theta < 1.0, InvalidArgument, "theta must lie in (0, 1)");
  std::vector<int> order(eta2.size());
  std::iota(order.begin(), order.end(), 0);
  for (double v : eta2) {
    STOKES_AFEM_REQUIRE(std::isfinite(v) && v >= 0.0, InvalidArgument,
                        "indicators must be finite and non-negative");
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return eta2[a] > eta2[b]; });
  // Summing in sorted order makes the full prefix equal the total exactly.
  double total = 0.0;
  for (int i : order) total += eta2[i];
  if (total <= 0.0) return {};
  const double target = theta * total;
  std::vector<int> marked;
  double sum = 0.0;
  for (int i : order) {
    if (eta2[i] <= 0.0) break;
    marked.push_back(i);
    sum += eta2[i];
    if (sum >= target) break;
  }
  return marked;
}

Eigen::VectorXd transfer_velocity(const SimplicialMesh& coarse, const BrokenSpaceLayout& coarse_space,
                                  const Eigen::VectorXd& u, const SimplicialMesh& fine,
                                  const BrokenSpaceLayout& fine_space,
                                  std::span<const int> parent) {
  STOKES_AFEM_REQUIRE(coarse_space.matches(coarse) && fine_space.matches(fine), InvalidArgument,
                      "layouts do not match the meshes");
  STOKES_AFEM_REQUIRE(coarse_space.degree() == fine_space.degree(), InvalidArgument,
                      "transfer needs equal polynomial degrees");
  STOKES_AFEM_REQUIRE(static_cast<int>(parent.size()) == fine.num_elements(), InvalidArgument,
                      "parent map has wrong length");
  STOKES_AFEM_REQUIRE(u.size() == coarse_space.num_velocity_dofs(), InvalidArgument,
                      "velocity does not match the coarse layout");
  const int nv = fine_space.velocity_dim();
  const ReferenceBasis& vb = fine_space.velocity_basis();
  const QuadratureRule rule = triangle_rule(2 * fine_space.degree());
  Eigen::VectorXd out(fine_space.num_velocity_dofs());
  for (int e = 0; e < fine.num_elements(); ++e) {
    const int pe = parent[e];
    STOKES_AFEM_REQUIRE(pe >= 0 && pe < coarse.num_elements(), InvalidArgument,
                        "parent index out of range");
    const ElementMap fmap(fine, e);
    const ElementMap cmap(coarse, pe);
    const auto cx = u.segment(coarse_space.velocity_offset(pe), nv);
    const auto cy = u.segment(coarse_space.velocity_offset(pe) + nv, nv);
    auto blk = out.segment(fine_space.velocity_offset(e), 2 * nv);
    blk.setZero();
    // Orthonormal basis on the reference element: coefficient = reference
    // integral of the field against the basis function.
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::VectorXd phi = vb.values(rule.points[q]);
      const Eigen::VectorXd cphi = vb.values(cmap.to_reference(fmap.to_physical(rule.points[q])));
      blk.head(nv) += (rule.weights[q] * cphi.dot(cx)) * phi;
      blk.tail(nv) += (rule.weights[q] * cphi.dot(cy)) * phi;
    }
  }
  return out;
}

AdaptiveTrace adaptive_loop(const AdaptiveOptions& options) {
  validate(options);
  AdaptiveTrace trace;
  SimplicialMesh mesh = generate_domain(options.domain, options.n);
  std::optional<Eigen::VectorXd> warm;
  auto t0 = Clock::now();
  for (int level = 0;; ++level) {
    Level lv = process_level(mesh, options, level, warm, t0);
    trace.records.push_back(lv.record);
    if (options.eta_tol > 0.0 && lv.record.eta2 < options.eta_tol) {
      trace.reason = Termination::EtaTolerance;
      break;
    }
    if (lv.marked.empty()) {
      trace.reason = Termination::EstimatorZero;
      break;
    }
    if (level + 1 >= options.max_levels) {
      trace.reason = Termination::MaxLevels;
      break;
    }
    t0 = Clock::now();
    std::vector<int> parent;
    SimplicialMesh refined = bisect(mesh, lv.marked, &parent);
    if (dofs_for(refined.num_elements(), options.k) > options.max_dof) {
      trace.reason = Termination::MaxDof;
      break;
    }
    if (options.warm_start) {
      const BrokenSpaceLayout coarse_space(mesh, options.k);
      const BrokenSpaceLayout fine_space(refined, options.k);
      warm = transfer_velocity(mesh, coarse_space, lv.eigen.velocity.front(), refined, fine_space,
                               parent);
    }
    mesh = std::move(refined);
  }
  return trace;
}

AdaptiveTrace uniform_loop(const AdaptiveOptions& options, int levels) {
  validate(options);
  STOKES_AFEM_REQUIRE(levels >= 1, InvalidArgument, "levels must be >= 1");
  AdaptiveTrace trace;
  for (int level = 0; level < levels; ++level) {
    const int n = options.n << level;
    const auto t0 = Clock::now();
    const SimplicialMesh mesh = generate_domain(options.domain, n);
    if (level > 0 && dofs_for(mesh.num_elements(), options.k) > options.max_dof) {
      trace.reason = Termination::MaxDof;
      return trace;
    }
    trace.records.push_back(process_level(mesh, options, level, std::nullopt, t0).record);
  }
  trace.reason = Termination::Completed;
  return trace;
}

}  // namespace stokes_afem
