#include "eit/fem.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <numbers>
#include <vector>

#include "eit/hash.hpp"

namespace eit {

namespace {
constexpr double kMmToM = 1e-3;
constexpr double kMaToA = 1e-3;
constexpr double kVToMv = 1e3;
}  // namespace

ConductivityField make_field(const Mesh& mesh, double constant_s_per_m) {
  return {Vec::Constant(mesh.n_elements(), constant_s_per_m), mesh_fingerprint(mesh)};
}

ConductivityField make_field(const Mesh& mesh, Vec values) {
  if (values.size() != mesh.n_elements())
    throw UsageError("conductivity vector length does not match element count");
  return {std::move(values), mesh_fingerprint(mesh)};
}

CurrentPatternSet adjacent_patterns(int n_electrodes, double amplitude_ma) {
  if (n_electrodes < 3) throw ConfigError("adjacent patterns need at least 3 electrodes");
  CurrentPatternSet p;
  p.kind = CurrentPatternSet::Kind::adjacent;
  p.amplitude_ma = amplitude_ma;
  p.currents_ma = Mat::Zero(n_electrodes - 1, n_electrodes);
  for (int k = 0; k + 1 < n_electrodes; ++k) {
    p.currents_ma(k, k) = amplitude_ma;
    p.currents_ma(k, k + 1) = -amplitude_ma;
  }
  return p;
}

CurrentPatternSet trig_patterns(int n_electrodes, double amplitude_ma) {
  if (n_electrodes < 4 || n_electrodes % 2 != 0)
    throw ConfigError("trigonometric patterns need an even electrode count >= 4");
  const int L = n_electrodes;
  CurrentPatternSet p;
  p.kind = CurrentPatternSet::Kind::trigonometric;
  p.amplitude_ma = amplitude_ma;
  p.currents_ma = Mat::Zero(L - 1, L);
  for (int k = 1; k < L; ++k) {
    for (int l = 0; l < L; ++l) {
      const double theta = 2.0 * std::numbers::pi * l / L;
      p.currents_ma(k - 1, l) = k <= L / 2 ? amplitude_ma * std::cos(k * theta)
                                           : amplitude_ma * std::sin((k - L / 2) * theta);
    }
  }
  return p;
}

ContactImpedances uniform_contact_impedance(int n_electrodes, double ohm_m) {
  return {Vec::Constant(n_electrodes, ohm_m)};
}

namespace {

Eigen::Matrix3d p1_stiffness(const Eigen::Matrix<double, 3, 2>& p) {
  const double area2 = (p(1, 0) - p(0, 0)) * (p(2, 1) - p(0, 1)) -
                       (p(2, 0) - p(0, 0)) * (p(1, 1) - p(0, 1));
  if (area2 <= 0.0) throw NumericalError("non-positive element area in FEM assembly");
  Eigen::Matrix<double, 3, 2> grad;  // gradients of the P1 basis functions
  for (int v = 0; v < 3; ++v) {
    const auto pj = p.row((v + 1) % 3);
    const auto pk = p.row((v + 2) % 3);
    grad(v, 0) = (pj(1) - pk(1)) / area2;
    grad(v, 1) = (pk(0) - pj(0)) / area2;
  }
  return 0.5 * area2 * (grad * grad.transpose());
}

}  // namespace

Eigen::Matrix3d p1_element_stiffness(const Mesh& mesh, int element) {
  Eigen::Matrix<double, 3, 2> p;
  for (int v = 0; v < 3; ++v)
    p.row(v) = mesh.nodes.row(mesh.elements(element, v)) * kMmToM;
  return p1_stiffness(p);
}

// ---------------------------------------------------------------------------
// Geometry cache

struct FemCache {
  std::uint64_t mesh_fp = 0;
  int n_nodes = 0;
  int n_elements = 0;
  int n_electrodes = 0;
  Eigen::Matrix<int, Eigen::Dynamic, 3> element_nodes;
  std::vector<Eigen::Matrix3d> element_stiffness;  // unit-conductivity stiffness
  struct ElectrodeEdge {
    int a, b;
    double length_m;
  };
  std::vector<std::vector<ElectrodeEdge>> electrode_edges;
  Vec electrode_length_m;
};

namespace {

std::shared_ptr<const FemCache> build_cache(const Mesh& mesh) {
  auto cache = std::make_shared<FemCache>();
  cache->mesh_fp = mesh_fingerprint(mesh);
  cache->n_nodes = mesh.n_nodes();
  cache->n_elements = mesh.n_elements();
  cache->n_electrodes = mesh.n_electrodes();
  cache->element_nodes = mesh.elements;
  cache->element_stiffness.resize(static_cast<std::size_t>(mesh.n_elements()));
  for (int e = 0; e < mesh.n_elements(); ++e) {
    Eigen::Matrix<double, 3, 2> p;
    for (int v = 0; v < 3; ++v) p.row(v) = mesh.nodes.row(mesh.elements(e, v)) * kMmToM;
    cache->element_stiffness[static_cast<std::size_t>(e)] = p1_stiffness(p);
  }
  cache->electrode_edges.resize(static_cast<std::size_t>(mesh.n_electrodes()));
  cache->electrode_length_m = Vec::Zero(mesh.n_electrodes());
  for (int l = 0; l < mesh.n_electrodes(); ++l) {
    for (int edge : mesh.electrode_arcs[static_cast<std::size_t>(l)]) {
      const int a = mesh.boundary_edges(edge, 0);
      const int b = mesh.boundary_edges(edge, 1);
      const double len =
          (Vec2(mesh.nodes.row(a)) - Vec2(mesh.nodes.row(b))).norm() * kMmToM;
      cache->electrode_edges[static_cast<std::size_t>(l)].push_back({a, b, len});
      cache->electrode_length_m(l) += len;
    }
    if (cache->electrode_edges[static_cast<std::size_t>(l)].empty())
      throw ConfigError("electrode without boundary edges");
  }
  return cache;
}

struct Factorization {
  Eigen::SimplicialLDLT<SpMat> ldlt;
};

}  // namespace

int FemSystem::n_nodes() const { return cache->n_nodes; }
int FemSystem::n_electrodes() const { return cache->n_electrodes; }

FemAssembler::FemAssembler(const Mesh& mesh)
    : mesh_(std::make_shared<Mesh>(mesh)), cache_(build_cache(mesh)) {}

FemSystem FemAssembler::assemble(const ConductivityField& sigma,
                                 const ContactImpedances& z) const {
  const FemCache& c = *cache_;
  if (sigma.values.size() != c.n_elements)
    throw UsageError("conductivity length does not match mesh element count");
  if (sigma.mesh_fingerprint != 0 && sigma.mesh_fingerprint != c.mesh_fp)
    throw UsageError("conductivity field belongs to a different mesh");
  if (z.ohm_m.size() != c.n_electrodes)
    throw UsageError("contact impedance length does not match electrode count");
  if ((sigma.values.array() <= 0.0).any())
    throw UsageError("conductivity must be positive everywhere");
  if ((z.ohm_m.array() <= 0.0).any())
    throw UsageError("contact impedances must be positive");

  const int N = c.n_nodes;
  const int L = c.n_electrodes;
  const int dim = N + L - 1;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(9 * c.n_elements + 16 * L + L * L));

  for (int e = 0; e < c.n_elements; ++e) {
    const Eigen::Matrix3d& ke = c.element_stiffness[static_cast<std::size_t>(e)];
    const double s = sigma.values(e);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trips.emplace_back(c.element_nodes(e, i), c.element_nodes(e, j), s * ke(i, j));
  }

  // Electrode coupling. The electrode block uses the zero-sum basis
  // n_k = e_0 - e_{k+1}, so electrode 0 couples into every reduced column.
  for (int l = 0; l < L; ++l) {
    const double zinv = 1.0 / z.ohm_m(l);
    for (const auto& edge : c.electrode_edges[static_cast<std::size_t>(l)]) {
      const double h = edge.length_m;
      trips.emplace_back(edge.a, edge.a, zinv * h / 3.0);
      trips.emplace_back(edge.b, edge.b, zinv * h / 3.0);
      trips.emplace_back(edge.a, edge.b, zinv * h / 6.0);
      trips.emplace_back(edge.b, edge.a, zinv * h / 6.0);
      const double cpl = -zinv * h / 2.0;  // -(1/z) int phi
      for (int node : {edge.a, edge.b}) {
        if (l == 0) {
          for (int k = 0; k < L - 1; ++k) {
            trips.emplace_back(node, N + k, cpl);
            trips.emplace_back(N + k, node, cpl);
          }
        } else {
          trips.emplace_back(node, N + l - 1, -cpl);
          trips.emplace_back(N + l - 1, node, -cpl);
        }
      }
    }
  }
  const double d0 = c.electrode_length_m(0) / z.ohm_m(0);
  for (int k = 0; k < L - 1; ++k)
    for (int m = 0; m < L - 1; ++m) {
      double v = d0;
      if (k == m) v += c.electrode_length_m(k + 1) / z.ohm_m(k + 1);
      trips.emplace_back(N + k, N + m, v);
    }

  FemSystem sys;
  sys.cache = cache_;
  sys.matrix.resize(dim, dim);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  sys.matrix.makeCompressed();
  sys.sigma = sigma.values;
  sys.contact_ohm_m = z.ohm_m;
  std::uint64_t tok = fnv1a(&c.mesh_fp, sizeof(c.mesh_fp));
  tok = fnv1a(sys.sigma, tok);
  tok = fnv1a(sys.contact_ohm_m, tok);
  sys.token = tok;
  return sys;
}

FemSystem assemble_system(const Mesh& mesh, const ConductivityField& sigma,
                          const ContactImpedances& z) {
  return FemAssembler(mesh).assemble(sigma, z);
}

ForwardSolution solve_forward(const FemSystem& system, const CurrentPatternSet& patterns) {
  const FemCache& c = *system.cache;
  const int L = c.n_electrodes;
  if (patterns.n_electrodes() != L)
    throw UsageError("current pattern electrode count does not match the mesh");
  const int K = patterns.n_patterns();
  const int N = c.n_nodes;

  auto factor = std::make_shared<Factorization>();
  factor->ldlt.compute(system.matrix);
  if (factor->ldlt.info() != Eigen::Success)
    throw NumericalError("CEM system factorization failed (matrix not SPD?)");

  Mat rhs = Mat::Zero(N + L - 1, K);
  for (int k = 0; k < K; ++k) {
    // reduced current load: (N^T I)_j = I_0 - I_{j+1}, amps
    const double i0 = patterns.currents_ma(k, 0) * kMaToA;
    for (int j = 0; j < L - 1; ++j)
      rhs(N + j, k) = i0 - patterns.currents_ma(k, j + 1) * kMaToA;
  }
  const Mat x = factor->ldlt.solve(rhs);
  if (factor->ldlt.info() != Eigen::Success)
    throw NumericalError("CEM forward solve failed");

  ForwardSolution sol;
  sol.node_potentials_v = x.topRows(N);
  sol.electrode_dofs = x.bottomRows(L - 1);
  sol.voltages_mv = Vec::Zero(K * L);
  for (int k = 0; k < K; ++k) {
    const double u0 = sol.electrode_dofs.col(k).sum();  // electrode 0 in the zero-sum basis
    sol.voltages_mv(k * L) = kVToMv * u0;
    for (int l = 1; l < L; ++l)
      sol.voltages_mv(k * L + l) = -kVToMv * sol.electrode_dofs(l - 1, k);
  }
  sol.factorization = std::move(factor);
  sol.system_token = system.token;
  sol.n_patterns = K;
  sol.n_electrodes = L;
  return sol;
}

Mat jacobian(const FemSystem& system, const ForwardSolution& solution) {
  if (solution.system_token != system.token)
    throw UsageError("forward solution does not belong to this system");
  const FemCache& c = *system.cache;
  const int N = c.n_nodes;
  const int L = c.n_electrodes;
  const int K = solution.n_patterns;
  const auto factor = std::static_pointer_cast<Factorization>(solution.factorization);

  // Adjoint loads pick single electrode voltages in the zero-sum basis:
  // N^T e_0 = ones, N^T e_l = -e_{l-1}.
  Mat rhs = Mat::Zero(N + L - 1, L);
  for (int j = 0; j < L - 1; ++j) rhs(N + j, 0) = 1.0;
  for (int l = 1; l < L; ++l) rhs(N + l - 1, l) = -1.0;
  const Mat w = factor->ldlt.solve(rhs);
  if (factor->ldlt.info() != Eigen::Success)
    throw NumericalError("CEM adjoint solve failed");

  Mat jac(K * L, c.n_elements);
  Eigen::Matrix<double, 3, Eigen::Dynamic> u_loc(3, K), w_loc(3, L);
  for (int e = 0; e < c.n_elements; ++e) {
    for (int v = 0; v < 3; ++v) {
      u_loc.row(v) = solution.node_potentials_v.row(c.element_nodes(e, v));
      w_loc.row(v) = w.row(c.element_nodes(e, v));
    }
    const Eigen::Matrix<double, 3, Eigen::Dynamic> su =
        c.element_stiffness[static_cast<std::size_t>(e)] * u_loc;
    const Mat block = -kVToMv * (w_loc.transpose() * su);  // L x K
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < L; ++l) jac(k * L + l, e) = block(l, k);
  }
  return jac;
}

}  // namespace eit
