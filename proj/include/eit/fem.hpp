#pragma once

#include <cstdint>
#include <memory>

#include "eit/mesh.hpp"
#include "eit/types.hpp"

namespace eit {

// Per-element conductivity in S/m, tied to a mesh by fingerprint.
struct ConductivityField {
  Vec values;
  std::uint64_t mesh_fingerprint = 0;
};

ConductivityField make_field(const Mesh& mesh, double constant_s_per_m);
ConductivityField make_field(const Mesh& mesh, Vec values);

// K x L electrode current matrix in mA. Every row sums to zero and rows are
// linearly independent.
struct CurrentPatternSet {
  enum class Kind { adjacent, trigonometric };
  Mat currents_ma;  // K x L
  Kind kind = Kind::adjacent;
  double amplitude_ma = 0.0;

  int n_patterns() const { return static_cast<int>(currents_ma.rows()); }
  int n_electrodes() const { return static_cast<int>(currents_ma.cols()); }
};

// K = L-1 rows; row k drives +amplitude on electrode k and -amplitude on k+1.
CurrentPatternSet adjacent_patterns(int n_electrodes, double amplitude_ma);

// K = L-1 rows of cosines (k = 1..L/2) and sines (k = L/2+1..L-1) sampled at
// the electrode angles 2*pi*l/L. Requires an even electrode count.
CurrentPatternSet trig_patterns(int n_electrodes, double amplitude_ma);

// Per-electrode contact impedance, ohm * m.
struct ContactImpedances {
  Vec ohm_m;
};

ContactImpedances uniform_contact_impedance(int n_electrodes, double ohm_m);

// Assembled complete-electrode-model system for one (mesh, sigma, z) triple.
// The electrode-voltage block is reduced to the zero-sum subspace, so the
// matrix has dimension n_nodes + L - 1 and is symmetric positive definite.
// Geometry caches are shared across reassemblies for the same mesh.
struct FemCache;  // element stiffness + electrode boundary integrals

struct FemSystem {
  std::shared_ptr<const FemCache> cache;
  SpMat matrix;
  Vec sigma;             // S/m, copy of the assembled field
  Vec contact_ohm_m;     // copy of the assembled impedances
  std::uint64_t token = 0;  // identifies (mesh, sigma, z) for solution pairing

  int n_nodes() const;
  int n_electrodes() const;
};

// Builds the geometry cache once and reuses it for every conductivity.
class FemAssembler {
 public:
  explicit FemAssembler(const Mesh& mesh);
  FemSystem assemble(const ConductivityField& sigma, const ContactImpedances& z) const;
  const Mesh& mesh() const { return *mesh_; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::shared_ptr<const FemCache> cache_;
};

FemSystem assemble_system(const Mesh& mesh, const ConductivityField& sigma,
                          const ContactImpedances& z);

// Forward solve for all current patterns. Electrode voltages are reported in
// mV, stacked pattern-major: all L electrodes of pattern 0, then pattern 1, ...
// The sparse factorization is retained for adjoint (Jacobian) reuse.
struct ForwardSolution {
  Vec voltages_mv;        // K*L
  Mat node_potentials_v;  // n_nodes x K
  Mat electrode_dofs;     // (L-1) x K, zero-sum basis coefficients (V)
  std::shared_ptr<void> factorization;
  std::uint64_t system_token = 0;
  int n_patterns = 0;
  int n_electrodes = 0;
};

ForwardSolution solve_forward(const FemSystem& system, const CurrentPatternSet& patterns);

// Sensitivity of the stacked electrode voltages (mV) with respect to each
// element conductivity (S/m), computed with adjoint solves on the cached
// factorization. Row (k, l) matches the voltage ordering of solve_forward.
Mat jacobian(const FemSystem& system, const ForwardSolution& solution);

// Unit-conductivity P1 stiffness matrix of one element.
Eigen::Matrix3d p1_element_stiffness(const Mesh& mesh, int element);

}  // namespace eit
