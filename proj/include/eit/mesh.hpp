#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "eit/types.hpp"

namespace eit {

// Closed domain boundary given as a polyline in mm. The last point connects
// back to the first; arc-length queries interpolate linearly along segments.
class BoundaryCurve {
 public:
  explicit BoundaryCurve(Eigen::Matrix<double, Eigen::Dynamic, 2> points);

  double perimeter() const { return perimeter_; }
  // s is wrapped modulo the perimeter.
  Vec2 point_at_arc(double s) const;
  bool is_ccw() const { return signed_area_ > 0.0; }
  double signed_area() const { return signed_area_; }
  Vec2 centroid() const { return centroid_; }
  const Eigen::Matrix<double, Eigen::Dynamic, 2>& points() const { return pts_; }

 private:
  Eigen::Matrix<double, Eigen::Dynamic, 2> pts_;
  std::vector<double> cumulative_;  // size n+1, cumulative_[n] == perimeter
  double perimeter_ = 0.0;
  double signed_area_ = 0.0;
  Vec2 centroid_ = Vec2::Zero();
};

BoundaryCurve circle_curve(double radius_mm, int n_samples = 1 << 14);
BoundaryCurve oval_curve(double semi_x_mm, double semi_y_mm, int n_samples = 1 << 14);
// Fixed truncated-Fourier tank outline r(t) = 1 + 0.18cos(2t) + 0.06cos(3t)
// - 0.05sin(4t), scaled so the polyline perimeter matches perimeter_mm.
BoundaryCurve chest_curve(double perimeter_mm, int n_samples = 1 << 14);

struct DomainDescriptor {
  std::string shape;                     // "disk" | "oval" | "chest" | "polyline"
  std::map<std::string, double> params;  // shape parameters, mm
};

// 2D triangulation with boundary electrode arcs. Nodes are mm coordinates,
// elements are CCW node triples. electrode_arcs[l] lists indices into
// boundary_edges, ordered along the boundary.
struct Mesh {
  Eigen::Matrix<double, Eigen::Dynamic, 2> nodes;
  Eigen::Matrix<int, Eigen::Dynamic, 3> elements;
  Eigen::Matrix<int, Eigen::Dynamic, 2> boundary_edges;
  std::vector<std::vector<int>> electrode_arcs;
  DomainDescriptor domain;

  int n_nodes() const { return static_cast<int>(nodes.rows()); }
  int n_elements() const { return static_cast<int>(elements.rows()); }
  int n_boundary_edges() const { return static_cast<int>(boundary_edges.rows()); }
  int n_electrodes() const { return static_cast<int>(electrode_arcs.size()); }

  double signed_area(int e) const;
  Vec2 element_centroid(int e) const;
  double total_area() const;
  double electrode_length(int l) const;  // sum of covered edge lengths, mm
};

// Disk domain of the given radius with n equally spaced electrodes. The seed
// controls the interior node jitter only; the same inputs reproduce the mesh
// bit for bit. Element count lands within +/-25% of target_elements.
Mesh generate_disk_mesh(double radius_mm, int n_electrodes, double electrode_width_mm,
                        int target_elements, std::uint64_t seed);

// Same generator over an arbitrary simple closed curve. Electrodes are equally
// spaced by arc length unless explicit arc positions of their centers are
// supplied (mm along the curve, measured CCW from the curve's first point).
Mesh generate_boundary_mesh(const BoundaryCurve& boundary, int n_electrodes,
                            double electrode_width_mm, int target_elements,
                            std::uint64_t seed,
                            const std::vector<double>* electrode_center_arcs = nullptr,
                            DomainDescriptor descriptor = {});

// Undirected element graph: nodes are mesh elements, an edge joins two
// elements sharing at least one mesh node. Edge pairs are (i < j), sorted.
struct ElementGraph {
  int n_nodes = 0;
  std::vector<std::pair<int, int>> edges;
};

ElementGraph element_adjacency(const Mesh& mesh);

// Symmetrically normalized adjacency with self loops. Entry (i, j) equals
// 1/sqrt(d_i d_j) where d is the self-loop-augmented degree.
struct PropagationOperator {
  SpMat matrix;
  std::uint64_t source_fingerprint = 0;
};

PropagationOperator normalized_adjacency(const ElementGraph& graph);

std::uint64_t mesh_fingerprint(const Mesh& mesh);

// Boundary node indices in CCW order, starting from boundary_edges.row(0).
std::vector<int> boundary_node_loop(const Mesh& mesh);

}  // namespace eit
