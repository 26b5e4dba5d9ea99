#include "eit/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

#include "eit/hash.hpp"
#include "eit/rng.hpp"

namespace eit {

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---------------------------------------------------------------------------
// BoundaryCurve

BoundaryCurve::BoundaryCurve(Eigen::Matrix<double, Eigen::Dynamic, 2> points)
    : pts_(std::move(points)) {
  const auto n = pts_.rows();
  if (n < 3) throw ConfigError("boundary curve needs at least 3 points");
  cumulative_.resize(static_cast<std::size_t>(n) + 1);
  cumulative_[0] = 0.0;
  double area2 = 0.0;
  Vec2 cmoment = Vec2::Zero();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec2 a = pts_.row(i);
    const Vec2 b = pts_.row((i + 1) % n);
    cumulative_[static_cast<std::size_t>(i) + 1] =
        cumulative_[static_cast<std::size_t>(i)] + (b - a).norm();
    const double cross = a.x() * b.y() - b.x() * a.y();
    area2 += cross;
    cmoment += (a + b) * cross;
  }
  perimeter_ = cumulative_.back();
  signed_area_ = 0.5 * area2;
  if (std::abs(signed_area_) < 1e-12)
    throw ConfigError("degenerate boundary curve (zero area)");
  centroid_ = cmoment / (3.0 * area2);
}

Vec2 BoundaryCurve::point_at_arc(double s) const {
  s = std::fmod(s, perimeter_);
  if (s < 0.0) s += perimeter_;
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  auto seg = static_cast<Eigen::Index>(it - cumulative_.begin()) - 1;
  seg = std::clamp<Eigen::Index>(seg, 0, pts_.rows() - 1);
  const double s0 = cumulative_[static_cast<std::size_t>(seg)];
  const double len = cumulative_[static_cast<std::size_t>(seg) + 1] - s0;
  const double t = len > 0.0 ? (s - s0) / len : 0.0;
  const Vec2 a = pts_.row(seg);
  const Vec2 b = pts_.row((seg + 1) % pts_.rows());
  return a + t * (b - a);
}

BoundaryCurve circle_curve(double radius_mm, int n_samples) {
  Eigen::Matrix<double, Eigen::Dynamic, 2> p(n_samples, 2);
  for (int i = 0; i < n_samples; ++i) {
    const double t = 2.0 * kPi * i / n_samples;
    p(i, 0) = radius_mm * std::cos(t);
    p(i, 1) = radius_mm * std::sin(t);
  }
  return BoundaryCurve(std::move(p));
}

BoundaryCurve oval_curve(double semi_x_mm, double semi_y_mm, int n_samples) {
  Eigen::Matrix<double, Eigen::Dynamic, 2> p(n_samples, 2);
  for (int i = 0; i < n_samples; ++i) {
    const double t = 2.0 * kPi * i / n_samples;
    p(i, 0) = semi_x_mm * std::cos(t);
    p(i, 1) = semi_y_mm * std::sin(t);
  }
  return BoundaryCurve(std::move(p));
}

BoundaryCurve chest_curve(double perimeter_mm, int n_samples) {
  Eigen::Matrix<double, Eigen::Dynamic, 2> p(n_samples, 2);
  double raw_perimeter = 0.0;
  Vec2 prev = Vec2::Zero(), first = Vec2::Zero();
  for (int i = 0; i < n_samples; ++i) {
    const double t = 2.0 * kPi * i / n_samples;
    const double r = 1.0 + 0.18 * std::cos(2.0 * t) + 0.06 * std::cos(3.0 * t) -
                     0.05 * std::sin(4.0 * t);
    const Vec2 q(r * std::cos(t), r * std::sin(t));
    p(i, 0) = q.x();
    p(i, 1) = q.y();
    if (i == 0)
      first = q;
    else
      raw_perimeter += (q - prev).norm();
    prev = q;
  }
  raw_perimeter += (first - prev).norm();
  p *= perimeter_mm / raw_perimeter;
  return BoundaryCurve(std::move(p));
}

// ---------------------------------------------------------------------------
// Mesh basics

double Mesh::signed_area(int e) const {
  const Vec2 a = nodes.row(elements(e, 0));
  const Vec2 b = nodes.row(elements(e, 1));
  const Vec2 c = nodes.row(elements(e, 2));
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

Vec2 Mesh::element_centroid(int e) const {
  return (Vec2(nodes.row(elements(e, 0))) + Vec2(nodes.row(elements(e, 1))) +
          Vec2(nodes.row(elements(e, 2)))) /
         3.0;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (int e = 0; e < n_elements(); ++e) a += signed_area(e);
  return a;
}

double Mesh::electrode_length(int l) const {
  double len = 0.0;
  for (int edge : electrode_arcs[static_cast<std::size_t>(l)]) {
    const Vec2 a = nodes.row(boundary_edges(edge, 0));
    const Vec2 b = nodes.row(boundary_edges(edge, 1));
    len += (b - a).norm();
  }
  return len;
}

// ---------------------------------------------------------------------------
// Ring-layer mesh generator

namespace {

// Curve access used by the generator. The analytic circle variant keeps disk
// electrode nodes on the circle to machine precision.
struct CurveSource {
  virtual ~CurveSource() = default;
  virtual double perimeter() const = 0;
  virtual Vec2 at(double arc) const = 0;
  virtual Vec2 center() const = 0;
  virtual double mean_radius() const = 0;
};

struct AnalyticCircle final : CurveSource {
  double radius;
  explicit AnalyticCircle(double r) : radius(r) {}
  double perimeter() const override { return 2.0 * kPi * radius; }
  Vec2 at(double arc) const override {
    const double t = arc / radius;
    return {radius * std::cos(t), radius * std::sin(t)};
  }
  Vec2 center() const override { return Vec2::Zero(); }
  double mean_radius() const override { return radius; }
};

struct PolylineSource final : CurveSource {
  const BoundaryCurve* curve;
  Vec2 c;
  double rbar;
  explicit PolylineSource(const BoundaryCurve& b) : curve(&b), c(b.centroid()) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < b.points().rows(); ++i)
      acc += (Vec2(b.points().row(i)) - c).norm();
    rbar = acc / static_cast<double>(b.points().rows());
  }
  double perimeter() const override { return curve->perimeter(); }
  Vec2 at(double arc) const override { return curve->point_at_arc(arc); }
  Vec2 center() const override { return c; }
  double mean_radius() const override { return rbar; }
};

struct RingNode {
  double u;  // position along the ring, relative frame, ascending in [0, 1)
  int id;
};

// Triangulates the annulus between two CCW rings by zippering nodes in order
// of their ring parameter. Produces exactly outer.size() + inner.size()
// triangles; every consecutive outer pair forms one triangle.
void zipper_rings(const std::vector<RingNode>& outer, const std::vector<RingNode>& inner,
                  std::vector<Eigen::Vector3i>& tris) {
  const int a = static_cast<int>(outer.size());
  const int b = static_cast<int>(inner.size());
  int j0 = 0;
  double best = 2.0;
  for (int j = 0; j < b; ++j) {
    double d = std::abs(inner[static_cast<std::size_t>(j)].u - outer[0].u);
    d = std::min(d, 1.0 - d);
    if (d < best) {
      best = d;
      j0 = j;
    }
  }
  // Unwrapped parameters from the starting pair.
  auto outer_u = [&](int k) {
    return outer[static_cast<std::size_t>(k % a)].u + (k >= a ? 1.0 : 0.0);
  };
  double d0 = inner[static_cast<std::size_t>(j0)].u - outer[0].u;
  if (d0 > 0.5) d0 -= 1.0;
  if (d0 < -0.5) d0 += 1.0;
  std::vector<double> inner_u(static_cast<std::size_t>(b) + 1);
  inner_u[0] = outer[0].u + d0;
  for (int t = 0; t < b; ++t) {
    const double cur = inner[static_cast<std::size_t>((j0 + t) % b)].u;
    const double nxt = inner[static_cast<std::size_t>((j0 + t + 1) % b)].u;
    double step = nxt - cur;
    if (step <= 0.0) step += 1.0;
    inner_u[static_cast<std::size_t>(t) + 1] = inner_u[static_cast<std::size_t>(t)] + step;
  }
  int oi = 0, ii = 0;
  while (oi < a || ii < b) {
    bool advance_outer;
    if (oi >= a)
      advance_outer = false;
    else if (ii >= b)
      advance_outer = true;
    else
      advance_outer = outer_u(oi + 1) <= inner_u[static_cast<std::size_t>(ii) + 1];
    if (advance_outer) {
      tris.emplace_back(outer[static_cast<std::size_t>(oi % a)].id,
                        outer[static_cast<std::size_t>((oi + 1) % a)].id,
                        inner[static_cast<std::size_t>((j0 + ii) % b)].id);
      ++oi;
    } else {
      tris.emplace_back(outer[static_cast<std::size_t>(oi % a)].id,
                        inner[static_cast<std::size_t>((j0 + ii + 1) % b)].id,
                        inner[static_cast<std::size_t>((j0 + ii) % b)].id);
      ++ii;
    }
  }
}

struct GeneratorSetup {
  const CurveSource* curve;
  int n_electrodes;
  double width;
  std::vector<double> center_arcs;  // ascending, may exceed perimeter after unwrap
  int symmetry;                     // L for the rotationally symmetric disk path, else 1
  std::uint64_t seed;
  DomainDescriptor descriptor;
};

// Electrode-edge clustering: the potential has a square-root singularity at
// electrode end points, so boundary nodes and the first interior layers are
// graded toward them instead of spaced uniformly.
double cluster01(double xi) { return 0.5 * (1.0 - std::cos(kPi * xi)); }

constexpr double kRadialGrading = 1.35;

double layer_rho(int k, int n_lay) {
  return 1.0 - std::pow(static_cast<double>(k) / n_lay, kRadialGrading);
}

struct BoundaryPlan {
  int n_e = 0;                 // edges per electrode
  std::vector<int> gap_edges;  // edges per inter-electrode gap
  std::vector<double> gap_len;
  int n_b = 0;
};

BoundaryPlan plan_boundary(const GeneratorSetup& g, double boundary_budget) {
  const double P = g.curve->perimeter();
  const int L = g.n_electrodes;
  const double h_b = P / boundary_budget;
  BoundaryPlan plan;
  // Electrodes are subdivided ~40% finer than the nominal boundary spacing.
  plan.n_e = std::max(3, static_cast<int>(std::lround(g.width / (h_b / 1.4))));
  plan.gap_edges.resize(static_cast<std::size_t>(L));
  plan.gap_len.resize(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    const double end = g.center_arcs[static_cast<std::size_t>(l)] + 0.5 * g.width;
    const double next_start =
        (l + 1 < L ? g.center_arcs[static_cast<std::size_t>(l) + 1] : g.center_arcs[0] + P) -
        0.5 * g.width;
    plan.gap_len[static_cast<std::size_t>(l)] = next_start - end;
    if (plan.gap_len[static_cast<std::size_t>(l)] <= 0.0)
      throw ConfigError("electrode arcs overlap");
    plan.gap_edges[static_cast<std::size_t>(l)] = std::max(
        1, static_cast<int>(std::lround(plan.gap_len[static_cast<std::size_t>(l)] / h_b)));
  }
  if (g.symmetry > 1) {
    // keep the boundary pattern identical in every sector
    for (int l = 1; l < L; ++l) plan.gap_edges[static_cast<std::size_t>(l)] = plan.gap_edges[0];
  }
  plan.n_b = 0;
  for (int l = 0; l < L; ++l)
    plan.n_b += plan.n_e + plan.gap_edges[static_cast<std::size_t>(l)];
  return plan;
}

std::vector<int> ring_schedule(int n_b, int n_lay, int symmetry) {
  std::vector<int> ring_count(static_cast<std::size_t>(n_lay));
  ring_count[0] = n_b;
  for (int k = 1; k < n_lay; ++k) {
    const double rho = 1.0 - static_cast<double>(k) / n_lay;
    int c;
    if (symmetry > 1) {
      const int m0 = n_b / symmetry;
      const int mk = std::max(1, static_cast<int>(std::lround(m0 * rho)));
      c = symmetry * mk;
    } else {
      c = std::max(8, static_cast<int>(std::lround(n_b * rho)));
    }
    ring_count[static_cast<std::size_t>(k)] =
        std::min(c, ring_count[static_cast<std::size_t>(k) - 1]);
  }
  return ring_count;
}

// Exact element count of a schedule: each ring strip zippers into
// n_k + n_{k+1} triangles and the innermost ring fans into n_last.
int predicted_elements(const std::vector<int>& counts) {
  int total = counts.back();
  for (std::size_t k = 0; k + 1 < counts.size(); ++k)
    total += counts[k] + counts[k + 1];
  return total;
}

Mesh build_once(const GeneratorSetup& g, const BoundaryPlan& plan, int n_lay,
                double jitter_amp) {
  const double P = g.curve->perimeter();
  const int L = g.n_electrodes;
  const int n_e = plan.n_e;

  // Boundary nodes, walked CCW from the start of electrode 0. Unwrapped arcs
  // stay ascending; the relative parameter u is used for ring zippering.
  std::vector<double> arcs;
  std::vector<std::vector<int>> arc_edges(static_cast<std::size_t>(L));
  const double arc0 = g.center_arcs[0] - 0.5 * g.width;
  for (int l = 0; l < L; ++l) {
    const double start = g.center_arcs[static_cast<std::size_t>(l)] - 0.5 * g.width;
    const int first_edge = static_cast<int>(arcs.size());
    for (int i = 0; i < n_e; ++i) {
      arcs.push_back(start + g.width * i / n_e);
      arc_edges[static_cast<std::size_t>(l)].push_back(first_edge + i);
    }
    const double gstart = start + g.width;
    const int ng = plan.gap_edges[static_cast<std::size_t>(l)];
    for (int i = 0; i < ng; ++i)
      arcs.push_back(gstart + plan.gap_len[static_cast<std::size_t>(l)] * i / ng);
  }
  const int n_b = static_cast<int>(arcs.size());

  const Vec2 center = g.curve->center();
  const std::vector<int> ring_count = ring_schedule(n_b, n_lay, g.symmetry);

  const int total_nodes =
      1 + std::accumulate(ring_count.begin(), ring_count.end(), 0);
  Eigen::Matrix<double, Eigen::Dynamic, 2> nodes(total_nodes, 2);
  std::vector<std::vector<RingNode>> rings(static_cast<std::size_t>(n_lay));

  int next_id = 0;
  for (int i = 0; i < n_b; ++i) {
    const Vec2 p = g.curve->at(arcs[static_cast<std::size_t>(i)]);
    nodes.row(next_id) = p;
    rings[0].push_back({(arcs[static_cast<std::size_t>(i)] - arc0) / P, next_id});
    ++next_id;
  }
  for (int k = 1; k < n_lay; ++k) {
    const int nk = ring_count[static_cast<std::size_t>(k)];
    const double rho = 1.0 - static_cast<double>(k) / n_lay;
    Rng rng(derive_seed(g.seed, static_cast<std::uint64_t>(k)));
    const int sector = g.symmetry > 1 ? nk / g.symmetry : nk;
    std::vector<double> du(static_cast<std::size_t>(sector)), dr(static_cast<std::size_t>(sector));
    for (int t = 0; t < sector; ++t) {
      du[static_cast<std::size_t>(t)] = rng.uniform(-jitter_amp, jitter_amp);
      dr[static_cast<std::size_t>(t)] = rng.uniform(-jitter_amp, jitter_amp);
    }
    const double radial_amp = std::min(1.0 / n_lay, 0.8 * rho);
    for (int j = 0; j < nk; ++j) {
      const int t = j % sector;
      const double u = (j + du[static_cast<std::size_t>(t)]) / nk;
      const double rj = rho + dr[static_cast<std::size_t>(t)] * radial_amp;
      const Vec2 bp = g.curve->at(arc0 + u * P);
      nodes.row(next_id) = center + rj * (bp - center);
      double uw = u;
      if (uw >= 1.0) uw -= 1.0;
      if (uw < 0.0) uw += 1.0;
      rings[static_cast<std::size_t>(k)].push_back({uw, next_id});
      ++next_id;
    }
    std::sort(rings[static_cast<std::size_t>(k)].begin(), rings[static_cast<std::size_t>(k)].end(),
              [](const RingNode& x, const RingNode& y) { return x.u < y.u; });
  }
  const int center_id = next_id;
  nodes.row(center_id) = center;

  std::vector<Eigen::Vector3i> tris;
  tris.reserve(static_cast<std::size_t>(4 * n_b));
  for (int k = 0; k + 1 < n_lay; ++k)
    zipper_rings(rings[static_cast<std::size_t>(k)], rings[static_cast<std::size_t>(k) + 1], tris);
  const auto& last = rings[static_cast<std::size_t>(n_lay) - 1];
  for (std::size_t j = 0; j < last.size(); ++j)
    tris.emplace_back(last[j].id, last[(j + 1) % last.size()].id, center_id);

  Mesh mesh;
  mesh.nodes = std::move(nodes);
  mesh.elements.resize(static_cast<Eigen::Index>(tris.size()), 3);
  for (std::size_t e = 0; e < tris.size(); ++e) mesh.elements.row(static_cast<Eigen::Index>(e)) = tris[e];
  mesh.boundary_edges.resize(n_b, 2);
  for (int i = 0; i < n_b; ++i) {
    mesh.boundary_edges(i, 0) = rings[0][static_cast<std::size_t>(i)].id;
    mesh.boundary_edges(i, 1) = rings[0][static_cast<std::size_t>((i + 1) % static_cast<std::size_t>(n_b))].id;
  }
  mesh.electrode_arcs = std::move(arc_edges);
  mesh.domain = g.descriptor;
  return mesh;
}

bool all_positive_areas(const Mesh& m) {
  for (int e = 0; e < m.n_elements(); ++e)
    if (m.signed_area(e) <= 0.0) return false;
  return true;
}

Mesh generate_ring_mesh(const GeneratorSetup& g, int target_elements) {
  if (target_elements < 50) throw ConfigError("target element count must be at least 50");
  const double P = g.curve->perimeter();
  if (g.width * g.n_electrodes >= P)
    throw ConfigError("electrode layout infeasible: total electrode width " +
                      std::to_string(g.width * g.n_electrodes) +
                      " mm does not fit on a boundary of perimeter " + std::to_string(P) + " mm");

  // The boundary budget fixes the tangential resolution; the layer count is
  // then searched so the exact predicted element count lands on target.
  // Several budgets are tried because electrode/gap subdivision quantizes n_b.
  const double budget0 =
      std::sqrt(static_cast<double>(target_elements) * P / g.curve->mean_radius());
  BoundaryPlan best_plan;
  int best_lay = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (double scale : {1.0, 0.85, 1.18, 0.72, 1.39, 0.61, 1.64}) {
    BoundaryPlan plan = plan_boundary(g, budget0 * scale);
    const double ideal_lay = plan.n_b * g.curve->mean_radius() / P;
    const int lo = std::max(3, static_cast<int>(std::floor(ideal_lay * 0.5)));
    const int hi = std::max(lo, static_cast<int>(std::ceil(ideal_lay * 2.0)) + 3);
    for (int lay = lo; lay <= hi; ++lay) {
      const int count = predicted_elements(ring_schedule(plan.n_b, lay, g.symmetry));
      const double miss =
          std::abs(static_cast<double>(count) - target_elements) / target_elements;
      // prefer near-isotropic layering when the count miss is comparable
      const double aspect = std::abs(std::log(static_cast<double>(lay) / ideal_lay));
      const double cost = miss + 0.02 * aspect;
      if (cost < best_cost) {
        best_cost = cost;
        best_plan = plan;
        best_lay = lay;
      }
    }
  }

  for (double amp : {0.22, 0.1, 0.0}) {
    Mesh m = build_once(g, best_plan, best_lay, amp);
    if (all_positive_areas(m)) return m;
  }
  throw NumericalError("mesh generation produced inverted elements");
}

}  // namespace

Mesh generate_disk_mesh(double radius_mm, int n_electrodes, double electrode_width_mm,
                        int target_elements, std::uint64_t seed) {
  if (radius_mm <= 0.0) throw ConfigError("disk radius must be positive");
  if (n_electrodes < 1) throw ConfigError("need at least one electrode");
  AnalyticCircle circle(radius_mm);
  GeneratorSetup g;
  g.curve = &circle;
  g.n_electrodes = n_electrodes;
  g.width = electrode_width_mm;
  g.symmetry = n_electrodes;
  g.seed = seed;
  g.descriptor.shape = "disk";
  g.descriptor.params["radius_mm"] = radius_mm;
  g.descriptor.params["electrode_width_mm"] = electrode_width_mm;
  const double P = circle.perimeter();
  for (int l = 0; l < n_electrodes; ++l)
    g.center_arcs.push_back(P * l / n_electrodes);
  return generate_ring_mesh(g, target_elements);
}

Mesh generate_boundary_mesh(const BoundaryCurve& boundary, int n_electrodes,
                            double electrode_width_mm, int target_elements,
                            std::uint64_t seed,
                            const std::vector<double>* electrode_center_arcs,
                            DomainDescriptor descriptor) {
  if (n_electrodes < 1) throw ConfigError("need at least one electrode");
  if (!boundary.is_ccw())
    throw ConfigError("boundary curve must be oriented counter-clockwise");
  PolylineSource src(boundary);
  GeneratorSetup g;
  g.curve = &src;
  g.n_electrodes = n_electrodes;
  g.width = electrode_width_mm;
  g.symmetry = 1;
  g.seed = seed;
  g.descriptor = std::move(descriptor);
  if (g.descriptor.shape.empty()) g.descriptor.shape = "polyline";
  const double P = boundary.perimeter();
  if (electrode_center_arcs) {
    if (static_cast<int>(electrode_center_arcs->size()) != n_electrodes)
      throw ConfigError("electrode center list does not match electrode count");
    g.center_arcs = *electrode_center_arcs;
    for (int l = 1; l < n_electrodes; ++l)
      if (g.center_arcs[static_cast<std::size_t>(l)] <= g.center_arcs[static_cast<std::size_t>(l) - 1])
        throw ConfigError("electrode centers must be strictly increasing along the boundary");
    if (g.center_arcs.back() - g.center_arcs.front() >= P)
      throw ConfigError("electrode centers span more than the full boundary");
  } else {
    for (int l = 0; l < n_electrodes; ++l)
      g.center_arcs.push_back(P * l / n_electrodes);
  }
  return generate_ring_mesh(g, target_elements);
}

// ---------------------------------------------------------------------------
// Graph extraction

ElementGraph element_adjacency(const Mesh& mesh) {
  std::vector<std::vector<int>> node_elements(static_cast<std::size_t>(mesh.n_nodes()));
  for (int e = 0; e < mesh.n_elements(); ++e)
    for (int v = 0; v < 3; ++v)
      node_elements[static_cast<std::size_t>(mesh.elements(e, v))].push_back(e);

  std::set<std::pair<int, int>> edges;
  for (const auto& elems : node_elements) {
    for (std::size_t a = 0; a < elems.size(); ++a)
      for (std::size_t b = a + 1; b < elems.size(); ++b) {
        const int i = std::min(elems[a], elems[b]);
        const int j = std::max(elems[a], elems[b]);
        if (i != j) edges.emplace(i, j);
      }
  }
  ElementGraph g;
  g.n_nodes = mesh.n_elements();
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

PropagationOperator normalized_adjacency(const ElementGraph& graph) {
  const int n = graph.n_nodes;
  std::vector<double> degree(static_cast<std::size_t>(n), 1.0);  // self loops
  for (const auto& [i, j] : graph.edges) {
    degree[static_cast<std::size_t>(i)] += 1.0;
    degree[static_cast<std::size_t>(j)] += 1.0;
  }
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(n) + 2 * graph.edges.size());
  for (int i = 0; i < n; ++i)
    trips.emplace_back(i, i, 1.0 / degree[static_cast<std::size_t>(i)]);
  for (const auto& [i, j] : graph.edges) {
    const double w =
        1.0 / std::sqrt(degree[static_cast<std::size_t>(i)] * degree[static_cast<std::size_t>(j)]);
    trips.emplace_back(i, j, w);
    trips.emplace_back(j, i, w);
  }
  PropagationOperator op;
  op.matrix.resize(n, n);
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  op.matrix.makeCompressed();
  std::uint64_t h = fnv1a(&n, sizeof(n));
  if (!graph.edges.empty())
    h = fnv1a(graph.edges.data(), graph.edges.size() * sizeof(graph.edges[0]), h);
  op.source_fingerprint = h;
  return op;
}

std::uint64_t mesh_fingerprint(const Mesh& mesh) {
  std::uint64_t h = fnv1a(mesh.nodes);
  h = fnv1a(mesh.elements, h);
  h = fnv1a(mesh.boundary_edges, h);
  for (const auto& arc : mesh.electrode_arcs) {
    if (!arc.empty()) h = fnv1a(arc.data(), arc.size() * sizeof(int), h);
  }
  h = fnv1a(mesh.domain.shape, h);
  for (const auto& [k, v] : mesh.domain.params) {
    h = fnv1a(k, h);
    h = fnv1a(&v, sizeof(v), h);
  }
  return h;
}

std::vector<int> boundary_node_loop(const Mesh& mesh) {
  std::map<int, int> next;
  for (int i = 0; i < mesh.n_boundary_edges(); ++i)
    next[mesh.boundary_edges(i, 0)] = mesh.boundary_edges(i, 1);
  std::vector<int> loop;
  loop.reserve(static_cast<std::size_t>(mesh.n_boundary_edges()));
  int cur = mesh.boundary_edges(0, 0);
  for (int i = 0; i < mesh.n_boundary_edges(); ++i) {
    loop.push_back(cur);
    const auto it = next.find(cur);
    if (it == next.end()) throw NumericalError("boundary edge loop is not closed");
    cur = it->second;
  }
  return loop;
}

}  // namespace eit
