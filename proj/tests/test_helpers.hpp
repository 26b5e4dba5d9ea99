#pragma once

#include <doctest.h>

#include <Eigen/Dense>

#include "eit/mesh.hpp"

namespace eit::testing {

// (0,0)-(1,0)-(0,1) and (1,0)-(1,1)-(0,1): two CCW triangles sharing one edge.
inline Mesh two_triangle_mesh() {
  Mesh m;
  m.nodes.resize(4, 2);
  m.nodes << 0, 0, 1, 0, 0, 1, 1, 1;
  m.elements.resize(2, 3);
  m.elements << 0, 1, 2, 1, 3, 2;
  m.domain.shape = "polyline";
  return m;
}

inline Mesh single_triangle_mesh() {
  Mesh m;
  m.nodes.resize(3, 2);
  m.nodes << 0, 0, 1, 0, 0, 1;
  m.elements.resize(1, 3);
  m.elements << 0, 1, 2;
  m.domain.shape = "polyline";
  return m;
}

// Four triangles fanned around the shared node 0.
inline Mesh fan_mesh() {
  Mesh m;
  m.nodes.resize(6, 2);
  m.nodes << 0, 0, 1, 0, 1, 1, 0, 1, -1, 1, -1, 0;
  m.elements.resize(4, 3);
  m.elements << 0, 1, 2, 0, 2, 3, 0, 3, 4, 0, 4, 5;
  m.domain.shape = "polyline";
  return m;
}

// Chain of elements sharing edges: (0,0)-(1,0)-(0,1), then flipped, ...
inline Mesh strip_mesh(int n_elements) {
  Mesh m;
  m.nodes.resize(n_elements + 2, 2);
  for (int i = 0; i < n_elements + 2; ++i) {
    m.nodes(i, 0) = static_cast<double>((i + 1) / 2);
    m.nodes(i, 1) = static_cast<double>(i % 2);
  }
  m.elements.resize(n_elements, 3);
  for (int e = 0; e < n_elements; ++e) {
    if (e % 2 == 0)
      m.elements.row(e) << e, e + 2, e + 1;
    else
      m.elements.row(e) << e, e + 1, e + 2;
  }
  m.domain.shape = "polyline";
  return m;
}

}  // namespace eit::testing
