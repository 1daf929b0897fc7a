/*
plcurv

Copyright 2026 the plcurv authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// Generates the test fixtures under data/. Run from the repository root:
//
//   build/make_fixtures data
//
// The outputs are committed; this tool only exists to regenerate them.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "plcurv/plcurv.hpp"

using namespace plcurv;

namespace {

void write_obj(const std::string& path, const VertexPositions& pos,
               const std::vector<std::array<VertexId, 3>>& faces,
               const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "# " << comment << "\n";
  char buf[256];
  for (const auto& p : pos) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p[0], p[1], p[2]);
    out << buf;
  }
  for (const auto& f : faces)
    out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
}

void report(const char* name, const TriangulatedSurface& s,
            const DiscreteMetric& m) {
  std::printf("%-24s V=%d E=%d F=%d chi=%d  GB=%.3g  non-delaunay=%d\n", name,
              s.n_vertices(), s.n_edges(), s.n_faces(),
              s.euler_characteristic(), gauss_bonnet_residual(s, m),
              delaunay_violation_count(s, m));
}

void make_tetrahedron(const std::string& dir) {
  VertexPositions pos = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  std::vector<std::array<VertexId, 3>> faces = {
      {0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
  write_obj(dir + "/tetrahedron.obj", pos, faces, "regular tetrahedron");
  ObjMesh m = load_obj(dir + "/tetrahedron.obj");
  report("tetrahedron.obj", m.surface, m.metric);
}

void make_icosahedron(const std::string& dir) {
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  VertexPositions pos = {{-1, p, 0}, {1, p, 0},   {-1, -p, 0}, {1, -p, 0},
                         {0, -1, p}, {0, 1, p},   {0, -1, -p}, {0, 1, -p},
                         {p, 0, -1}, {p, 0, 1},   {-p, 0, -1}, {-p, 0, 1}};
  std::vector<std::array<VertexId, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  write_obj(dir + "/icosahedron.obj", pos, faces, "regular icosahedron");
  ObjMesh m = load_obj(dir + "/icosahedron.obj");
  report("icosahedron.obj", m.surface, m.metric);
}

void make_torus(const std::string& dir) {
  // Unit rhombus torus: one vertex, two equilateral faces, three edges.
  std::vector<std::array<VertexId, 3>> faces = {{0, 0, 0}, {0, 0, 0}};
  std::vector<std::array<HalfedgeId, 2>> twins = {{0, 4}, {1, 5}, {2, 3}};
  auto s = TriangulatedSurface::from_face_gluing(1, faces, twins);
  auto m = DiscreteMetric::from_lengths(s, {1.0, 1.0, 1.0});
  save_intrinsic(dir + "/torus_one_vertex.json", s, m);
  report("torus_one_vertex.json", s, m);
}

// Octagon with identification word a b a^-1 b^-1 c d c^-1 d^-1 and a center
// vertex, triangulated by eight unit equilateral spokes: V=2, E=12, F=8,
// chi=-2. Vertex 0 is the center (cone angle 8 pi/3), vertex 1 absorbs all
// octagon corners (cone angle 16 pi/3).
std::pair<TriangulatedSurface, DiscreteMetric> build_genus2_octagon() {
  std::vector<std::array<VertexId, 3>> faces(8, {0, 1, 1});
  std::vector<std::array<HalfedgeId, 2>> twins;
  for (int k = 0; k < 8; ++k)
    twins.push_back({3 * k, 3 * ((k + 7) % 8) + 2});  // spokes
  // boundary sides: 0-2, 1-3, 4-6, 5-7 (each glued orientation-reversing)
  for (int k : {0, 1, 4, 5})
    twins.push_back({3 * k + 1, 3 * (k + 2) + 1});
  auto s = TriangulatedSurface::from_face_gluing(2, faces, twins);
  auto m = DiscreteMetric::from_lengths(s, std::vector<double>(12, 1.0));
  return {std::move(s), std::move(m)};
}

// Midpoint (1-to-4) subdivision. Purely halfedge-combinatorial so it is
// safe on self-loops and parallel edges; each child edge length is half of
// its parent (corner halves) or half of the opposite side (midsegments).
std::pair<TriangulatedSurface, DiscreteMetric> subdivide(
    const TriangulatedSurface& s, const DiscreteMetric& m) {
  const int V = s.n_vertices(), E = s.n_edges(), F = s.n_faces();
  auto midpoint = [V](EdgeId e) { return V + e; };

  std::vector<std::array<VertexId, 3>> faces(4 * F);
  for (FaceId f = 0; f < F; ++f) {
    HalfedgeId h0 = s.face_halfedge(f);
    HalfedgeId h[3] = {h0, s.next(h0), s.next(s.next(h0))};
    VertexId v[3], mid[3];
    for (int c = 0; c < 3; ++c) {
      v[c] = s.origin(h[c]);
      mid[c] = midpoint(s.edge(h[c]));
    }
    for (int c = 0; c < 3; ++c)
      faces[4 * f + c] = {v[c], mid[c], mid[(c + 2) % 3]};
    faces[4 * f + 3] = {mid[0], mid[1], mid[2]};
  }

  // Child halfedge ids inside child face 4f+c: 3*(4f+c)+k.
  auto corner_A = [](FaceId f, int c) { return 3 * (4 * f + c) + 0; };      // v_c -> m_c
  auto corner_B = [](FaceId f, int c) { return 3 * (4 * f + c) + 1; };      // m_c -> m_{c+2}
  auto corner_C = [](FaceId f, int c) { return 3 * (4 * f + c) + 2; };      // m_{c+2} -> v_c
  auto middle_M = [](FaceId f, int k) { return 3 * (4 * f + 3) + k; };      // m_k -> m_{k+1}

  auto corner_of = [&s](HalfedgeId t) {
    HalfedgeId h = s.face_halfedge(s.face(t));
    for (int c = 0;; ++c, h = s.next(h))
      if (h == t) return c;
  };

  // Each A half is paired exactly once (from its own face), as is each
  // midsegment B, so no deduplication is needed.
  std::vector<std::array<HalfedgeId, 2>> twins;
  std::vector<double> lengths;
  for (FaceId f = 0; f < F; ++f) {
    HalfedgeId h0 = s.face_halfedge(f);
    HalfedgeId h[3] = {h0, s.next(h0), s.next(s.next(h0))};
    for (int c = 0; c < 3; ++c) {
      // parent edge halves: A_c glues to C_{c'+1} across the parent twin
      HalfedgeId t = s.twin(h[c]);
      FaceId ft = s.face(t);
      int ct = corner_of(t);
      twins.push_back({corner_A(f, c), corner_C(ft, (ct + 1) % 3)});
      lengths.push_back(m.length(s.edge(h[c])) / 2);
      // midsegment: B_c runs parallel to side h_{c+1} at half its length
      twins.push_back({corner_B(f, c), middle_M(f, (c + 2) % 3)});
      lengths.push_back(m.length(s.edge(h[(c + 1) % 3])) / 2);
    }
  }

  auto s2 = TriangulatedSurface::from_face_gluing(V + E, faces, twins);
  auto m2 = DiscreteMetric::from_lengths(s2, std::move(lengths));
  return {std::move(s2), std::move(m2)};
}

void make_genus2(const std::string& dir) {
  auto [s, m] = build_genus2_octagon();
  save_intrinsic(dir + "/genus2_octagon.json", s, m);
  report("genus2_octagon.json", s, m);
  auto [s2, m2] = subdivide(s, m);
  save_intrinsic(dir + "/genus2.json", s2, m2);
  report("genus2.json", s2, m2);
}

}  // namespace

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(dir);
  try {
    make_tetrahedron(dir);
    make_icosahedron(dir);
    make_torus(dir);
    make_genus2(dir);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
