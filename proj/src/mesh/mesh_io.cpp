// Copyright 2026 The HybridShape Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hybridshape/mesh/mesh_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hybridshape/error.hpp"

namespace hybridshape::mesh {

static_assert(std::endian::native == std::endian::little, "binary PLY I/O assumes a little-endian host");

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw InvalidArgument("cannot open for writing: " + path);
  out << std::setprecision(17);
  return out;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw InvalidArgument("cannot open: " + path);
  return in;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int parse_obj_index(const std::string& token, int count) {
  const int idx = std::stoi(token.substr(0, token.find('/')));
  const int resolved = idx < 0 ? count + idx : idx - 1;
  if (resolved < 0 || resolved >= count) throw InvalidArgument("OBJ face index out of range");
  return resolved;
}

template <class T>
T read_value(std::istream& in, const std::string& type) {
  auto fetch = [&](auto tag) {
    decltype(tag) v;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return static_cast<T>(v);
  };
  if (type == "double" || type == "float64") return fetch(double{});
  if (type == "float" || type == "float32") return fetch(float{});
  if (type == "int" || type == "int32") return fetch(std::int32_t{});
  if (type == "uint" || type == "uint32") return fetch(std::uint32_t{});
  if (type == "uchar" || type == "uint8") return fetch(std::uint8_t{});
  if (type == "char" || type == "int8") return fetch(std::int8_t{});
  if (type == "short" || type == "int16") return fetch(std::int16_t{});
  if (type == "ushort" || type == "uint16") return fetch(std::uint16_t{});
  throw InvalidArgument("unsupported PLY property type: " + type);
}

}  // namespace

void write_obj(const SurfaceMesh& mesh, const std::string& path) {
  mesh.validate();
  auto out = open_out(path);
  for (const auto& v : mesh.vertices) out << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& n : mesh.normals) out << "vn " << n[0] << ' ' << n[1] << ' ' << n[2] << '\n';
  const bool normals = !mesh.normals.empty();
  for (const auto& f : mesh.faces) {
    out << 'f';
    for (int v : f) {
      out << ' ' << v + 1;
      if (normals) out << "//" << v + 1;
    }
    out << '\n';
  }
  if (!out) throw InvalidArgument("write failed: " + path);
}

SurfaceMesh read_obj(const std::string& path) {
  auto in = open_in(path);
  SurfaceMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3 v;
      ss >> v[0] >> v[1] >> v[2];
      if (!ss) throw InvalidArgument("malformed OBJ vertex");
      mesh.vertices.push_back(v);
    } else if (tag == "vn") {
      Vec3 n;
      ss >> n[0] >> n[1] >> n[2];
      if (!ss) throw InvalidArgument("malformed OBJ normal");
      mesh.normals.push_back(n);
    } else if (tag == "f") {
      std::vector<int> poly;
      std::string tok;
      while (ss >> tok) poly.push_back(parse_obj_index(tok, static_cast<int>(mesh.vertices.size())));
      if (poly.size() < 3) throw InvalidArgument("OBJ face with fewer than 3 vertices");
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) mesh.faces.push_back({poly[0], poly[k], poly[k + 1]});
    }
  }
  if (mesh.normals.size() != mesh.vertices.size()) mesh.normals.clear();
  mesh.validate();
  return mesh;
}

void write_ply(const SurfaceMesh& mesh, const std::string& path) {
  mesh.validate();
  auto out = open_out(path, true);
  const bool normals = !mesh.normals.empty();
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << mesh.vertices.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n";
  if (normals) out << "property double nx\nproperty double ny\nproperty double nz\n";
  out << "element face " << mesh.faces.size() << "\n"
      << "property list uchar int vertex_indices\nend_header\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    out.write(reinterpret_cast<const char*>(mesh.vertices[i].data()), 3 * sizeof(double));
    if (normals) out.write(reinterpret_cast<const char*>(mesh.normals[i].data()), 3 * sizeof(double));
  }
  for (const auto& f : mesh.faces) {
    const std::uint8_t n = 3;
    out.write(reinterpret_cast<const char*>(&n), 1);
    for (int v : f) {
      const std::int32_t idx = v;
      out.write(reinterpret_cast<const char*>(&idx), 4);
    }
  }
  if (!out) throw InvalidArgument("write failed: " + path);
}

SurfaceMesh read_ply(const std::string& path) {
  auto in = open_in(path, true);
  std::string line;
  std::getline(in, line);
  if (line != "ply") throw InvalidArgument("not a PLY file: " + path);
  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> names, types;
    std::string list_count_type, list_index_type;
  };
  std::vector<Element> elements;
  bool binary_le = false;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "format") {
      std::string fmt;
      ss >> fmt;
      binary_le = fmt == "binary_little_endian";
    } else if (tag == "element") {
      Element e;
      ss >> e.name >> e.count;
      elements.push_back(e);
    } else if (tag == "property") {
      if (elements.empty()) throw InvalidArgument("PLY property before element");
      std::string type, name;
      ss >> type;
      if (type == "list") {
        ss >> elements.back().list_count_type >> elements.back().list_index_type >> name;
        elements.back().names.push_back(name);
        elements.back().types.push_back("list");
      } else {
        ss >> name;
        elements.back().names.push_back(name);
        elements.back().types.push_back(type);
      }
    } else if (tag == "end_header") {
      break;
    }
  }
  if (!binary_le) throw InvalidArgument("only binary little-endian PLY is supported");
  SurfaceMesh mesh;
  for (const auto& e : elements) {
    if (e.name == "vertex") {
      bool has_normal = false;
      for (const auto& n : e.names) has_normal |= n == "nx";
      for (std::size_t i = 0; i < e.count; ++i) {
        Vec3 p{}, n{};
        for (std::size_t k = 0; k < e.names.size(); ++k) {
          if (e.types[k] == "list") throw InvalidArgument("list property on PLY vertex");
          const double v = read_value<double>(in, e.types[k]);
          const std::string& nm = e.names[k];
          if (nm == "x") p[0] = v;
          else if (nm == "y") p[1] = v;
          else if (nm == "z") p[2] = v;
          else if (nm == "nx") n[0] = v;
          else if (nm == "ny") n[1] = v;
          else if (nm == "nz") n[2] = v;
        }
        mesh.vertices.push_back(p);
        if (has_normal) mesh.normals.push_back(n);
      }
    } else {
      for (std::size_t i = 0; i < e.count; ++i)
        for (std::size_t k = 0; k < e.names.size(); ++k) {
          if (e.types[k] != "list") {
            read_value<double>(in, e.types[k]);
            continue;
          }
          const auto n = read_value<std::size_t>(in, e.list_count_type);
          std::vector<int> poly(n);
          for (auto& v : poly) v = read_value<int>(in, e.list_index_type);
          if (e.name != "face" || (e.names[k] != "vertex_indices" && e.names[k] != "vertex_index")) continue;
          if (n < 3) throw InvalidArgument("PLY face with fewer than 3 vertices");
          for (std::size_t j = 1; j + 1 < n; ++j) mesh.faces.push_back({poly[0], poly[j], poly[j + 1]});
        }
    }
    if (!in) throw InvalidArgument("truncated PLY file: " + path);
  }
  mesh.validate();
  return mesh;
}

void write_mesh(const SurfaceMesh& mesh, const std::string& path) {
  if (ends_with(path, ".ply")) return write_ply(mesh, path);
  if (ends_with(path, ".obj")) return write_obj(mesh, path);
  throw InvalidArgument("unknown mesh extension: " + path);
}

SurfaceMesh read_mesh(const std::string& path) {
  if (ends_with(path, ".ply")) return read_ply(path);
  if (ends_with(path, ".obj")) return read_obj(path);
  throw InvalidArgument("unknown mesh extension: " + path);
}

void write_loops(const Contour& contour, const std::string& path) {
  auto out = open_out(path);
  for (const auto& loop : contour.loops) {
    out << "loop " << loop.size() << '\n';
    for (const auto& p : loop) out << p[0] << ' ' << p[1] << '\n';
  }
  if (!out) throw InvalidArgument("write failed: " + path);
}

Contour read_loops(const std::string& path) {
  auto in = open_in(path);
  Contour contour;
  std::string tag;
  std::size_t n = 0;
  while (in >> tag) {
    if (tag != "loop" || !(in >> n)) throw InvalidArgument("malformed loop file: " + path);
    std::vector<Vec2> loop(n);
    for (auto& p : loop)
      if (!(in >> p[0] >> p[1])) throw InvalidArgument("malformed loop file: " + path);
    if (n < 3) throw InvalidArgument("loop with fewer than 3 vertices");
    contour.loops.push_back(std::move(loop));
  }
  return contour;
}

void write_svg(const std::vector<SvgLayer>& layers, const std::string& path, int size) {
  auto out = open_out(path);
  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (const auto& layer : layers) {
    out << "<path fill=\"none\" stroke=\"" << layer.stroke << "\" stroke-width=\"" << layer.width << '"';
    if (layer.dashed) out << " stroke-dasharray=\"6 4\"";
    out << " d=\"";
    for (const auto& loop : layer.contour.loops) {
      for (std::size_t i = 0; i < loop.size(); ++i)
        out << (i == 0 ? 'M' : 'L') << loop[i][0] * size << ',' << (1.0 - loop[i][1]) * size << ' ';
      out << "Z ";
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  if (!out) throw InvalidArgument("write failed: " + path);
}

}  // namespace hybridshape::mesh
