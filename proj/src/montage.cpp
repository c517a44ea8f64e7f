#include "eegkit/montage.hpp"

#include <cmath>
#include <stdexcept>

namespace eegkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg(double d) { return d * kPi / 180.0; }

Vec3 normalized(const Vec3& v) {
  const double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  return {v.x / n, v.y / n, v.z / n};
}

// Point on the midline arc nasion -> vertex -> inion, alpha radians from nasion.
Vec3 midline(double alpha) { return {0.0, std::cos(alpha), std::sin(alpha)}; }

// Point on the coronal arc left ear -> vertex -> right ear, beta radians from
// the left ear.
Vec3 coronal(double beta) { return {-std::cos(beta), 0.0, std::sin(beta)}; }

// Point on the 10-20 circumferential ring (the horizontal circle through
// Fpz, T7, Oz, T8 at 10% elevation). gamma is measured from the front,
// positive towards the left hemisphere, negative towards the right.
Vec3 ring(double gamma) {
  const double r = std::cos(deg(18.0));
  const double z = std::sin(deg(18.0));
  return {-r * std::sin(gamma), r * std::cos(gamma), z};
}

// Great-circle midpoint.
Vec3 mid(const Vec3& a, const Vec3& b) {
  return normalized({a.x + b.x, a.y + b.y, a.z + b.z});
}

} // namespace

double angular_distance(const Vec3& a, const Vec3& b) {
  double d = a.x * b.x + a.y * b.y + a.z * b.z;
  if (d > 1.0) d = 1.0;
  if (d < -1.0) d = -1.0;
  return std::acos(d);
}

Vec3 Montage::position(const std::string& label) const {
  auto it = entries.find(label);
  if (it == entries.end())
    throw std::runtime_error("montage: unknown channel label '" + label + "'");
  return it->second;
}

Montage standard_montage() {
  Montage m;
  auto put = [&m](const std::string& name, const Vec3& v) { m.entries[name] = normalized(v); };

  // Midline: 10/30/50/70/90% of the nasion-inion arc.
  put("FPz", midline(deg(18.0)));
  put("Fz", midline(deg(54.0)));
  put("Cz", midline(deg(90.0)));
  put("Pz", midline(deg(126.0)));
  put("Oz", midline(deg(162.0)));

  // Coronal arc: 10/30/50/70/90% of the ear-to-ear arc.
  put("T7", coronal(deg(18.0)));
  put("C3", coronal(deg(54.0)));
  put("C4", coronal(deg(126.0)));
  put("T8", coronal(deg(162.0)));

  // Circumferential ring, 36 deg per 10% of the circle; 10-10 sites midway.
  put("FP1", ring(deg(18.0)));
  put("FP2", ring(deg(-18.0)));
  put("F7", ring(deg(54.0)));
  put("F8", ring(deg(-54.0)));
  put("FT7", ring(deg(72.0)));
  put("FT8", ring(deg(-72.0)));
  put("TP7", ring(deg(108.0)));
  put("TP8", ring(deg(-108.0)));
  put("P7", ring(deg(126.0)));
  put("P8", ring(deg(-126.0)));
  put("O1", ring(deg(162.0)));
  put("O2", ring(deg(-162.0)));

  // Intermediate frontal/parietal sites: midway on the transverse arcs.
  const Vec3 fz = m.entries["Fz"], pz = m.entries["Pz"];
  put("F3", mid(m.entries["F7"], fz));
  put("F4", mid(m.entries["F8"], fz));
  put("P3", mid(m.entries["P7"], pz));
  put("P4", mid(m.entries["P8"], pz));

  return m;
}

size_t AdjacencyGraph::n_edges() const {
  size_t n = 0;
  for (size_t i = 0; i < nodes.size(); ++i)
    for (size_t j = i + 1; j < nodes.size(); ++j)
      if (edge(i, j)) ++n;
  return n;
}

AdjacencyGraph adjacency(const Montage& montage, const std::vector<std::string>& labels,
                         double max_angle_rad) {
  if (!(max_angle_rad > 0.0) || !(max_angle_rad < kPi))
    throw std::runtime_error("adjacency: max_angle must be in (0, pi)");

  AdjacencyGraph g;
  g.nodes = labels;
  const size_t n = labels.size();
  g.edges.assign(n * n, 0);

  std::vector<Vec3> pos(n);
  for (size_t i = 0; i < n; ++i) pos[i] = montage.position(labels[i]);

  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (angular_distance(pos[i], pos[j]) <= max_angle_rad) {
        g.edges[i * n + j] = 1;
        g.edges[j * n + i] = 1;
      }
    }
  }
  return g;
}

const std::vector<std::string>& headband_channels() {
  static const std::vector<std::string> chs = {"TP7", "T7", "FP1", "FP2", "T8", "TP8"};
  return chs;
}

const std::vector<std::string>& headband_channels_with_ref() {
  static const std::vector<std::string> chs = {"TP7", "T7", "FP1", "FP2", "T8", "TP8", "Fz"};
  return chs;
}

} // namespace eegkit
