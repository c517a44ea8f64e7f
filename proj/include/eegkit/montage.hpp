#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace eegkit {

struct Vec3 {
  double x{0.0}, y{0.0}, z{0.0};
};

// Great-circle angle between two unit vectors, radians.
double angular_distance(const Vec3& a, const Vec3& b);

// Electrode labels with unit-sphere head positions.
// Head frame: +x right ear, +y nasion, +z vertex.
struct Montage {
  std::map<std::string, Vec3> entries;

  bool contains(const std::string& label) const { return entries.count(label) != 0; }
  // Throws on unknown label.
  Vec3 position(const std::string& label) const;
};

// Idealized 10-20 positions built from the nasion-inion / ear-to-ear arc
// fractions on a unit sphere. Covers the full 19-channel set plus the
// 10-10 ring extensions FT7/FT8/TP7/TP8 used by the headband.
Montage standard_montage();

struct AdjacencyGraph {
  std::vector<std::string> nodes;
  std::vector<uint8_t> edges;  // row-major n x n, symmetric, zero diagonal

  size_t size() const { return nodes.size(); }
  bool edge(size_t i, size_t j) const { return edges[i * nodes.size() + j] != 0; }
  size_t n_edges() const;
};

// Edge (i, j) iff the great-circle angle between the two electrodes is
// <= max_angle_rad. Throws on labels missing from the montage.
AdjacencyGraph adjacency(const Montage& montage, const std::vector<std::string>& labels,
                         double max_angle_rad);

inline constexpr double kDefaultAdjacencyAngle = 0.7;  // rad; links 10-20 nearest neighbours

// The six headband electrode sites, in recording order.
const std::vector<std::string>& headband_channels();
// Headband sites plus the Fz reference.
const std::vector<std::string>& headband_channels_with_ref();
inline constexpr const char* kReferenceChannel = "Fz";

} // namespace eegkit
