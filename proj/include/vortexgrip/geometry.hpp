#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vortexgrip {

/// Raised pads on the gripper face that keep the tissue at a minimum standoff.
struct FrictionElementSpec {
  int count = 3;
  double element_diameter = 2.0;  // mm
  double element_height = 0.4;    // mm
  double angular_spacing = 120.0; // degrees
  /// Multiplier applied to the held lift when the pads are fitted.
  double lift_factor = 1.68;

  void validate() const;
};

/// Gripper face dimensions in mm. The body step beyond the active face
/// (body_diameter, flange_height) bounds how deep concave surfaces can sit.
struct GripperGeometry {
  double nozzle_diameter = 0.6;
  double gripper_diameter = 20.0;
  double cavity_diameter = 14.0;
  double cavity_height = 4.0;
  int nozzle_count = 2;
  double chamfer_radius = 1.0;
  double body_diameter = 26.0;
  double flange_height = 3.0;
  std::optional<FrictionElementSpec> friction_elements;

  void validate() const;

  double cavity_radius() const { return cavity_diameter / 2.0; }
  double face_radius() const { return gripper_diameter / 2.0; }
  double body_radius() const { return body_diameter / 2.0; }
};

/// The three printed grippers G1, G2, G3 (nozzle 0.6, 0.8, 1.0 mm).
GripperGeometry preset_gripper(std::string_view id);
const std::vector<std::string>& preset_gripper_ids();

enum class SurfaceFamily { Flat, DomeConvex, CylinderConvex, DomeConcave, CylinderConcave };

inline constexpr double kFlatRadius = 1e6;  // mm

std::string_view to_string(SurfaceFamily family);
SurfaceFamily parse_surface_family(std::string_view text);
bool is_concave(SurfaceFamily family);

struct SurfaceSpec {
  SurfaceFamily family = SurfaceFamily::Flat;
  double radius = kFlatRadius;  // mm
  double stiffness = 0.5;       // N/mm

  static SurfaceSpec flat(double stiffness = 0.5) { return {SurfaceFamily::Flat, kFlatRadius, stiffness}; }
  void validate() const;
  /// Surface height at (x, y) relative to its vertex; cylinders run along y.
  double height(double x, double y) const;
};

struct GridSpec {
  int radial = 64;
  int angular = 128;
  void validate() const;
};

/// Midpoint polar grid over the cavity mouth and the annular face.
/// Samples are ring-major: index = ring * angular + sector.
struct PolarGrid {
  std::vector<double> radii;   // mm, ring midpoints
  std::vector<double> widths;  // mm, ring widths
  std::vector<double> angles;  // rad
  int cavity_rings = 0;
  double cavity_radius = 0.0;
  double face_radius = 0.0;
  double body_radius = 0.0;

  static PolarGrid build(const GripperGeometry& gripper, const GridSpec& spec);

  std::size_t rings() const { return radii.size(); }
  std::size_t sectors() const { return angles.size(); }
  std::size_t size() const { return rings() * sectors(); }
  std::size_t index(std::size_t ring, std::size_t sector) const { return ring * sectors() + sector; }
  double angle_step() const;
  /// Sample area in mm^2 for a sample on the given ring.
  double area(std::size_t ring) const;
};

struct GapField {
  PolarGrid grid;
  double standoff = 0.0;
  /// Vertical clearance below the mouth plane; capped at the cavity height
  /// inside the cavity.
  std::vector<double> gap;
  /// Euclidean clearance from the face (chamfer included) to the surface,
  /// annulus rings only, ring-major starting at grid.cavity_rings.
  std::vector<double> wall_clearance;
  std::vector<double> rim_gap;        // vertical, at r = d_g/2, per sector
  std::vector<double> rim_clearance;  // Euclidean from the rim corner
  std::vector<double> body_clearance; // Euclidean from the body corner
  double mean_gap = 0.0;
  double min_gap = 0.0;
};

/// Height of the gripper's solid outline above the mouth plane at radius rho.
double solid_height(const GripperGeometry& gripper, double rho);

/// Vertical shift that brings the surface vertex into contact with the
/// outline (standoff zero). Negative when the surface sits below the plane.
double contact_offset(const GripperGeometry& gripper, const SurfaceSpec& surface);

/// Precomputes everything about a gripper/surface pair that does not depend
/// on the standoff, so repeated evaluation along a lift curve stays cheap.
class GapModel {
 public:
  GapModel(const GripperGeometry& gripper, const SurfaceSpec& surface, const GridSpec& grid = {});

  GapField at(double standoff) const;
  const PolarGrid& grid() const { return grid_; }
  double offset() const { return offset_; }

 private:
  double clearance(double x, double y, double z, double vertex) const;

  GripperGeometry gripper_;
  SurfaceSpec surface_;
  PolarGrid grid_;
  double offset_ = 0.0;
  std::vector<double> shape_;      // surface height at each sample
  std::vector<double> rim_shape_;  // surface height on the rim circle
  std::vector<double> solid_;      // outline height per ring
};

GapField gap_field(const GripperGeometry& gripper, const SurfaceSpec& surface, double standoff,
                   const GridSpec& grid = {});

double leakage_asymmetry(const GapField& field);

}  // namespace vortexgrip
