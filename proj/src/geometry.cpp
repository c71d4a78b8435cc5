#include "vortexgrip/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "vortexgrip/error.hpp"

namespace vortexgrip {

namespace {

// Sagitta of a circle of the given radius at lateral offset x, continued as a
// plane beyond the radius. Written in the cancellation-free form so that the
// 1e6 mm "flat" radius stays accurate.
double sag(double radius, double x) {
  const double ax = std::min(std::abs(x), radius);
  return ax * ax / (radius + std::sqrt(radius * radius - ax * ax));
}

// Highest surface point on the circle of radius rho, relative to the vertex.
double ring_max_height(const SurfaceSpec& s, double rho) {
  switch (s.family) {
    case SurfaceFamily::Flat:
    case SurfaceFamily::CylinderConvex:
      return 0.0;
    case SurfaceFamily::DomeConvex:
      return -sag(s.radius, rho);
    case SurfaceFamily::DomeConcave:
    case SurfaceFamily::CylinderConcave:
      return sag(s.radius, rho);
  }
  return 0.0;
}

double chamfer_height(double radius, double distance_past_start) {
  const double d = distance_past_start - radius;
  return radius - std::sqrt(std::max(radius * radius - d * d, 0.0));
}

template <class F>
double minimize_on(F f, double lo, double hi) {
  if (hi <= lo) return f(lo);
  constexpr int kScan = 2000;
  double best = std::numeric_limits<double>::infinity();
  int best_k = 0;
  for (int k = 0; k <= kScan; ++k) {
    const double v = f(lo + (hi - lo) * k / kScan);
    if (v < best) {
      best = v;
      best_k = k;
    }
  }
  const double a = lo + (hi - lo) * std::max(best_k - 1, 0) / kScan;
  const double b = lo + (hi - lo) * std::min(best_k + 1, kScan) / kScan;
  const auto refined = boost::math::tools::brent_find_minima(f, a, b, 52);
  return std::min(best, refined.second);
}

}  // namespace

void FrictionElementSpec::validate() const {
  if (count < 3) throw InvalidGeometry("friction elements: count must be at least 3");
  if (!(element_height > 0.0)) throw InvalidGeometry("friction elements: height must be positive");
  if (!(element_diameter > 0.0)) throw InvalidGeometry("friction elements: diameter must be positive");
  if (std::abs(count * angular_spacing - 360.0) > 1e-9)
    throw InvalidGeometry("friction elements: count x spacing must equal 360 degrees");
  if (!(lift_factor > 0.0)) throw InvalidGeometry("friction elements: lift factor must be positive");
}

void GripperGeometry::validate() const {
  if (!(nozzle_diameter > 0.0 && nozzle_diameter < cavity_diameter && cavity_diameter < gripper_diameter))
    throw InvalidGeometry("gripper requires 0 < d_n < d_c < d_g");
  if (!(cavity_height > 0.0)) throw InvalidGeometry("cavity height must be positive");
  if (nozzle_count < 1) throw InvalidGeometry("nozzle count must be at least 1");
  if (!(chamfer_radius >= 0.0 && chamfer_radius <= (gripper_diameter - cavity_diameter) / 2.0))
    throw InvalidGeometry("chamfer radius must lie in [0, (d_g - d_c)/2]");
  if (!(body_diameter >= gripper_diameter)) throw InvalidGeometry("body diameter must be at least d_g");
  if (!(flange_height >= 0.0)) throw InvalidGeometry("flange height must be non-negative");
  if (friction_elements) friction_elements->validate();
}

const std::vector<std::string>& preset_gripper_ids() {
  static const std::vector<std::string> ids{"G1", "G2", "G3"};
  return ids;
}

GripperGeometry preset_gripper(std::string_view id) {
  GripperGeometry g;
  if (id == "G1") {
    g.nozzle_diameter = 0.6;
  } else if (id == "G2") {
    g.nozzle_diameter = 0.8;
  } else if (id == "G3") {
    g.nozzle_diameter = 1.0;
  } else {
    throw InvalidArgument("unknown gripper id '" + std::string(id) + "' (expected G1, G2 or G3)");
  }
  return g;
}

std::string_view to_string(SurfaceFamily family) {
  switch (family) {
    case SurfaceFamily::Flat: return "flat";
    case SurfaceFamily::DomeConvex: return "dome_convex";
    case SurfaceFamily::CylinderConvex: return "cylinder_convex";
    case SurfaceFamily::DomeConcave: return "dome_concave";
    case SurfaceFamily::CylinderConcave: return "cylinder_concave";
  }
  return "flat";
}

SurfaceFamily parse_surface_family(std::string_view text) {
  for (auto f : {SurfaceFamily::Flat, SurfaceFamily::DomeConvex, SurfaceFamily::CylinderConvex,
                 SurfaceFamily::DomeConcave, SurfaceFamily::CylinderConcave}) {
    if (text == to_string(f)) return f;
  }
  throw InvalidArgument("unknown surface family '" + std::string(text) + "'");
}

bool is_concave(SurfaceFamily family) {
  return family == SurfaceFamily::DomeConcave || family == SurfaceFamily::CylinderConcave;
}

void SurfaceSpec::validate() const {
  if (!(radius > 0.0)) throw InvalidGeometry("surface radius must be positive");
  if (!(stiffness > 0.0)) throw InvalidGeometry("surface stiffness must be positive");
}

double SurfaceSpec::height(double x, double y) const {
  switch (family) {
    case SurfaceFamily::Flat: return 0.0;
    case SurfaceFamily::DomeConvex: return -sag(radius, std::hypot(x, y));
    case SurfaceFamily::CylinderConvex: return -sag(radius, x);
    case SurfaceFamily::DomeConcave: return sag(radius, std::hypot(x, y));
    case SurfaceFamily::CylinderConcave: return sag(radius, x);
  }
  return 0.0;
}

void GridSpec::validate() const {
  if (radial < 2 || angular < 4) throw InvalidArgument("grid needs at least 2 radial and 4 angular samples");
}

PolarGrid PolarGrid::build(const GripperGeometry& gripper, const GridSpec& spec) {
  spec.validate();
  PolarGrid g;
  g.cavity_radius = gripper.cavity_radius();
  g.face_radius = gripper.face_radius();
  g.body_radius = gripper.body_radius();
  const int n_cav = std::clamp(static_cast<int>(std::lround(spec.radial * g.cavity_radius / g.face_radius)), 1,
                               spec.radial - 1);
  const int n_ann = spec.radial - n_cav;
  g.cavity_rings = n_cav;
  const double dr_cav = g.cavity_radius / n_cav;
  const double dr_ann = (g.face_radius - g.cavity_radius) / n_ann;
  for (int i = 0; i < n_cav; ++i) {
    g.radii.push_back((i + 0.5) * dr_cav);
    g.widths.push_back(dr_cav);
  }
  for (int i = 0; i < n_ann; ++i) {
    g.radii.push_back(g.cavity_radius + (i + 0.5) * dr_ann);
    g.widths.push_back(dr_ann);
  }
  for (int j = 0; j < spec.angular; ++j) g.angles.push_back(2.0 * std::numbers::pi * j / spec.angular);
  return g;
}

double PolarGrid::angle_step() const { return 2.0 * std::numbers::pi / static_cast<double>(sectors()); }

double PolarGrid::area(std::size_t ring) const { return radii[ring] * widths[ring] * angle_step(); }

double solid_height(const GripperGeometry& g, double rho) {
  const double rc = g.cavity_radius();
  if (rho < rc) return g.cavity_height;
  if (rho < rc + g.chamfer_radius) return chamfer_height(g.chamfer_radius, rho - rc);
  if (rho <= g.face_radius()) return 0.0;
  return g.flange_height;
}

double contact_offset(const GripperGeometry& g, const SurfaceSpec& s) {
  // The outline is axisymmetric, so only the highest surface point on each
  // ring matters; the minimum vertical distance is taken piecewise.
  const double rc = g.cavity_radius();
  const double ch = g.chamfer_radius;
  double best = minimize_on([&](double r) { return g.cavity_height - ring_max_height(s, r); }, 0.0, rc);
  if (ch > 0.0) {
    best = std::min(best, minimize_on(
                              [&](double r) { return chamfer_height(ch, r - rc) - ring_max_height(s, r); },
                              rc, rc + ch));
  }
  best = std::min(best, minimize_on([&](double r) { return -ring_max_height(s, r); }, rc + ch, g.face_radius()));
  best = std::min(best, minimize_on([&](double r) { return g.flange_height - ring_max_height(s, r); },
                                    g.face_radius(), g.body_radius()));
  return best;
}

GapModel::GapModel(const GripperGeometry& gripper, const SurfaceSpec& surface, const GridSpec& grid)
    : gripper_(gripper), surface_(surface) {
  gripper_.validate();
  surface_.validate();
  if (surface_.family != SurfaceFamily::Flat && surface_.radius < gripper_.cavity_radius())
    throw SurfaceTooSmall("surface radius is smaller than the cavity radius; the surface cannot meet the face");
  grid_ = PolarGrid::build(gripper_, grid);
  offset_ = contact_offset(gripper_, surface_);

  shape_.resize(grid_.size());
  for (std::size_t i = 0; i < grid_.rings(); ++i) {
    solid_.push_back(solid_height(gripper_, grid_.radii[i]));
    for (std::size_t j = 0; j < grid_.sectors(); ++j) {
      const double r = grid_.radii[i];
      shape_[grid_.index(i, j)] = surface_.height(r * std::cos(grid_.angles[j]), r * std::sin(grid_.angles[j]));
    }
  }
  for (double a : grid_.angles)
    rim_shape_.push_back(surface_.height(grid_.face_radius * std::cos(a), grid_.face_radius * std::sin(a)));
}

double GapModel::clearance(double x, double y, double z, double vertex) const {
  const double dz = z - vertex;
  const double rc = surface_.radius;
  double q = 0.0;
  switch (surface_.family) {
    case SurfaceFamily::Flat:
      return std::max(dz, 0.0);
    case SurfaceFamily::DomeConvex:
    case SurfaceFamily::DomeConcave:
      q = x * x + y * y;
      break;
    case SurfaceFamily::CylinderConvex:
    case SurfaceFamily::CylinderConcave:
      q = x * x;
      break;
  }
  double d = 0.0;
  if (is_concave(surface_.family)) {
    d = (2.0 * rc * dz - q - dz * dz) / (rc + std::sqrt(q + (dz - rc) * (dz - rc)));
  } else {
    d = (q + dz * dz + 2.0 * rc * dz) / (rc + std::sqrt(q + (dz + rc) * (dz + rc)));
  }
  return std::max(d, 0.0);
}

GapField GapModel::at(double standoff) const {
  if (!(standoff >= 0.0)) throw InvalidArgument("standoff must be non-negative");
  GapField f;
  f.grid = grid_;
  f.standoff = standoff;
  const double vertex = offset_ - standoff;
  const std::size_t nt = grid_.sectors();
  f.gap.resize(grid_.size());
  f.wall_clearance.reserve((grid_.rings() - grid_.cavity_rings) * nt);

  double weighted = 0.0;
  double total_area = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_.rings(); ++i) {
    const bool in_cavity = static_cast<int>(i) < grid_.cavity_rings;
    const double r = grid_.radii[i];
    const double a = grid_.area(i);
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t k = grid_.index(i, j);
      double g = std::max(-(shape_[k] + vertex), 0.0);
      if (in_cavity) g = std::min(g, gripper_.cavity_height);
      f.gap[k] = g;
      weighted += g * a;
      total_area += a;
      min_gap = std::min(min_gap, g);
      if (!in_cavity) {
        const double x = r * std::cos(grid_.angles[j]);
        const double y = r * std::sin(grid_.angles[j]);
        f.wall_clearance.push_back(clearance(x, y, solid_[i], vertex));
      }
    }
  }
  f.mean_gap = weighted / total_area;
  f.min_gap = min_gap;

  const double rg = grid_.face_radius;
  const double rb = grid_.body_radius;
  for (std::size_t j = 0; j < nt; ++j) {
    const double c = std::cos(grid_.angles[j]);
    const double s = std::sin(grid_.angles[j]);
    f.rim_gap.push_back(std::max(-(rim_shape_[j] + vertex), 0.0));
    f.rim_clearance.push_back(clearance(rg * c, rg * s, 0.0, vertex));
    f.body_clearance.push_back(clearance(rb * c, rb * s, gripper_.flange_height, vertex));
  }
  return f;
}

GapField gap_field(const GripperGeometry& gripper, const SurfaceSpec& surface, double standoff,
                   const GridSpec& grid) {
  return GapModel(gripper, surface, grid).at(standoff);
}

double leakage_asymmetry(const GapField& field) {
  if (field.rim_gap.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(field.rim_gap.begin(), field.rim_gap.end());
  if (*hi + *lo <= 0.0) return 0.0;
  return (*hi - *lo) / (*hi + *lo);
}

}  // namespace vortexgrip
