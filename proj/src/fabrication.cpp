#include "vortexgrip/fabrication.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vortexgrip/error.hpp"

namespace vortexgrip {

namespace {

constexpr int kMaxBisection = 40;

void check_range(const ResinMaterial& m, double d) {
  if (!(d >= m.valid_min && d <= m.valid_max)) {
    std::ostringstream os;
    os << "CAD diameter " << d << " mm is outside the calibrated range [" << m.valid_min << ", " << m.valid_max
       << "] mm for " << m.name;
    throw OutOfCalibratedRange(os.str());
  }
}

}  // namespace

ResinMaterial ResinMaterial::grey() { return {"grey", 6.5028, 5.066, 0.4, 1.2}; }

ResinMaterial ResinMaterial::transparent() { return {"transparent", 3.856, 3.429, 0.4, 1.2}; }

ResinMaterial ResinMaterial::by_name(std::string_view name) {
  if (name == "grey") return grey();
  if (name == "transparent") return transparent();
  throw InvalidArgument("unknown material '" + std::string(name) + "' (expected grey or transparent)");
}

double shrinkage_coefficient(const ResinMaterial& m, double cad_diameter) {
  check_range(m, cad_diameter);
  const double k = m.coefficient_a * std::exp(-m.coefficient_b * cad_diameter);
  return std::clamp(k, 0.0, std::nextafter(1.0, 0.0));
}

double printed_diameter(const ResinMaterial& m, double cad_diameter) {
  return cad_diameter * (1.0 - shrinkage_coefficient(m, cad_diameter));
}

CompensationResult compensate(const ResinMaterial& m, double target, double tolerance) {
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  double lo = m.valid_min;
  double hi = m.valid_max;
  const double f_lo = printed_diameter(m, lo) - target;
  const double f_hi = printed_diameter(m, hi) - target;
  if (f_lo > 0.0 || f_hi < 0.0) {
    std::ostringstream os;
    os << "target " << target << " mm is not printable from the calibrated range of " << m.name << " (["
       << printed_diameter(m, lo) << ", " << printed_diameter(m, hi) << "] mm)";
    throw NoRoot(os.str());
  }

  CompensationResult r;
  r.material = m.name;
  r.target_printed = target;
  r.printability_warning = target < kPrintabilityLimit;
  double mid = 0.5 * (lo + hi);
  for (int it = 1; it <= kMaxBisection; ++it) {
    mid = 0.5 * (lo + hi);
    r.iterations = it;
    const double f = printed_diameter(m, mid) - target;
    if (std::abs(f) <= tolerance * 1e-3 || hi - lo <= tolerance * 1e-3) break;
    if (f < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  r.cad_diameter = mid;
  r.shrinkage = shrinkage_coefficient(m, mid);
  return r;
}

}  // namespace vortexgrip
