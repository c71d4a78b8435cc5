#pragma once

#include <stdexcept>
#include <string>

namespace vortexgrip {

/// Error families. Each maps to a distinct CLI exit code.
enum class ErrorKind {
  InvalidArgument,
  Geometry,
  Fabrication,
  Io,
  Training,
  Calibration,
  Config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define VORTEXGRIP_ERROR(Name, Kind)                                        \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

VORTEXGRIP_ERROR(InvalidArgument, InvalidArgument)
VORTEXGRIP_ERROR(InvalidGeometry, Geometry)
VORTEXGRIP_ERROR(SurfaceTooSmall, Geometry)
VORTEXGRIP_ERROR(OutOfCalibratedRange, Fabrication)
VORTEXGRIP_ERROR(NoRoot, Fabrication)
VORTEXGRIP_ERROR(ParseError, Io)
VORTEXGRIP_ERROR(SchemaMismatch, Io)
VORTEXGRIP_ERROR(VersionUnsupported, Io)
VORTEXGRIP_ERROR(IoError, Io)
VORTEXGRIP_ERROR(EmptyTrainingSet, Training)
VORTEXGRIP_ERROR(DatasetTooSmall, Training)
VORTEXGRIP_ERROR(NonConvergence, Calibration)
VORTEXGRIP_ERROR(ConfigError, Config)

#undef VORTEXGRIP_ERROR

}  // namespace vortexgrip
