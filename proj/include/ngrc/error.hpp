#pragma once

#include <stdexcept>
#include <string>

namespace ngrc {

/// Fine-grained error codes. Each maps onto one of the three CLI exit
/// classes: config (2), data (3), numeric (4).
enum class Err {
  // config
  BadConfigKey,
  BadConfigValue,
  MissingConfigKey,
  BadArgument,
  // data
  FileNotFound,
  MalformedHeader,
  LengthMismatch,
  LabelOutOfRange,
  LayoutMismatch,
  ShapeMismatch,
  UnwritablePath,
  // numeric
  SingularSystem,
  ZeroDenominator,
  DegenerateClasses,
};

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Err code() const noexcept { return code_; }

 private:
  Err code_;
};

/// CLI exit code for an error class: 2 config, 3 data, 4 numerical.
inline int exit_code(Err code) {
  switch (code) {
    case Err::BadConfigKey:
    case Err::BadConfigValue:
    case Err::MissingConfigKey:
    case Err::BadArgument:
      return 2;
    case Err::FileNotFound:
    case Err::MalformedHeader:
    case Err::LengthMismatch:
    case Err::LabelOutOfRange:
    case Err::LayoutMismatch:
    case Err::ShapeMismatch:
    case Err::UnwritablePath:
      return 3;
    case Err::SingularSystem:
    case Err::ZeroDenominator:
    case Err::DegenerateClasses:
      return 4;
  }
  return 1;
}

}  // namespace ngrc
