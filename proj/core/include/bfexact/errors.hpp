#pragma once

#include <stdexcept>
#include <string>

namespace bfexact {

/// Thrown when a sample (or a derived quantity) has zero variance and the
/// requested statistic is undefined.
class degenerate_data_error : public std::runtime_error {
  public:
    explicit degenerate_data_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a quadrature, tabulation, or root-finding step cannot reach
/// its accuracy target. Never downgraded to a warning.
class numeric_error : public std::runtime_error {
  public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a matrix that must be inverted is numerically singular.
class conditioning_error : public numeric_error {
  public:
    explicit conditioning_error(const std::string& what) : numeric_error(what) {}
};

/// Thrown when a multi-step procedure is fed inputs that violate its
/// protocol (e.g. stage-two samples that do not extend stage one).
class protocol_error : public std::runtime_error {
  public:
    explicit protocol_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bfexact
