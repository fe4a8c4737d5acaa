#pragma once

#include <stdexcept>
#include <string>

namespace circleflow {

/** A coefficient sits on a mode where the inertia operator vanishes. */
class SingularModeError : public std::runtime_error {
  public:
    SingularModeError(int mode, const std::string& what)
        : std::runtime_error(what), mode_(mode) {}
    int mode() const { return mode_; }

  private:
    int mode_;
};

/** Loss of monotonicity or data outside the required subspace. */
class DomainError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/** Integration produced non-finite values (e.g. past wave breaking). */
class BlowUpError : public std::runtime_error {
  public:
    BlowUpError(double last_valid_time, const std::string& what)
        : std::runtime_error(what), t_(last_valid_time) {}
    double last_valid_time() const { return t_; }

  private:
    double t_;
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace circleflow
