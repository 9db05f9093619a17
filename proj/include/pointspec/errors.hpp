#ifndef POINTSPEC_ERRORS_HPP
#define POINTSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pointspec {

// Index or parameter outside the domain of a sequence or construction.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Weyl function evaluated too close to a pole.
class PoleError : public std::runtime_error {
 public:
  PoleError(const std::string& what, double nearest_pole)
      : std::runtime_error(what), nearest_pole_(nearest_pole) {}
  double nearest_pole() const noexcept { return nearest_pole_; }

 private:
  double nearest_pole_;
};

// Contradictory decisive verdicts on one model.
class IntegrityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NotApplicable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Scenario file problems; the message carries the JSON path.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pointspec

#endif
