#pragma once

#include <stdexcept>
#include <string>

namespace catq {

// Truncation tail above tolerance, or photons pushed past a mode cutoff.
class CutoffError : public std::runtime_error {
 public:
  CutoffError(const std::string& what, double tail) : std::runtime_error(what), tail_(tail) {}
  double tail() const { return tail_; }

 private:
  double tail_;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// c_{n-m,k}(alpha') vanishes, so d_m cannot be formed.
class DegenerateDisplacement : public std::runtime_error {
 public:
  DegenerateDisplacement(const std::string& what, int index)
      : std::runtime_error(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

// Leading polynomial coefficient vanishes.
class DegreeDeficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A cascade photon ends up with no amplitude in the output mode.
class UntransmittedPhoton : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or incomplete fixture / config data.
class FixtureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace catq
