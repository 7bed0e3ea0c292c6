#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace mecsim {

// Problem constraints C1..C7.
enum class Constraint { C1, C2, C3, C4, C5, C6, C7 };

inline const char* to_string(Constraint c) {
  switch (c) {
    case Constraint::C1: return "C1";
    case Constraint::C2: return "C2";
    case Constraint::C3: return "C3";
    case Constraint::C4: return "C4";
    case Constraint::C5: return "C5";
    case Constraint::C6: return "C6";
    case Constraint::C7: return "C7";
  }
  return "?";
}

struct FeasibilityFlags {
  std::array<bool, 7> ok{true, true, true, true, true, true, true};

  bool& operator[](Constraint c) { return ok[static_cast<std::size_t>(c)]; }
  bool operator[](Constraint c) const { return ok[static_cast<std::size_t>(c)]; }

  bool all_ok() const {
    for (bool b : ok)
      if (!b) return false;
    return true;
  }
};

class ConstraintViolation : public std::runtime_error {
 public:
  ConstraintViolation(Constraint c, const std::string& what)
      : std::runtime_error(std::string(to_string(c)) + " violated: " + what), c_(c) {}

  Constraint constraint() const { return c_; }

 private:
  Constraint c_;
};

}  // namespace mecsim
