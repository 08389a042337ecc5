#pragma once

#include <string>

namespace synccert {

/// One checked inequality "lhs <relation> rhs" in a certificate or validation trace.
struct Condition {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string relation = "<";
  bool pass = false;
  friend bool operator==(const Condition&, const Condition&) = default;
};

}  // namespace synccert
