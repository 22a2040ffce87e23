#pragma once

#include <string>
#include <vector>

namespace poroplate {

struct VerifyOptions {
  bool fast = false;
  std::string inject = "none";  // "tensor" corrupts the effective tensor before the structure check
};

struct VerifyCheck {
  std::string name;
  int criterion = 0;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  bool fast = false;
  std::vector<VerifyCheck> checks;
  bool passed() const;
  std::string to_json(bool timings = true) const;  // wall-clock seconds omitted when false
};

// Property checks at desk scale, one or more per acceptance criterion.
VerifyReport run_verify(const VerifyOptions& opt = {});

}  // namespace poroplate
