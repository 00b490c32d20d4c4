#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace holofisher::checks {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // worst observed defect across trials
  double tol = 0.0;
  std::string note;
};

/// Pfaffian integrability (flatness), d_i C = P_i C against finite
/// differences of the quadrature C, and the radial-ray identity.
std::vector<CheckResult> pfaffian_suite(int trials, std::uint64_t seed);

/// Residuals of H1..H3, L12, L13, L23 applied to the quadrature c~.
std::vector<CheckResult> annihilator_suite(int trials, std::uint64_t seed);

/// Invariance of c~ under coordinate permutations and double sign flips.
std::vector<CheckResult> symmetry_suite(int trials, std::uint64_t seed);

/// SU(2): series annihilation residual and the Monte-Carlo Haar oracle.
std::vector<CheckResult> su2_suite(int trials, std::uint64_t seed);

/// name in {pfaffian, annihilators, symmetry, su2, all}.
std::vector<CheckResult> run_suite(const std::string& name, int trials, std::uint64_t seed);

}  // namespace holofisher::checks
