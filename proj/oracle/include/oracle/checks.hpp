#pragma once

// Cross-checks of the library against the brute-force references. Each check
// is deterministic given its seed and reports its worst observed deviation.

#include <json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace oracle {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Worst deviation (or violation count) observed.
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Random spectrum with entries uniform in [lo, hi].
std::vector<double> random_spectrum(std::mt19937_64& rng, int n, double lo, double hi);
/// Rejection sample of Gamma_k using sigma_bruteforce for membership.
std::vector<double> random_gamma_k(std::mt19937_64& rng, int n, int k);

/// sigma_m vs subset sums, n = 2..6, relative to sigma_m(|lambda|).
CheckResult check_sigma(std::uint64_t seed, int samples = 1000);
/// sigma_m = sigma_m(lambda|i) + lambda_i sigma_{m-1}(lambda|i).
CheckResult check_minor_identity(std::uint64_t seed, int samples = 1000);
/// Wedge expansion = m!(n-m)! sigma_m for n <= 4, every m.
CheckResult check_wedge_normalization(std::uint64_t seed, int samples = 200);
/// quotient_rhs against the ratio of expanded wedge coefficients.
CheckResult check_quotient(std::uint64_t seed, int samples = 200);
/// Sign of cone_margin vs positivity of the expanded (n-1,n-1)-form; values
/// compared too.
CheckResult check_cone_sign(std::uint64_t seed, int samples = 1000);
/// n = 2, k = 2, l = 1, lambda = (1, 2), c = 0.75 gives margin 0.5.
CheckResult check_cone_worked_example();
/// Mixed wedge coefficients (determinant sampling) vs expanded products of
/// non-diagonal forms.
CheckResult check_mixed_wedge(std::uint64_t seed, int samples = 100);
/// Midpoint concavity of sigma_{k-1}^(1/(k-1)) and of
/// -sigma_{l-1}(lambda|i)/sigma_{k-1}(lambda|i) on Gamma_k, n = 2..4.
CheckResult check_concavity(std::uint64_t seed, int samples = 10000);

std::vector<CheckResult> run_oracle_checks(std::uint64_t seed);

nlohmann::json to_json(const std::vector<CheckResult>& results);

}  // namespace oracle
