#include "oracle/checks.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jflow/functionals.hpp"
#include "jflow/symfunc.hpp"
#include "oracle/oracle.hpp"

namespace oracle {
namespace {

namespace sf = jflow::symfunc;

double factorial(int x) {
  double f = 1.0;
  for (int i = 2; i <= x; ++i) f *= i;
  return f;
}

std::vector<double> absolute(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::fabs(x); });
  return out;
}

std::vector<double> without(const std::vector<double>& v, std::size_t i) {
  std::vector<double> out = v;
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
  return out;
}

bool in_gamma_bruteforce(const std::vector<double>& lambda, int k) {
  for (int j = 1; j <= k; ++j) {
    if (!(sigma_bruteforce(j, lambda) > 0.0)) return false;
  }
  return true;
}

CheckResult finish(std::string name, double measured, double tolerance, std::string detail,
                   bool le = true) {
  CheckResult r;
  r.name = std::move(name);
  r.measured = measured;
  r.tolerance = tolerance;
  r.passed = le ? measured <= tolerance : measured < tolerance;
  r.detail = std::move(detail);
  return r;
}

}  // namespace

std::vector<double> random_spectrum(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (auto& x : out) x = dist(rng);
  return out;
}

std::vector<double> random_gamma_k(std::mt19937_64& rng, int n, int k) {
  while (true) {
    auto lambda = random_spectrum(rng, n, -1.0, 3.0);
    if (in_gamma_bruteforce(lambda, k)) return lambda;
  }
}

CheckResult check_sigma(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int n = 2 + s % 5;
    const auto lambda = random_spectrum(rng, n, -10.0, 10.0);
    const auto abs_lambda = absolute(lambda);
    for (int m = 0; m <= n; ++m) {
      const double err = std::fabs(sf::sigma(m, lambda) - sigma_bruteforce(m, lambda));
      worst = std::max(worst, err / sigma_bruteforce(m, abs_lambda));
    }
  }
  return finish("sigma_vs_subset_sums", worst, 1e-12,
                std::to_string(samples) + " spectra, n = 2..6, every m");
}

CheckResult check_minor_identity(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int n = 2 + s % 5;
    const auto lambda = random_spectrum(rng, n, -10.0, 10.0);
    const auto abs_lambda = absolute(lambda);
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      // The deleted-variable value must itself match the oracle.
      for (int m = 0; m < n; ++m) {
        const double minor = sf::sigma_minor(m, lambda, i);
        const double ref = sigma_bruteforce(m, without(lambda, ui));
        worst = std::max(worst, std::fabs(minor - ref) / sigma_bruteforce(m, abs_lambda));
      }
      for (int m = 1; m <= n; ++m) {
        const double lhs = sf::sigma(m, lambda);
        const double kept = m < n ? sf::sigma_minor(m, lambda, i) : 0.0;
        const double rhs = kept + lambda[ui] * sf::sigma_minor(m - 1, lambda, i);
        worst = std::max(worst, std::fabs(lhs - rhs) / sigma_bruteforce(m, abs_lambda));
      }
    }
  }
  return finish("minor_identity", worst, 1e-12,
                "sigma_m = sigma_m(l|i) + l_i sigma_{m-1}(l|i), " + std::to_string(samples) +
                    " spectra");
}

CheckResult check_wedge_normalization(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (int n = 1; n <= 4; ++n) {
      const auto lambda = random_spectrum(rng, n, -3.0, 3.0);
      const auto abs_lambda = absolute(lambda);
      for (int m = 0; m <= n; ++m) {
        const double weight = factorial(m) * factorial(n - m);
        const double expected = weight * sigma_bruteforce(m, lambda);
        const double err = std::fabs(wedge_top_coeff(m, lambda) - expected);
        worst = std::max(worst, err / (weight * sigma_bruteforce(m, abs_lambda)));
        if (n >= 2) {
          // The library's weight must be the same integer.
          worst = std::max(worst, std::fabs(sf::wedge_weight(n, m) - weight) / weight);
        }
      }
    }
  }
  return finish("wedge_normalization", worst, 1e-12,
                "chi^m ^ w^(n-m) = m!(n-m)! sigma_m, n <= 4, " + std::to_string(samples) +
                    " spectra per n");
}

CheckResult check_quotient(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  int cases = 0;
  for (int s = 0; s < samples; ++s) {
    for (int n = 2; n <= 4; ++n) {
      for (int k = 2; k <= n; ++k) {
        const auto lambda = random_gamma_k(rng, n, k);
        std::vector<double> weights = random_spectrum(rng, k, 0.0, 1.0);
        const auto idx = sf::FlowIndices::weighted(n, k, weights);
        double numer = 0.0;
        for (int m = 0; m < k; ++m) {
          numer += weights[static_cast<std::size_t>(m)] * wedge_top_coeff(m, lambda);
        }
        const double expected = numer / wedge_top_coeff(k, lambda);
        worst = std::max(worst, std::fabs(sf::quotient_rhs(lambda, idx) - expected) /
                                    std::fabs(expected));
        for (int l = 1; l < k; ++l) {
          const double single = wedge_top_coeff(l, lambda) / wedge_top_coeff(k, lambda);
          const double got = sf::quotient_rhs(lambda, sf::FlowIndices::single(n, k, l));
          worst = std::max(worst, std::fabs(got - single) / std::fabs(single));
          ++cases;
        }
      }
    }
  }
  return finish("quotient_normalization", worst, 1e-12,
                std::to_string(cases) + " single-quotient cases plus weighted");
}

CheckResult check_cone_sign(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  int disagreements = 0;
  double worst_value = 0.0;
  int positive = 0;
  for (int s = 0; s < samples; ++s) {
    const int n = 2 + s % 3;
    std::uniform_int_distribution<int> pick_k(2, n);
    const int k = pick_k(rng);
    std::uniform_int_distribution<int> pick_l(1, k - 1);
    const int l = pick_l(rng);
    const auto lambda = random_gamma_k(rng, n, k);
    const double q = wedge_top_coeff(l, lambda) / wedge_top_coeff(k, lambda);
    std::uniform_real_distribution<double> pick_c(0.0, 3.0 * q);
    const double c = pick_c(rng);

    const double margin = sf::cone_margin(lambda, c, k, l);
    const bool oracle_positive = form_positivity_n1(lambda, c, k, l);
    if ((margin > 0.0) != oracle_positive) ++disagreements;
    positive += oracle_positive ? 1 : 0;

    std::vector<double> weights(static_cast<std::size_t>(k), 0.0);
    weights[static_cast<std::size_t>(l)] = 1.0;
    const auto coeffs = cone_form_coefficients(lambda, c, k, weights);
    const double expected = *std::min_element(coeffs.begin(), coeffs.end());
    double scale = 0.0;
    for (double x : cone_form_coefficients(absolute(lambda), c, k, weights)) {
      scale = std::max(scale, std::fabs(x));
    }
    worst_value = std::max(worst_value, std::fabs(margin - expected) / std::max(scale, 1.0));
  }
  std::ostringstream detail;
  detail << samples << " samples (" << positive << " positive), " << disagreements
         << " sign disagreements, worst value deviation " << worst_value;
  CheckResult r = finish("cone_sign_agreement", disagreements, 0.0, detail.str());
  r.passed = r.passed && worst_value <= 1e-12;
  return r;
}

CheckResult check_cone_worked_example() {
  const std::vector<double> lambda{1.0, 2.0};
  const double margin = sf::cone_margin(lambda, 0.75, 2, 1);
  const bool positive = form_positivity_n1(lambda, 0.75, 2, 1);
  CheckResult r = finish("cone_worked_example", std::fabs(margin - 0.5), 1e-15,
                         "margin " + std::to_string(margin) + ", oracle positive " +
                             (positive ? "true" : "false"));
  r.passed = r.passed && positive;
  return r;
}

CheckResult check_mixed_wedge(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int n = 2 + s % 3;
    const auto random_symmetric = [&] {
      Eigen::MatrixXd m(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          const double x = random_spectrum(rng, 1, -2.0, 2.0)[0];
          m(i, j) = x;
          m(j, i) = x;
        }
      }
      return m;
    };
    const Eigen::MatrixXd a = random_symmetric();
    const Eigen::MatrixXd b = random_symmetric();
    const auto flat = [n](const Eigen::MatrixXd& m) {
      std::vector<double> out;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out.push_back(m(i, j));
      }
      return out;
    };
    const auto id = flat(Eigen::MatrixXd::Identity(n, n));
    for (int k = 1; k <= n; ++k) {
      const auto coeffs = jflow::functionals::mixed_wedge_coefficients(a, b, k);
      for (int i = 0; i <= k; ++i) {
        std::vector<std::vector<double>> factors;
        for (int r = 0; r < i; ++r) factors.push_back(flat(a));
        for (int r = i; r < k; ++r) factors.push_back(flat(b));
        for (int r = k; r < n; ++r) factors.push_back(id);
        const double expected = mixed_top_coeff(n, factors);
        const double scale = std::max(1.0, std::fabs(expected));
        const double got = coeffs[static_cast<std::size_t>(i)];
        worst = std::max(worst, std::fabs(got - expected) / scale);
      }
    }
  }
  return finish("mixed_wedge_coefficients", worst, 1e-10,
                std::to_string(samples) + " random symmetric pairs, every k and split");
}

CheckResult check_concavity(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  int violations = 0;
  long long evaluations = 0;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int n = 2 + s % 3;
    for (int k = 2; k <= n; ++k) {
      const auto x = random_gamma_k(rng, n, k);
      const auto y = random_gamma_k(rng, n, k);
      std::vector<double> mid(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) mid[i] = 0.5 * (x[i] + y[i]);

      const auto f = [k](const std::vector<double>& v) {
        return std::pow(sf::sigma(k - 1, v), 1.0 / (k - 1));
      };
      const auto record = [&](double at_mid, double a, double b) {
        const double gap = 0.5 * (a + b) - at_mid;
        const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
        worst = std::max(worst, gap / scale);
        if (gap > 1e-12 * scale) ++violations;
        ++evaluations;
      };
      record(f(mid), f(x), f(y));

      for (int l = 1; l < k; ++l) {
        for (int i = 0; i < n; ++i) {
          const auto g = [&](const std::vector<double>& v) {
            return -sf::sigma_minor(l - 1, v, i) / sf::sigma_minor(k - 1, v, i);
          };
          record(g(mid), g(x), g(y));
        }
      }
    }
  }
  std::ostringstream detail;
  detail << samples << " sample pairs, " << evaluations << " midpoint tests, worst relative gap "
         << worst;
  return finish("midpoint_concavity", violations, 0.0, detail.str());
}

std::vector<CheckResult> run_oracle_checks(std::uint64_t seed) {
  return {check_sigma(seed),
          check_minor_identity(seed + 1),
          check_wedge_normalization(seed + 2),
          check_quotient(seed + 3),
          check_cone_sign(seed + 4),
          check_cone_worked_example(),
          check_mixed_wedge(seed + 5),
          check_concavity(seed + 6)};
}

nlohmann::json to_json(const std::vector<CheckResult>& results) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : results) {
    out.push_back({{"name", r.name},
                   {"passed", r.passed},
                   {"measured", r.measured},
                   {"tolerance", r.tolerance},
                   {"detail", r.detail}});
  }
  return out;
}

}  // namespace oracle
