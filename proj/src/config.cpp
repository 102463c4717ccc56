#include "jflow/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "jflow/errors.hpp"

namespace jflow::config {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) throw std::invalid_argument("value must be finite");
  }
  return v;
}

double parse_positive(std::string_view s) {
  const double v = parse_number<double>(s);
  if (!(v > 0.0)) throw std::invalid_argument("value must be positive");
  return v;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  for (auto w : words(s)) out.push_back(parse_number<double>(w));
  if (out.empty()) throw std::invalid_argument("expected at least one number");
  return out;
}

std::vector<PotentialTerm> parse_potential(std::string_view s) {
  std::vector<PotentialTerm> terms;
  if (s == "none" || s.empty()) return terms;
  for (auto part : split(s, ';')) {
    const auto w = words(part);
    if (w.size() < 2) {
      throw std::invalid_argument("potential term '" + std::string(part) +
                                  "' needs an amplitude and frequencies");
    }
    PotentialTerm t;
    t.amplitude = parse_number<double>(w[0]);
    for (std::size_t i = 1; i < w.size(); ++i) {
      // A trailing non-integer entry is the phase.
      int f = 0;
      const auto res = std::from_chars(w[i].data(), w[i].data() + w[i].size(), f);
      if (res.ec == std::errc() && res.ptr == w[i].data() + w[i].size()) {
        t.frequency.push_back(f);
      } else if (i + 1 == w.size()) {
        t.phase = parse_number<double>(w[i]);
      } else {
        throw std::invalid_argument("frequency '" + std::string(w[i]) + "' is not an integer");
      }
    }
    terms.push_back(std::move(t));
  }
  return terms;
}

std::vector<double> parse_matrix(std::string_view s) {
  std::vector<double> out;
  std::size_t cols = 0;
  for (auto row : split(s, ';')) {
    const auto entries = parse_list(row);
    if (cols != 0 && entries.size() != cols) throw std::invalid_argument("ragged matrix rows");
    cols = entries.size();
    out.insert(out.end(), entries.begin(), entries.end());
  }
  return out;
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"scenario", [](RunConfig& c, std::string_view v) { c.scenario = std::string(v); }},
      {"n", [](RunConfig& c, std::string_view v) { c.n = parse_number<int>(v); }},
      {"k", [](RunConfig& c, std::string_view v) { c.k = parse_number<int>(v); }},
      {"l", [](RunConfig& c, std::string_view v) { c.l = parse_number<int>(v); }},
      {"weights", [](RunConfig& c, std::string_view v) { c.weights = parse_list(v); }},
      {"base.matrix", [](RunConfig& c, std::string_view v) { c.base_matrix = parse_matrix(v); }},
      {"base.potential",
       [](RunConfig& c, std::string_view v) { c.base_potential = parse_potential(v); }},
      {"initial.potential",
       [](RunConfig& c, std::string_view v) { c.initial_potential = parse_potential(v); }},
      {"grid.N", [](RunConfig& c, std::string_view v) { c.grid_N = parse_number<int>(v); }},
      {"dt_initial", [](RunConfig& c, std::string_view v) { c.dt_initial = parse_positive(v); }},
      {"dt_min", [](RunConfig& c, std::string_view v) { c.dt_min = parse_positive(v); }},
      {"safety", [](RunConfig& c, std::string_view v) { c.safety = parse_positive(v); }},
      {"t_max", [](RunConfig& c, std::string_view v) { c.t_max = parse_number<double>(v); }},
      {"residual_tol",
       [](RunConfig& c, std::string_view v) { c.residual_tol = parse_positive(v); }},
      {"integrator",
       [](RunConfig& c, std::string_view v) { c.integrator = flow::parse_integrator(v); }},
      {"max_steps",
       [](RunConfig& c, std::string_view v) { c.max_steps = parse_number<std::size_t>(v); }},
      {"backtrack_warning",
       [](RunConfig& c, std::string_view v) {
         c.backtrack_warning = parse_number<std::size_t>(v);
       }},
      {"output.dir", [](RunConfig& c, std::string_view v) { c.output_dir = std::string(v); }},
      {"output.snapshot_every",
       [](RunConfig& c, std::string_view v) { c.snapshot_every = parse_number<std::size_t>(v); }},
      {"output.report_every",
       [](RunConfig& c, std::string_view v) {
         c.report_every = parse_number<std::size_t>(v);
         if (c.report_every == 0) throw std::invalid_argument("report_every must be >= 1");
       }},
      {"seed", [](RunConfig& c, std::string_view v) { c.seed = parse_number<std::uint64_t>(v); }},
      {"search.budget",
       [](RunConfig& c, std::string_view v) { c.search_budget = parse_number<std::size_t>(v); }},
      {"search.max_freq",
       [](RunConfig& c, std::string_view v) {
         c.search_max_freq = parse_number<int>(v);
         if (c.search_max_freq < 0) throw std::invalid_argument("max_freq must be >= 0");
       }},
      {"search.step", [](RunConfig& c, std::string_view v) { c.search_step = parse_positive(v); }},
  };
  return table;
}

struct Entry {
  std::string value;
  std::string where;
};

[[noreturn]] void fail(const std::string& where, const std::string& message) {
  throw ConfigError(where + ": " + message);
}

}  // namespace

geometry::ScalarField potential_field(const geometry::TorusGrid& grid,
                                      const std::vector<PotentialTerm>& terms) {
  for (const auto& t : terms) {
    if (static_cast<int>(t.frequency.size()) != grid.dim()) {
      throw ConfigError("potential term has " + std::to_string(t.frequency.size()) +
                        " frequencies, expected n = " + std::to_string(grid.dim()));
    }
  }
  return geometry::ScalarField::from_function(grid, [&](std::span<const double> x) {
    double acc = 0.0;
    for (const auto& t : terms) {
      double phase = t.phase;
      for (std::size_t i = 0; i < x.size(); ++i) phase += t.frequency[i] * x[i];
      acc += t.amplitude * std::cos(phase);
    }
    return acc;
  });
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [key, setter] : setters()) out.push_back(key);
    return out;
  }();
  return keys;
}

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  std::map<std::string, Entry> entries;
  const auto is_known = [](std::string_view key) {
    const auto& keys = known_keys();
    return std::find(keys.begin(), keys.end(), key) != keys.end();
  };

  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    const auto line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(where, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (!is_known(key)) fail(where, "unknown key '" + key + "'");
    if (entries.contains(key)) fail(where, "key '" + key + "' given twice");
    entries[key] = {std::string(trim(line.substr(eq + 1))), where};
  }
  for (const auto& o : overrides) {
    const std::string where = "override '" + o + "'";
    const auto eq = o.find('=');
    if (eq == std::string::npos) fail(where, "expected key=value");
    const std::string key(trim(std::string_view(o).substr(0, eq)));
    if (!is_known(key)) fail(where, "unknown key '" + key + "'");
    entries[key] = {std::string(trim(std::string_view(o).substr(eq + 1))), where};
  }

  RunConfig config;
  for (const auto& [key, setter] : setters()) {
    const auto it = entries.find(key);
    if (it == entries.end()) {
      config.defaulted.push_back(key);
      continue;
    }
    try {
      setter(config, it->second.value);
    } catch (const std::invalid_argument& e) {
      fail(it->second.where, key + ": " + e.what());
    }
  }

  const auto where_of = [&](std::initializer_list<const char*> keys) {
    for (const char* key : keys) {
      const auto it = entries.find(key);
      if (it != entries.end()) return it->second.where;
    }
    return std::string("config");
  };

  // Indices first, before anything is sized from them.
  if (config.l && !config.weights.empty()) {
    fail(where_of({"weights", "l"}), "give either l or weights, not both");
  }
  if (!config.l && config.weights.empty()) fail("config", "one of l or weights is required");
  try {
    (void)config.indices();
  } catch (const std::invalid_argument& e) {
    fail(where_of({"l", "weights", "k", "n"}), e.what());
  }

  if (config.grid_N < 8) fail(where_of({"grid.N"}), "grid.N must be at least 8");
  const auto n = static_cast<std::size_t>(config.n);
  if (!config.base_matrix.empty()) {
    if (config.base_matrix.size() != n * n) {
      fail(where_of({"base.matrix"}), "base.matrix must be " + std::to_string(n) + " x " +
                                          std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (config.base_matrix[i * n + j] != config.base_matrix[j * n + i]) {
          fail(where_of({"base.matrix"}), "base.matrix must be symmetric");
        }
      }
    }
  }
  for (const auto* terms : {&config.base_potential, &config.initial_potential}) {
    for (const auto& t : *terms) {
      if (t.frequency.size() != n) {
        fail(where_of({terms == &config.base_potential ? "base.potential" : "initial.potential"}),
             "each potential term needs " + std::to_string(n) + " integer frequencies");
      }
    }
  }
  if (!(config.dt_min < config.dt_initial)) {
    fail(where_of({"dt_min", "dt_initial"}), "need dt_min < dt_initial");
  }
  if (config.safety > 1.0) fail(where_of({"safety"}), "safety must lie in (0, 1]");
  if (config.t_max < 0.0) fail(where_of({"t_max"}), "t_max must be non-negative");
  return config;
}

symfunc::FlowIndices RunConfig::indices() const {
  if (l) return symfunc::FlowIndices::single(n, k, *l);
  return symfunc::FlowIndices::weighted(n, k, weights);
}

geometry::BaseForm RunConfig::base_form() const {
  const geometry::TorusGrid grid(n, grid_N);
  Eigen::MatrixXd h0 = Eigen::MatrixXd::Identity(n, n);
  if (!base_matrix.empty()) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) h0(i, j) = base_matrix[static_cast<std::size_t>(i * n + j)];
    }
  }
  std::optional<geometry::ScalarField> rho;
  if (!base_potential.empty()) rho = potential_field(grid, base_potential);
  return geometry::BaseForm(grid, std::move(h0), std::move(rho), k);
}

flow::FlowConfig RunConfig::flow_config() const {
  flow::FlowConfig fc(indices(), base_form());
  fc.dt_initial = dt_initial;
  fc.dt_min = dt_min;
  fc.safety = safety;
  fc.t_max = t_max;
  fc.residual_tol = residual_tol;
  fc.integrator = integrator;
  fc.max_steps = max_steps;
  fc.backtrack_warning = backtrack_warning;
  if (!initial_potential.empty()) fc.initial = potential_field(fc.grid(), initial_potential);
  return fc;
}

nlohmann::json RunConfig::to_json() const {
  const auto terms = [](const std::vector<PotentialTerm>& ts) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& t : ts) {
      out.push_back({{"amplitude", t.amplitude}, {"frequency", t.frequency}, {"phase", t.phase}});
    }
    return out;
  };
  std::vector<double> matrix = base_matrix;
  if (matrix.empty()) {
    matrix.assign(static_cast<std::size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i) matrix[static_cast<std::size_t>(i * n + i)] = 1.0;
  }
  nlohmann::json j = {
      {"scenario", scenario},
      {"n", n},
      {"k", k},
      {"l", l ? nlohmann::json(*l) : nlohmann::json(nullptr)},
      {"weights", indices().weights()},
      {"base.matrix", matrix},
      {"base.potential", terms(base_potential)},
      {"initial.potential", terms(initial_potential)},
      {"grid.N", grid_N},
      {"dt_initial", dt_initial},
      {"dt_min", dt_min},
      {"safety", safety},
      {"t_max", t_max},
      {"residual_tol", residual_tol},
      {"integrator", flow::to_string(integrator)},
      {"max_steps", max_steps},
      {"backtrack_warning", backtrack_warning},
      {"output.dir", output_dir},
      {"output.snapshot_every", snapshot_every},
      {"output.report_every", report_every},
      {"seed", seed},
      {"search.budget", search_budget},
      {"search.max_freq", search_max_freq},
      {"search.step", search_step},
  };
  return j;
}

std::vector<std::string> preset_names() {
  return {"stationary", "classical-jflow", "general", "weighted", "adversarial"};
}

std::string preset_text(std::string_view name) {
  if (name == "stationary") {
    return "scenario = stationary\n"
           "n = 2\nk = 2\nl = 1\n"
           "base.matrix = 1 0; 0 2\n"
           "grid.N = 16\n"
           "t_max = 1\n"
           "residual_tol = 1e-12\n"
           "search.budget = 1\n";
  }
  if (name == "classical-jflow") {
    // k = n, l = n - 1. The discrete class constant differs from the exact
    // one by about 1e-7 at N = 64, which bounds the attainable residual.
    return "scenario = classical-jflow\n"
           "n = 2\nk = 2\nl = 1\n"
           "base.matrix = 1 0; 0 2\n"
           "base.potential = 0.05 1 1\n"
           "grid.N = 64\n"
           "t_max = 200\n"
           "residual_tol = 1e-6\n"
           "output.report_every = 100\n"
           "search.budget = 50\n";
  }
  if (name == "general") {
    return "scenario = general\n"
           "n = 3\nk = 2\nl = 1\n"
           "base.matrix = 1 0 0; 0 1.5 0; 0 0 2\n"
           "base.potential = 0.04 1 1 0; 0.03 0 1 -1\n"
           "grid.N = 16\n"
           "t_max = 200\n"
           "residual_tol = 1e-6\n"
           "output.report_every = 100\n"
           "search.budget = 20\n";
  }
  if (name == "weighted") {
    return "scenario = weighted\n"
           "n = 2\nk = 2\n"
           "weights = 0.5 1\n"
           "base.matrix = 1 0; 0 2\n"
           "base.potential = 0.05 1 1\n"
           "grid.N = 32\n"
           "t_max = 200\n"
           "residual_tol = 1e-6\n"
           "output.report_every = 100\n"
           "search.budget = 50\n";
  }
  if (name == "adversarial") {
    // lambda_1 dips to about 1e-4 along x_1 = 0, pi/2, pi, 3 pi/2; no
    // frequency below 4 can lift it, and the explicit step needed there is
    // far below dt_min.
    return "scenario = adversarial\n"
           "n = 2\nk = 2\nl = 1\n"
           "base.matrix = 1 0; 0 1\n"
           "base.potential = 0.26323 4 0\n"
           "grid.N = 32\n"
           "dt_min = 1e-8\n"
           "t_max = 10\n"
           "residual_tol = 1e-6\n"
           "search.budget = 300\n"
           "search.max_freq = 3\n";
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace jflow::config
