#include "volterra/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace volterra {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw std::invalid_argument("config: " + key + ": " + what);
}

std::string join_key(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void require_keys(const json& obj, const std::string& prefix,
                  const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      std::string where = prefix.empty() ? item.key() : prefix + "." + item.key();
      throw std::invalid_argument("config: unknown key " + where);
    }
  }
}

double get_number(const json& obj, const std::string& prefix,
                  const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(join_key(prefix, key), "expected a number");
  return v.get<double>();
}

std::string get_string(const json& obj, const std::string& prefix,
                       const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) fail(join_key(prefix, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_array(const json& obj, const std::string& prefix,
                              const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_array()) fail(join_key(prefix, key), "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) fail(join_key(prefix, key), "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Kernel parse_kernel(const json& node, json& echo) {
  if (!node.is_object()) fail("kernel", "expected an object");
  require_keys(node, "kernel", {"type", "c", "alpha", "rate"});
  std::string type = get_string(node, "kernel", "type", "");
  if (type == "constant") {
    double c = get_number(node, "kernel", "c", 1.0);
    echo = {{"type", "constant"}, {"c", c}};
    return Kernel::constant(c);
  }
  if (type == "linear") {
    echo = {{"type", "linear"}};
    return Kernel::linear();
  }
  if (type == "fractional") {
    double alpha = get_number(node, "kernel", "alpha", 0.5);
    if (!(alpha > 0.0 && alpha < 2.0))
      fail("kernel.alpha", "must lie in (0, 2)");
    echo = {{"type", "fractional"}, {"alpha", alpha}};
    return Kernel::fractional(alpha);
  }
  if (type == "exponential") {
    double rate = get_number(node, "kernel", "rate", 1.0);
    if (!(rate > 0.0)) fail("kernel.rate", "must be positive");
    echo = {{"type", "exponential"}, {"rate", rate}};
    return Kernel::exponential(rate);
  }
  fail("kernel.type",
       "expected one of constant, linear, fractional, exponential");
}

SpectralSpace parse_space(const json& node, json& echo) {
  if (!node.is_object()) fail("space", "expected an object");
  require_keys(node, "space", {"modes", "spectrum", "mu", "q"});
  double modes_raw = get_number(node, "space", "modes", 64.0);
  if (!(modes_raw >= 1.0) || modes_raw != std::floor(modes_raw))
    fail("space.modes", "must be a positive integer");
  auto n = static_cast<std::size_t>(modes_raw);

  std::string spectrum = get_string(node, "space", "spectrum",
                                    node.contains("mu") ? "explicit"
                                                        : "dirichlet-laplacian");
  std::vector<double> mu;
  if (spectrum == "dirichlet-laplacian") {
    if (node.contains("mu"))
      fail("space.mu", "not allowed with spectrum dirichlet-laplacian");
    mu = SpectralSpace::dirichlet_laplacian(n).mu;
  } else if (spectrum == "explicit") {
    if (!node.contains("mu")) fail("space.mu", "required for explicit spectrum");
    mu = get_array(node, "space", "mu");
    if (mu.size() != n) fail("space.mu", "length must equal space.modes");
  } else {
    fail("space.spectrum", "expected dirichlet-laplacian or explicit");
  }

  std::vector<double> lambda;
  if (!node.contains("q") || (node.at("q").is_string() &&
                              node.at("q").get<std::string>() == "cylindrical")) {
    lambda.assign(n, 1.0);
  } else if (node.at("q").is_array()) {
    lambda = get_array(node, "space", "q");
    if (lambda.size() != n) fail("space.q", "length must equal space.modes");
    for (double l : lambda)
      if (l < 0.0) fail("space.q", "eigenvalues must be nonnegative");
  } else {
    fail("space.q", "expected \"cylindrical\" or an array");
  }

  echo = {{"modes", n}, {"spectrum", spectrum}};
  if (spectrum == "explicit") echo["mu"] = mu;
  if (node.contains("q") && node.at("q").is_array())
    echo["q"] = lambda;
  else
    echo["q"] = "cylindrical";
  return SpectralSpace(std::move(mu), std::move(lambda));
}

TimeGrid parse_grid(const json& node, json& echo) {
  if (!node.is_object()) fail("grid", "expected an object");
  require_keys(node, "grid", {"dt", "T"});
  double dt = get_number(node, "grid", "dt", std::ldexp(1.0, -9));
  double horizon = get_number(node, "grid", "T", 1.0);
  if (!(dt > 0.0)) fail("grid.dt", "must be positive");
  if (!(horizon > 0.0)) fail("grid.T", "must be positive");
  auto grid = TimeGrid::from_horizon(dt, horizon);
  echo = {{"dt", grid.dt}, {"T", grid.horizon()}};
  return grid;
}

ScalarSignal parse_signal(const json& node, const std::string& prefix,
                          json& echo) {
  if (!node.is_object()) fail(prefix, "expected an object");
  require_keys(node, prefix, {"kind", "scale", "rate"});
  std::string kind = get_string(node, prefix, "kind", "constant");
  double scale = get_number(node, prefix, "scale", 1.0);
  if (kind == "constant") {
    echo = {{"kind", "constant"}, {"scale", scale}};
    return ScalarSignal::constant(scale);
  }
  if (kind == "sqrt_t") {
    echo = {{"kind", "sqrt_t"}, {"scale", scale}};
    return ScalarSignal::sqrt_t(scale);
  }
  if (kind == "exponential") {
    double rate = get_number(node, prefix, "rate", 0.0);
    echo = {{"kind", "exponential"}, {"scale", scale}, {"rate", rate}};
    return ScalarSignal::exponential(rate, scale);
  }
  fail(prefix + ".kind", "expected one of constant, sqrt_t, exponential");
}

HilbertSchmidtOperator parse_operator(const json& node, std::size_t n,
                                      json& echo) {
  std::string form = get_string(node, "psi", "operator", "identity");
  if (form == "identity") {
    echo["operator"] = "identity";
    return HilbertSchmidtOperator::identity(n);
  }
  if (form == "diagonal") {
    if (!node.contains("diagonal"))
      fail("psi.diagonal", "required for a diagonal operator");
    auto d = get_array(node, "psi", "diagonal");
    if (d.size() != n) fail("psi.diagonal", "length must equal space.modes");
    echo["operator"] = "diagonal";
    echo["diagonal"] = d;
    return HilbertSchmidtOperator::diagonal(std::move(d));
  }
  if (form == "dense") {
    if (!node.contains("matrix") || !node.at("matrix").is_array())
      fail("psi.matrix", "required for a dense operator");
    std::vector<std::vector<double>> rows;
    for (const auto& r : node.at("matrix")) {
      if (!r.is_array() || r.size() != n)
        fail("psi.matrix", "must be a square modes x modes array");
      rows.push_back(r.get<std::vector<double>>());
    }
    if (rows.size() != n)
      fail("psi.matrix", "must be a square modes x modes array");
    echo["operator"] = "dense";
    echo["matrix"] = node.at("matrix");
    return HilbertSchmidtOperator::dense(std::move(rows));
  }
  fail("psi.operator", "expected one of identity, diagonal, dense");
}

PsiProcess parse_psi(const json& node, std::size_t n, json& echo) {
  if (!node.is_object()) fail("psi", "expected an object");
  require_keys(node, "psi",
               {"type", "operator", "diagonal", "matrix", "signal", "bound"});
  std::string type = get_string(node, "psi", "type", "constant");
  echo["type"] = type;
  auto b = parse_operator(node, n, echo);
  if (type == "constant") return PsiProcess::constant_b(std::move(b));
  if (type == "modulated") {
    ScalarSignal phi = ScalarSignal::one();
    json sig_echo = {{"kind", "constant"}, {"scale", 1.0}};
    if (node.contains("signal"))
      phi = parse_signal(node.at("signal"), "psi.signal", sig_echo);
    echo["signal"] = sig_echo;
    return PsiProcess::modulated(std::move(b), phi);
  }
  if (type == "adapted") {
    double bound = get_number(node, "psi", "bound", 1.0);
    if (!(bound > 0.0)) fail("psi.bound", "must be positive");
    echo["bound"] = bound;
    return PsiProcess::adapted(std::move(b), bound);
  }
  fail("psi.type", "expected one of constant, modulated, adapted");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw std::invalid_argument("config: expected an object");
  require_keys(root, "",
               {"kernel", "space", "grid", "psi", "x0", "seed", "paths",
                "output_dir"});

  RunConfig cfg;
  json echo;

  json kecho = {{"type", "constant"}, {"c", 1.0}};
  if (root.contains("kernel"))
    cfg.kernel = parse_kernel(root.at("kernel"), kecho);
  echo["kernel"] = kecho;

  json secho;
  cfg.space = parse_space(root.contains("space") ? root.at("space")
                                                 : json::object(),
                          secho);
  echo["space"] = secho;

  json gecho;
  cfg.grid = parse_grid(root.contains("grid") ? root.at("grid")
                                              : json::object(),
                        gecho);
  echo["grid"] = gecho;

  json pecho;
  cfg.psi = parse_psi(root.contains("psi") ? root.at("psi") : json::object(),
                      cfg.space.modes(), pecho);
  echo["psi"] = pecho;

  if (root.contains("x0")) {
    cfg.x0 = get_array(root, "", "x0");
    if (cfg.x0.size() != cfg.space.modes())
      fail("x0", "length must equal space.modes");
  } else {
    cfg.x0.assign(cfg.space.modes(), 0.0);
  }
  echo["x0"] = cfg.x0;

  double seed_raw = get_number(root, "", "seed", 42.0);
  if (seed_raw < 0.0 || seed_raw != std::floor(seed_raw))
    fail("seed", "must be a nonnegative integer");
  cfg.seed = static_cast<std::uint64_t>(seed_raw);
  echo["seed"] = cfg.seed;

  double paths_raw = get_number(root, "", "paths", 20000.0);
  if (!(paths_raw >= 1.0) || paths_raw != std::floor(paths_raw))
    fail("paths", "must be a positive integer");
  cfg.paths = static_cast<std::size_t>(paths_raw);
  echo["paths"] = cfg.paths;

  cfg.output_dir = get_string(root, "", "output_dir", ".");
  echo["output_dir"] = cfg.output_dir;

  cfg.effective_json = echo.dump();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace volterra
