#include "scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "expr.hpp"
#include "linalg.hpp"
#include "presets.hpp"
#include "quantum.hpp"

namespace hyko {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void config_fail(const std::string& path, const std::string& msg) {
  throw ConfigError(msg, path);
}

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) config_fail(path + "." + key, "missing field");
  return j.at(key);
}

double require_number(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = require(j, key, path);
  if (!v.is_number()) config_fail(path + "." + key, "expected a number");
  return v.get<double>();
}

int require_int(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = require(j, key, path);
  if (!v.is_number_integer()) config_fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

std::string require_string(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = require(j, key, path);
  if (!v.is_string()) config_fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

// matrices are flat row-major arrays of [re, im] pairs
Mat parse_matrix(const Json& j, int d, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != d * d)
    config_fail(path, "expected a row-major array of " + std::to_string(d * d) +
                          " [re, im] pairs");
  Mat m(d, d);
  for (int k = 0; k < d * d; ++k) {
    const Json& e = j.at(k);
    if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() || !e.at(1).is_number())
      config_fail(path + "[" + std::to_string(k) + "]", "expected an [re, im] pair");
    m(k / d, k % d) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
  }
  return m;
}

Json matrix_to_json(const Mat& m) {
  Json out = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      out.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
  return out;
}

struct BuiltScenario {
  PhaseSpaceGrid grid;
  int quantum_dim;
  std::optional<HybridHamiltonian> hamiltonian;
  HybridState initial_state;
  LiftKind lift;
  double t_end;
  int n_samples;
  std::vector<std::string> observable_names;
  std::vector<HybridOperator> observables;
  std::vector<std::string> checks;
  uint64_t seed;
};

RVec eval_classical(const std::string& text, const Json& params, const PhaseSpaceGrid& grid,
                    const std::string& path) {
  try {
    return expr::evaluate_on_grid(expr::parse(substitute_params(text, params)), grid);
  } catch (const ParseError& e) {
    config_fail(path, e.what());
  } catch (const expr::EvalError& e) {
    config_fail(path, e.what());
  }
}

}  // namespace

std::string substitute_params(const std::string& text, const Json& params) {
  std::string out;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      std::string name = text.substr(i, j - i);
      if (params.is_object() && params.contains(name) && params.at(name).is_number()) {
        out += "(" + fmt_double(params.at(name).get<double>()) + ")";
      } else {
        out += name;
      }
      i = j;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

Json validate_config(const Json& config) {
  if (!config.is_object()) config_fail("", "config must be a JSON object");
  Json resolved = Json::object();

  const Json& grid = require(config, "grid", "");
  Json rgrid = Json::object();
  rgrid["q_min"] = require_number(grid, "q_min", "grid");
  rgrid["q_max"] = require_number(grid, "q_max", "grid");
  rgrid["p_min"] = require_number(grid, "p_min", "grid");
  rgrid["p_max"] = require_number(grid, "p_max", "grid");
  rgrid["n_q"] = require_int(grid, "n_q", "grid");
  rgrid["n_p"] = require_int(grid, "n_p", "grid");
  std::string boundary = grid.value("boundary", std::string("periodic"));
  if (boundary != "periodic" && boundary != "zero")
    config_fail("grid.boundary", "expected \"periodic\" or \"zero\"");
  rgrid["boundary"] = boundary;
  resolved["grid"] = rgrid;

  int d = require_int(config, "quantum_dim", "");
  if (d < 2) config_fail("quantum_dim", "must be at least 2");
  resolved["quantum_dim"] = d;

  resolved["params"] = config.value("params", Json::object());
  if (!resolved["params"].is_object()) config_fail("params", "expected an object");

  const Json& ham = require(config, "hamiltonian", "");
  Json rham = Json::object();
  rham["classical"] = require_string(ham, "classical", "hamiltonian");
  std::string scheme = ham.value("scheme", std::string("stencil2"));
  if (scheme != "stencil2" && scheme != "stencil4" && scheme != "spectral")
    config_fail("hamiltonian.scheme", "expected \"stencil2\", \"stencil4\", or \"spectral\"");
  rham["scheme"] = scheme;
  rham["quantum"] = require(ham, "quantum", "hamiltonian");
  Json coupling = ham.value("coupling", Json::array());
  if (!coupling.is_array()) config_fail("hamiltonian.coupling", "expected an array");
  for (size_t k = 0; k < coupling.size(); ++k) {
    const std::string path = "hamiltonian.coupling[" + std::to_string(k) + "]";
    require_string(coupling.at(k), "classical", path);
    require(coupling.at(k), "quantum", path);
    if (!coupling.at(k).contains("strength") || !coupling.at(k).at("strength").is_number())
      config_fail(path + ".strength", "expected a number");
  }
  rham["coupling"] = coupling;
  if (ham.contains("classical_multiplicative"))
    rham["classical_multiplicative"] = require_string(ham, "classical_multiplicative",
                                                      "hamiltonian");
  resolved["hamiltonian"] = rham;

  const Json& init = require(config, "initial_state", "");
  Json rinit = Json::object();
  std::string kind = init.value("kind", std::string("product"));
  if (kind != "product" && kind != "custom")
    config_fail("initial_state.kind", "expected \"product\" or \"custom\"");
  rinit["kind"] = kind;
  if (kind == "product") {
    rinit["classical"] = require_string(init, "classical", "initial_state");
    rinit["quantum"] = require(init, "quantum", "initial_state");
  } else {
    const Json& terms = require(init, "terms", "initial_state");
    if (!terms.is_array() || terms.empty())
      config_fail("initial_state.terms", "expected a non-empty array");
    for (size_t k = 0; k < terms.size(); ++k) {
      const std::string path = "initial_state.terms[" + std::to_string(k) + "]";
      if (!terms.at(k).contains("weight") || !terms.at(k).at("weight").is_number())
        config_fail(path + ".weight", "expected a number");
      require_string(terms.at(k), "classical", path);
      require(terms.at(k), "quantum", path);
    }
    rinit["terms"] = terms;
  }
  resolved["initial_state"] = rinit;

  std::string lift = config.value("lift", std::string("block_diagonal"));
  if (lift != "block_diagonal" && lift != "coherent")
    config_fail("lift", "expected \"block_diagonal\" or \"coherent\"");
  resolved["lift"] = lift;

  const Json& time = require(config, "time", "");
  double t_end = require_number(time, "t_end", "time");
  if (!(t_end >= 0)) config_fail("time.t_end", "must be nonnegative");
  int n_samples = time.value("n_samples", 10);
  if (n_samples < 1) config_fail("time.n_samples", "must be at least 1");
  resolved["time"] = Json{{"t_end", t_end}, {"n_samples", n_samples}};

  Json observables = config.value("observables", Json::array());
  if (!observables.is_array()) config_fail("observables", "expected an array");
  for (size_t k = 0; k < observables.size(); ++k) {
    const std::string path = "observables[" + std::to_string(k) + "]";
    require_string(observables.at(k), "name", path);
    const Json& terms = require(observables.at(k), "terms", path);
    if (!terms.is_array() || terms.empty())
      config_fail(path + ".terms", "expected a non-empty array");
    for (size_t t = 0; t < terms.size(); ++t) {
      const std::string tpath = path + ".terms[" + std::to_string(t) + "]";
      require_string(terms.at(t), "classical", tpath);
      require(terms.at(t), "quantum", tpath);
    }
  }
  resolved["observables"] = observables;

  Json checks = config.value("checks", Json::array({"trace", "positivity", "entropy"}));
  if (!checks.is_array()) config_fail("checks", "expected an array of suite names");
  resolved["checks"] = checks;

  int64_t seed = 0;
  if (config.contains("seed")) {
    if (!config.at("seed").is_number_integer()) config_fail("seed", "expected an integer");
    seed = config.at("seed").get<int64_t>();
  }
  resolved["seed"] = seed;
  return resolved;
}

namespace {

const std::vector<std::string> kAllChecks = {
    "trace",        "positivity",       "entropy",       "duality",
    "expectation_identity", "entropy_offset", "marginal_power", "no_back_reaction"};

std::vector<std::string> resolve_checks(const Json& config_checks,
                                        const std::optional<std::string>& override_arg) {
  std::vector<std::string> names;
  auto add = [&](const std::string& n) {
    bool known = false;
    for (const auto& k : kAllChecks) known = known || k == n;
    if (!known) config_fail("checks", "unknown check suite \"" + n + "\"");
    names.push_back(n);
  };
  if (override_arg) {
    if (*override_arg == "all") {
      names = kAllChecks;
    } else if (*override_arg == "none") {
      // empty
    } else {
      std::string rest = *override_arg;
      while (!rest.empty()) {
        auto pos = rest.find(',');
        add(rest.substr(0, pos));
        rest = pos == std::string::npos ? "" : rest.substr(pos + 1);
      }
    }
    return names;
  }
  for (const auto& c : config_checks) {
    if (!c.is_string()) config_fail("checks", "expected strings");
    if (c.get<std::string>() == "all") return kAllChecks;
    add(c.get<std::string>());
  }
  return names;
}

BuiltScenario build_scenario(const Json& resolved,
                             const std::optional<std::string>& checks_override) {
  const Json& g = resolved.at("grid");
  PhaseSpaceGrid grid = build_grid(
      g.at("q_min").get<double>(), g.at("q_max").get<double>(), g.at("p_min").get<double>(),
      g.at("p_max").get<double>(), g.at("n_q").get<int>(), g.at("n_p").get<int>(),
      g.at("boundary").get<std::string>() == "periodic" ? Boundary::periodic : Boundary::zero);
  const int d = resolved.at("quantum_dim").get<int>();
  const Json& params = resolved.at("params");

  const Json& ham = resolved.at("hamiltonian");
  std::string scheme_name = ham.at("scheme").get<std::string>();
  DiffScheme scheme = scheme_name == "spectral"
                          ? DiffScheme::spectral
                          : (scheme_name == "stencil4" ? DiffScheme::stencil4
                                                       : DiffScheme::stencil2);
  Mat h_q = parse_matrix(ham.at("quantum"), d, "hamiltonian.quantum");
  std::vector<CouplingTerm> coupling;
  const Json& cj = ham.at("coupling");
  for (size_t k = 0; k < cj.size(); ++k) {
    const std::string path = "hamiltonian.coupling[" + std::to_string(k) + "]";
    CouplingTerm term;
    term.classical = eval_classical(cj.at(k).at("classical").get<std::string>(), params, grid,
                                    path + ".classical");
    term.quantum = parse_matrix(cj.at(k).at("quantum"), d, path + ".quantum");
    term.strength = cj.at(k).at("strength").get<double>();
    coupling.push_back(std::move(term));
  }
  std::optional<RVec> multiplicative;
  if (ham.contains("classical_multiplicative"))
    multiplicative = eval_classical(ham.at("classical_multiplicative").get<std::string>(),
                                    params, grid, "hamiltonian.classical_multiplicative");

  std::string classical = ham.at("classical").get<std::string>();
  std::optional<HybridHamiltonian> hamiltonian;
  try {
    if (auto preset = preset_by_name(classical)) {
      hamiltonian.emplace(preset_field(*preset, grid), h_q, coupling, grid, scheme,
                          multiplicative, *preset);
    } else {
      RVec energy = eval_classical(classical, params, grid, "hamiltonian.classical");
      hamiltonian.emplace(hamiltonian_field(energy, grid), h_q, coupling, grid, scheme,
                          multiplicative, std::nullopt);
    }
  } catch (const ValidationError& e) {
    config_fail("hamiltonian", e.what());
  }

  const Json& init = resolved.at("initial_state");
  HybridState state;
  try {
    if (init.at("kind").get<std::string>() == "product") {
      RVec f = eval_classical(init.at("classical").get<std::string>(), params, grid,
                              "initial_state.classical");
      auto density = ClassicalDensity::normalized(std::move(f), grid);
      Mat rho_q = parse_matrix(init.at("quantum"), d, "initial_state.quantum");
      rho_q = 0.5 * (rho_q + rho_q.adjoint().eval());
      rho_q /= rho_q.trace().real();
      state = product_state(density, rho_q, grid);
    } else {
      std::vector<Mat> blocks(grid.size(), Mat::Zero(d, d));
      const Json& terms = init.at("terms");
      for (size_t k = 0; k < terms.size(); ++k) {
        const std::string path = "initial_state.terms[" + std::to_string(k) + "]";
        double weight = terms.at(k).at("weight").get<double>();
        if (weight <= 0) config_fail(path + ".weight", "must be positive");
        RVec f = eval_classical(terms.at(k).at("classical").get<std::string>(), params, grid,
                                path + ".classical");
        if (f.minCoeff() < 0) config_fail(path + ".classical", "must be nonnegative");
        Mat rho_q = parse_matrix(terms.at(k).at("quantum"), d, path + ".quantum");
        for (int xi = 0; xi < grid.size(); ++xi) blocks[xi] += weight * f(xi) * rho_q;
      }
      state = hybrid_state_normalized(std::move(blocks), grid);
    }
    validate_hybrid_state(state, grid);
  } catch (const ValidationError& e) {
    config_fail("initial_state", e.what());
  }

  BuiltScenario built{std::move(grid),
                      d,
                      std::move(hamiltonian),
                      std::move(state),
                      resolved.at("lift").get<std::string>() == "coherent"
                          ? LiftKind::coherent
                          : LiftKind::block_diagonal,
                      resolved.at("time").at("t_end").get<double>(),
                      resolved.at("time").at("n_samples").get<int>(),
                      {},
                      {},
                      resolve_checks(resolved.at("checks"), checks_override),
                      static_cast<uint64_t>(resolved.at("seed").get<int64_t>())};

  const Json& obs = resolved.at("observables");
  for (size_t k = 0; k < obs.size(); ++k) {
    const std::string path = "observables[" + std::to_string(k) + "]";
    std::vector<HybridTerm> terms;
    const Json& tj = obs.at(k).at("terms");
    for (size_t t = 0; t < tj.size(); ++t) {
      const std::string tpath = path + ".terms[" + std::to_string(t) + "]";
      HybridTerm term;
      Complex gamma(1, 0);
      if (tj.at(t).contains("gamma")) {
        const Json& gj = tj.at(t).at("gamma");
        if (!gj.is_array() || gj.size() != 2) config_fail(tpath + ".gamma", "expected [re, im]");
        gamma = Complex(gj.at(0).get<double>(), gj.at(1).get<double>());
      }
      term.gamma = gamma;
      term.classical = eval_classical(tj.at(t).at("classical").get<std::string>(), params,
                                      built.grid, tpath + ".classical")
                           .cast<Complex>();
      term.quantum = parse_matrix(tj.at(t).at("quantum"), d, tpath + ".quantum");
      terms.push_back(std::move(term));
    }
    built.observable_names.push_back(obs.at(k).at("name").get<std::string>());
    built.observables.emplace_back(built.grid, d, std::move(terms));
  }
  return built;
}

Complex dm_expectation_matrix(const Mat& rho, const HybridOperator& f) {
  HybridDensityMatrix dm{rho, LiftKind::block_diagonal, 0.0, false};
  return dm_expectation(dm, f);
}

double hybrid_entropy_of_matrix(const Mat& rho, const PhaseSpaceGrid& grid, int d) {
  // instantaneous hybrid entropy read off the xi-diagonal blocks
  double s = 0.0;
  for (int xi = 0; xi < grid.size(); ++xi) {
    Mat block = rho.block(xi * d, xi * d, d, d) / grid.cell_weight();
    Mat sym = 0.5 * (block + block.adjoint());
    s += entropy_from_eigenvalues(hermitian_eigenvalues(std::move(sym)));
  }
  return grid.cell_weight() * s;
}

void run_checks(const BuiltScenario& built, const Mat& rho0,
                const std::vector<TimeSeriesRow>& rows, ScenarioResult& result) {
  const auto& grid = built.grid;
  const int d = built.quantum_dim;
  const auto& h = *built.hamiltonian;

  for (const auto& name : built.checks) {
    CheckResult check;
    check.name = name;
    check.details = Json::object();
    try {
      if (name == "trace") {
        check.tol = 1e-10;
        for (const auto& r : rows) check.worst = std::max(check.worst, r.trace_residual);
        check.passed = check.worst <= check.tol;
      } else if (name == "positivity") {
        check.tol = -1e-9;
        check.worst = 0.0;
        for (const auto& r : rows) check.worst = std::min(check.worst, r.min_eigenvalue);
        check.passed = check.worst >= check.tol;
      } else if (name == "entropy") {
        check.tol = 1e-8;
        for (const auto& r : rows)
          check.worst = std::max(check.worst, std::abs(r.s_vn - rows.front().s_vn));
        check.passed = check.worst <= check.tol;
      } else if (name == "duality") {
        check.tol = 1e-10;
        if (built.observables.empty()) {
          check.applicable = false;
          check.passed = true;
          check.details["reason"] = "no observables configured";
        } else {
          Mat rho_t = evolve_state(rho0, h, built.t_end);
          for (const auto& f : built.observables) {
            Mat f_t = evolve_observable(f.realize_dense(), h, built.t_end);
            Complex lhs = dm_expectation_matrix(rho_t, f);
            Complex rhs = (rho0 * f_t).trace();
            check.worst = std::max(check.worst, std::abs(lhs - rhs));
          }
          check.passed = check.worst <= check.tol;
        }
      } else if (name == "expectation_identity") {
        check.tol = 1e-10;
        std::mt19937_64 rng(built.seed ^ 0xabcdef12ULL);
        auto block_lift = lift_block_diagonal(built.initial_state, grid);
        auto coherent_lift = lift_coherent(built.initial_state, grid, false);
        for (int k = 0; k < 10; ++k) {
          auto f = random_hybrid_operator(grid, d, 3, rng);
          Complex functional = hybrid_expectation(built.initial_state, f, grid);
          check.worst = std::max(check.worst,
                                 std::abs(dm_expectation(block_lift, f) - functional));
          check.worst = std::max(check.worst,
                                 std::abs(dm_expectation(coherent_lift, f) - functional));
        }
        check.passed = check.worst <= check.tol;
      } else if (name == "entropy_offset") {
        check.tol = 1e-8;
        auto rep = entropy_equivalence_report(built.initial_state, grid);
        check.worst = std::abs(rep.offset_residual);
        check.details["hybrid_entropy"] = rep.hybrid_entropy;
        check.details["vn_entropy_block"] = rep.vn_entropy_block;
        check.details["coherent_psd"] = rep.coherent_psd;
        check.details["coherent_min_eigenvalue"] = rep.coherent_min_eigenvalue;
        if (rep.coherent_psd) check.details["vn_entropy_coherent"] = rep.vn_entropy_coherent;
        check.passed = check.worst <= check.tol;
      } else if (name == "marginal_power") {
        check.tol = 1e-10;
        if (grid.size() * d > 4096) {
          check.applicable = false;
          check.passed = true;
          check.details["reason"] = "dense route capped at 4096 dimensions";
        } else {
          for (int k = 1; k <= 4; ++k) partial_trace_power(built.initial_state, grid, k);
          check.passed = true;  // partial_trace_power throws beyond 1e-10
        }
      } else if (name == "no_back_reaction") {
        check.tol = 1e-8;
        if (!h.preset() || h.coupling().empty()) {
          check.applicable = false;
          check.passed = true;
          check.details["reason"] = "needs a preset classical energy and a nonzero coupling";
        } else {
          std::vector<double> times;
          for (const auto& r : rows) times.push_back(r.time);
          auto coupled = back_reaction_probe(built.initial_state, h, times);
          HybridHamiltonian decoupled(preset_field(*h.preset(), grid), h.quantum_term(), {},
                                      grid, h.liouvillian().scheme(),
                                      h.classical_multiplicative(), h.preset());
          auto free_run = back_reaction_probe(built.initial_state, decoupled, times);
          for (size_t i = 0; i < times.size(); ++i)
            check.worst = std::max(check.worst, (coupled.marginals[i] - free_run.marginals[i])
                                                    .cwiseAbs()
                                                    .maxCoeff());
          check.passed = check.worst <= check.tol;
        }
      }
    } catch (const Error& e) {
      check.passed = false;
      check.details["error"] = e.what();
    }
    result.checks_passed = result.checks_passed && check.passed;
    result.checks.push_back(std::move(check));
  }
}

}  // namespace

ScenarioResult run_scenario(const Json& config,
                            const std::optional<std::string>& checks_override) {
  Json resolved = validate_config(config);
  BuiltScenario built = build_scenario(resolved, checks_override);

  ScenarioResult result;
  result.resolved_config = resolved;
  result.observable_names = built.observable_names;

  const auto& grid = built.grid;
  const int d = built.quantum_dim;
  Mat rho0 = built.lift == LiftKind::coherent
                 ? lift_coherent(built.initial_state, grid, false).matrix
                 : lift_block_diagonal(built.initial_state, grid).matrix;

  auto prepared = built.hamiltonian->propagator().prepare(rho0);
  for (int s = 0; s < built.n_samples; ++s) {
    double t = built.n_samples == 1 ? 0.0
                                    : built.t_end * s / (built.n_samples - 1);
    Mat rho_t = prepared.at(t);
    TimeSeriesRow row;
    row.time = t;
    for (const auto& f : built.observables) {
      Complex v = dm_expectation_matrix(rho_t, f);
      row.observable_re.push_back(v.real());
      row.observable_im_residual.push_back(v.imag());
    }
    RVec eigs = hermitian_eigenvalues(0.5 * (rho_t + rho_t.adjoint()));
    row.s_vn = entropy_from_eigenvalues(eigs);
    row.min_eigenvalue = eigs.minCoeff();
    row.trace_residual = std::abs(rho_t.trace() - Complex(1, 0));
    row.s_h = hybrid_entropy_of_matrix(rho_t, grid, d);
    row.purity = purity(quantum_marginal(rho_t, grid, d));
    result.rows.push_back(std::move(row));
  }

  run_checks(built, rho0, result.rows, result);
  return result;
}

std::string render_timeseries_csv(const ScenarioResult& result) {
  std::string out = "time";
  for (const auto& name : result.observable_names)
    out += "," + name + "_re," + name + "_im_residual";
  out += ",S_vN,S_H,purity,trace_residual,min_eigenvalue\n";
  for (const auto& r : result.rows) {
    out += fmt_double(r.time);
    for (size_t i = 0; i < r.observable_re.size(); ++i)
      out += "," + fmt_double(r.observable_re[i]) + "," + fmt_double(r.observable_im_residual[i]);
    out += "," + fmt_double(r.s_vn) + "," + fmt_double(r.s_h) + "," + fmt_double(r.purity) +
           "," + fmt_double(r.trace_residual) + "," + fmt_double(r.min_eigenvalue) + "\n";
  }
  return out;
}

Json render_checks_json(const ScenarioResult& result) {
  Json checks = Json::array();
  for (const auto& c : result.checks) {
    Json j = Json::object();
    j["name"] = c.name;
    j["applicable"] = c.applicable;
    j["passed"] = c.passed;
    j["worst"] = c.worst;
    j["tol"] = c.tol;
    if (!c.details.empty()) j["details"] = c.details;
    checks.push_back(j);
  }
  return Json{{"passed", result.checks_passed}, {"checks", checks}};
}

void write_scenario_outputs(const ScenarioResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create output directory " + out_dir);
  auto write_file = [&](const std::string& name, const std::string& content) {
    std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
    if (!f) throw Error(ErrorCode::io, "cannot write " + name + " under " + out_dir);
    f << content;
  };
  write_file("timeseries.csv", render_timeseries_csv(result));
  write_file("checks.json", render_checks_json(result).dump(2) + "\n");
  write_file("config.resolved.json", result.resolved_config.dump(2) + "\n");
}

Json list_presets() {
  Json out = Json::array();
  for (const auto& info : preset_catalog()) {
    out.push_back(Json{{"name", info.name},
                       {"expression", info.expression},
                       {"description", info.description}});
  }
  return Json{{"presets", out}};
}

Json emit_schema() {
  // machine-readable subset of JSON Schema describing ScenarioConfig
  Json matrix = Json{{"type", "array"},
                     {"description", "row-major d*d array of [re, im] pairs"},
                     {"items", Json{{"type", "array"},
                                    {"items", Json{{"type", "number"}}},
                                    {"minItems", 2},
                                    {"maxItems", 2}}}};
  Json expr_string = Json{{"type", "string"},
                          {"description", "phase-space expression over q and p, or a preset "
                                          "name where noted"}};
  Json schema = Json::object();
  schema["$schema"] = "https://json-schema.org/draft/2020-12/schema";
  schema["title"] = "hyko scenario configuration";
  schema["type"] = "object";
  schema["required"] = Json::array({"grid", "quantum_dim", "hamiltonian", "initial_state",
                                    "time"});
  Json props = Json::object();
  props["grid"] = Json{
      {"type", "object"},
      {"required", Json::array({"q_min", "q_max", "p_min", "p_max", "n_q", "n_p"})},
      {"properties",
       Json{{"q_min", Json{{"type", "number"}}},
            {"q_max", Json{{"type", "number"}}},
            {"p_min", Json{{"type", "number"}}},
            {"p_max", Json{{"type", "number"}}},
            {"n_q", Json{{"type", "integer"}, {"minimum", 4}}},
            {"n_p", Json{{"type", "integer"}, {"minimum", 4}}},
            {"boundary",
             Json{{"enum", Json::array({"periodic", "zero"})}, {"default", "periodic"}}}}}};
  props["quantum_dim"] = Json{{"type", "integer"}, {"minimum", 2}};
  props["params"] = Json{{"type", "object"},
                         {"additionalProperties", Json{{"type", "number"}}},
                         {"default", Json::object()}};
  props["hamiltonian"] = Json{
      {"type", "object"},
      {"required", Json::array({"classical", "quantum"})},
      {"properties",
       Json{{"classical", expr_string},
            {"scheme", Json{{"enum", Json::array({"stencil2", "stencil4", "spectral"})},
                            {"default", "stencil2"}}},
            {"quantum", matrix},
            {"coupling",
             Json{{"type", "array"},
                  {"default", Json::array()},
                  {"items", Json{{"type", "object"},
                                 {"required", Json::array({"classical", "quantum", "strength"})},
                                 {"properties", Json{{"classical", expr_string},
                                                     {"quantum", matrix},
                                                     {"strength", Json{{"type", "number"}}}}}}}}},
            {"classical_multiplicative", expr_string}}}};
  props["initial_state"] = Json{
      {"type", "object"},
      {"properties",
       Json{{"kind", Json{{"enum", Json::array({"product", "custom"})}, {"default", "product"}}},
            {"classical", expr_string},
            {"quantum", matrix},
            {"terms", Json{{"type", "array"},
                           {"items", Json{{"type", "object"},
                                          {"required",
                                           Json::array({"weight", "classical", "quantum"})}}}}}}}};
  props["lift"] = Json{{"enum", Json::array({"block_diagonal", "coherent"})},
                       {"default", "block_diagonal"}};
  props["time"] = Json{{"type", "object"},
                       {"required", Json::array({"t_end"})},
                       {"properties", Json{{"t_end", Json{{"type", "number"}, {"minimum", 0}}},
                                           {"n_samples", Json{{"type", "integer"},
                                                              {"minimum", 1},
                                                              {"default", 10}}}}}};
  props["observables"] = Json{
      {"type", "array"},
      {"default", Json::array()},
      {"items",
       Json{{"type", "object"},
            {"required", Json::array({"name", "terms"})},
            {"properties",
             Json{{"name", Json{{"type", "string"}}},
                  {"terms",
                   Json{{"type", "array"},
                        {"items",
                         Json{{"type", "object"},
                              {"required", Json::array({"classical", "quantum"})},
                              {"properties",
                               Json{{"gamma", Json{{"type", "array"},
                                                   {"description", "[re, im], default [1, 0]"}}},
                                    {"classical", expr_string},
                                    {"quantum", matrix}}}}}}}}}}}};
  props["checks"] = Json{
      {"type", "array"},
      {"default", Json::array({"trace", "positivity", "entropy"})},
      {"items", Json{{"enum", Json::array({"trace", "positivity", "entropy", "duality",
                                           "expectation_identity", "entropy_offset",
                                           "marginal_power", "no_back_reaction", "all"})}}}};
  props["seed"] = Json{{"type", "integer"}, {"default", 0}};
  schema["properties"] = props;
  return schema;
}

}  // namespace hyko
