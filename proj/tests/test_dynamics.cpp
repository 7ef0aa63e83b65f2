#include <doctest.h>

#include <cmath>
#include <random>

#include "dynamics.hpp"
#include "linalg.hpp"
#include "quantum.hpp"

using namespace hyko;

namespace {

PhaseSpaceGrid probe_grid(int n = 8) {
  return build_grid(-6, 6, -6, 6, n, n, Boundary::periodic);
}

HybridState gaussian_product_state(const PhaseSpaceGrid& g, const Mat& rho_q, double cq,
                                   double cp, double sigma = 1.0) {
  auto f = ClassicalDensity::normalized(
      g.sample([&](double q, double p) {
        return std::exp(-((q - cq) * (q - cq) + (p - cp) * (p - cp)) / (2 * sigma * sigma));
      }),
      g);
  return product_state(f, rho_q, g);
}

HybridHamiltonian qubit_oscillator(const PhaseSpaceGrid& g, double omega, double lambda,
                                   DiffScheme scheme = DiffScheme::stencil2) {
  std::vector<CouplingTerm> coupling;
  if (lambda != 0.0)
    coupling.push_back({g.sample([](double q, double) { return q; }), pauli_x(), lambda});
  return build_hybrid_hamiltonian(ClassicalPreset::harmonic, Mat(0.5 * omega * pauli_z()),
                                  coupling, g, scheme);
}

}  // namespace

TEST_CASE("hybrid hamiltonian assembly and limits") {
  auto g = probe_grid();
  const int n = g.size();

  // no quantum part, no coupling: L_C (x) I
  auto pure_classical = build_hybrid_hamiltonian(ClassicalPreset::harmonic, Mat::Zero(2, 2),
                                                 {}, g);
  Mat realized = pure_classical.realize_dense();
  Mat l = pure_classical.liouvillian().dense_matrix();
  Mat expected = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      expected.block(2 * i, 2 * j, 2, 2) = l(i, j) * Mat::Identity(2, 2);
  CHECK((realized - expected).cwiseAbs().maxCoeff() < 1e-14);

  // no classical energy, no coupling: I (x) H_Q
  auto pure_quantum = build_hybrid_hamiltonian(RVec::Zero(n), Mat(0.7 * pauli_z()), {}, g);
  Mat realized_q = pure_quantum.realize_dense();
  Mat expected_q = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) expected_q.block(2 * i, 2 * i, 2, 2) = 0.7 * pauli_z();
  CHECK((realized_q - expected_q).cwiseAbs().maxCoeff() < 1e-14);

  // the admissible qubit-oscillator operator is Hermitian
  auto h = qubit_oscillator(g, 1.0, 0.5);
  CHECK(hermiticity_error(h.realize_dense()) < 1e-12);
  // coupling classical factors are exactly multiplicative in the realization
  for (const auto& term : h.product_operator().terms)
    if (!term.classical.is_diagonal())
      CHECK(term.quantum.cwiseAbs().maxCoeff() == doctest::Approx(1.0));  // only L_C (x) I

  Mat not_hermitian = pauli_x() + Complex(0, 0.3) * Mat::Identity(2, 2);
  CHECK_THROWS_AS(build_hybrid_hamiltonian(RVec::Zero(n), not_hermitian, {}, g),
                  ValidationError);
}

TEST_CASE("algebra preservation: admissible vs momentum-coupled") {
  auto g = probe_grid(16);
  std::mt19937_64 rng(123);
  std::vector<HybridOperator> samples;
  for (int i = 0; i < 6; ++i) samples.push_back(random_hybrid_operator(g, 2, 3, rng));
  Mat probes = bandlimited_probes(g);

  auto h = qubit_oscillator(g, 1.0, 0.5);
  auto admissible = check_algebra_preservation(h.product_operator(), samples, 0.2, probes);
  CHECK(admissible.pass);
  CHECK(admissible.max_residual > 0.0);

  auto forbidden = with_momentum_coupling(h.product_operator(), Axis::q, pauli_x(), 0.5);
  auto rejected = check_algebra_preservation(forbidden, samples, 0.2, probes);
  CHECK(!rejected.pass);
  CHECK(rejected.max_residual > 5 * admissible.max_residual);

  // purely quantum terms do not disturb the algebra at all
  auto quantum_only = build_hybrid_hamiltonian(RVec::Zero(g.size()), Mat(0.9 * pauli_z()),
                                               {}, g);
  auto clean = check_algebra_preservation(quantum_only.product_operator(), samples, 1e-12,
                                          probes);
  CHECK(clean.pass);
  CHECK(clean.max_residual < 1e-13);
}

TEST_CASE("evolve_state basics") {
  auto g = probe_grid();
  auto h = qubit_oscillator(g, 1.0, 0.4);
  std::mt19937_64 rng(5);
  auto state = gaussian_product_state(g, random_density_matrix(2, rng), 1.0, 0.0);
  Mat rho0 = lift_block_diagonal(state, g).matrix;

  Mat same = evolve_state(rho0, h, 0.0);
  CHECK((same - rho0).cwiseAbs().maxCoeff() < 1e-13);

  Mat rho_t = evolve_state(rho0, h, 1.7);
  CHECK(std::abs(rho_t.trace() - Complex(1, 0)) < 1e-12);
  CHECK(hermiticity_error(rho_t) < 1e-12);
  RVec before = hermitian_eigenvalues(rho0), after = hermitian_eigenvalues(rho_t);
  CHECK((before - after).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("decoupled evolution factorizes into the standalone equations") {
  auto g = probe_grid(10);
  auto h = qubit_oscillator(g, 1.0, 0.0);
  Mat rho_q0 = 0.5 * (Mat::Identity(2, 2) + 0.6 * pauli_x() + 0.3 * pauli_z());
  auto state = gaussian_product_state(g, rho_q0, 1.0, 0.0);
  Mat rho0 = lift_block_diagonal(state, g).matrix;

  double t = 1.3;
  Mat rho_t = evolve_state(rho0, h, t);

  // quantum marginal follows the standalone von Neumann equation
  Mat h_q = 0.5 * pauli_z();
  UnitaryPropagator uq(h_q);
  Mat expected_q = uq.evolve_state(t, quantum_marginal(rho0, g, 2));
  CHECK((quantum_marginal(rho_t, g, 2) - expected_q).cwiseAbs().maxCoeff() < 1e-8);

  // classical marginal follows the standalone Koopman-von Neumann equation
  auto f0 = classical_marginal(state, g);
  Mat rho_c0 = Mat::Zero(g.size(), g.size());
  for (int i = 0; i < g.size(); ++i) rho_c0(i, i) = g.cell_weight() * f0.values(i);
  UnitaryPropagator uc(h.liouvillian().dense_matrix());
  Mat rho_c_t = uc.evolve_state(t, rho_c0);
  auto marginal_t = classical_marginal(rho_t, g, 2);
  for (int i = 0; i < g.size(); ++i)
    CHECK(std::abs(rho_c_t(i, i).real() / g.cell_weight() - marginal_t.values(i)) < 1e-8);
}

TEST_CASE("spectral and RK4 propagation agree") {
  auto g = probe_grid();
  auto h = qubit_oscillator(g, 1.0, 0.5);
  std::mt19937_64 rng(9);
  auto state = gaussian_product_state(g, random_density_matrix(2, rng), 0.5, -0.5);
  Mat rho0 = lift_block_diagonal(state, g).matrix;
  Mat spectral = evolve_state(rho0, h, 1.0, EvolveMethod::spectral);
  Mat rk4 = evolve_state(rho0, h, 1.0, EvolveMethod::rk4, 1e-3);
  CHECK((spectral - rk4).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("observable evolution and duality") {
  auto g = probe_grid();
  auto h = qubit_oscillator(g, 1.0, 0.5);
  std::mt19937_64 rng(13);

  Mat identity = Mat::Identity(h.product_dim(), h.product_dim());
  CHECK((evolve_observable(identity, h, 2.0) - identity).cwiseAbs().maxCoeff() < 1e-12);

  auto state = random_hybrid_state(g, 2, rng);
  Mat rho0 = lift_block_diagonal(state, g).matrix;
  for (int rep = 0; rep < 3; ++rep) {
    Mat f = random_hybrid_operator(g, 2, 3, rng).realize_dense();
    double t = 0.6 + 0.5 * rep;
    Complex heisenberg = (rho0 * evolve_observable(f, h, t)).trace();
    Complex schrodinger = (evolve_state(rho0, h, t) * f).trace();
    CHECK(std::abs(heisenberg - schrodinger) < 1e-10);
  }

  // decoupled: a (x) I evolves with the classical generator alone
  auto h0 = qubit_oscillator(g, 1.0, 0.0);
  Vec a = g.sample_complex([](double q, double p) { return std::sin(q) + std::cos(p); });
  HybridOperator a_op(g, 2, {HybridTerm{1.0, a, Mat::Identity(2, 2)}});
  double t = 0.9;
  Mat evolved = evolve_observable(a_op.realize_dense(), h0, t);
  UnitaryPropagator uc(h0.liouvillian().dense_matrix());
  Mat a_cl = uc.evolve_observable(t, Mat(a.asDiagonal()));
  Mat expected = Mat::Zero(2 * g.size(), 2 * g.size());
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j)
      expected.block(2 * i, 2 * j, 2, 2) = a_cl(i, j) * Mat::Identity(2, 2);
  CHECK((evolved - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("back-reaction probe") {
  auto g = build_grid(-8, 8, -8, 8, 12, 12, Boundary::periodic);
  Mat pure = Mat::Zero(2, 2);
  pure(0, 0) = 1.0;
  auto state = gaussian_product_state(g, pure, 1.0, 0.0, 1.4);
  std::vector<double> times{0.0, 0.5, 1.0, 2.0};

  auto coupled = qubit_oscillator(g, 1.0, 0.5, DiffScheme::spectral);
  auto free_h = qubit_oscillator(g, 1.0, 0.0, DiffScheme::spectral);
  auto with_coupling = back_reaction_probe(state, coupled, times);
  auto without = back_reaction_probe(state, free_h, times);

  for (size_t i = 0; i < times.size(); ++i) {
    double pair_gap =
        (with_coupling.marginals[i] - without.marginals[i]).cwiseAbs().maxCoeff();
    CHECK(pair_gap < 1e-8);
    // the deviation from the oracle is the shared discretization error
    CHECK(std::abs(with_coupling.oracle_deviation[i] - without.oracle_deviation[i]) < 1e-8);
  }
  // purity stays 1 without coupling and degrades with it
  for (double p : without.quantum_purity) CHECK(std::abs(p - 1.0) < 1e-10);
  CHECK(*std::min_element(with_coupling.quantum_purity.begin(),
                          with_coupling.quantum_purity.end()) < 1.0 - 1e-3);

  // no preset, no oracle
  RVec custom = g.sample([](double q, double p) { return q * q * p; });
  auto h_expr = build_hybrid_hamiltonian(custom, Mat(0.5 * pauli_z()), {}, g);
  CHECK_THROWS_AS(back_reaction_probe(state, h_expr, times), UnsupportedError);
}

TEST_CASE("linear generator validation") {
  auto g = build_grid(-4, 4, -4, 4, 4, 4, Boundary::periodic);
  auto probes = default_validator_probes(g, 2, 2025);
  CHECK(probes.states.size() == 10);
  CHECK(probes.operators.size() == 20);

  auto h = qubit_oscillator(g, 1.0, 0.3);
  ValidatorThresholds thresholds;
  thresholds.trace = 1e-12;
  thresholds.automorphism = 0.5;  // coarse grid stencil allowance

  auto unitary = LinearGenerator::from_hamiltonian(h.realize_dense());
  auto rep = validate_linear_generator(unitary, probes, g, 1.0, 0.02, thresholds);
  CHECK(rep.linear);
  CHECK(rep.trace_ok);
  CHECK(rep.trace_derivative_residual < 1e-12);
  CHECK(rep.positivity_ok);
  CHECK(rep.entropy_ok);
  CHECK(rep.automorphism_ok);
  CHECK(rep.pass);

  // trace-violating probe: G(rho) = -i[H, rho] - gamma {N, rho}
  double gamma = 0.15;
  Mat number = Mat::Zero(2, 2);
  number(1, 1) = 1.0;
  Mat n_full = Mat::Zero(h.product_dim(), h.product_dim());
  for (int i = 0; i < g.size(); ++i) n_full.block(2 * i, 2 * i, 2, 2) = number;
  auto decaying = LinearGenerator::hamiltonian_with_decay(h.realize_dense(), n_full, gamma);

  // closed form: Tr G(rho) = -2 gamma Tr(N rho)
  Mat rho0 = lift_block_diagonal(probes.states[0], g).matrix;
  double residual = std::abs(decaying.state_action(rho0).trace());
  double closed_form = 2 * gamma * (n_full * rho0).trace().real();
  CHECK(std::abs(residual - closed_form) / closed_form < 0.05);

  auto rep2 = validate_linear_generator(decaying, probes, g, 1.0, 0.02, thresholds);
  CHECK(!rep2.trace_ok);
  CHECK(!rep2.pass);
  CHECK(rep2.trace_derivative_residual > 0.9 * closed_form);

  // the zero generator passes everything trivially
  auto rep3 = validate_linear_generator(LinearGenerator::zero(h.product_dim()), probes, g,
                                        1.0, 0.05, thresholds);
  CHECK(rep3.pass);
  CHECK(rep3.trace_derivative_residual == 0.0);
}

TEST_CASE("canonical stationarity") {
  // beta -> 0 limit: near-uniform state, stationary under both lifts
  auto g = build_grid(-6, 6, -6, 6, 16, 16, Boundary::periodic);
  auto h = qubit_oscillator(g, 1.0, 0.0);
  auto near_uniform_block = canonical_stationarity(1e-9, h, 2 * M_PI, LiftKind::block_diagonal);
  CHECK(near_uniform_block.rho_drift < 1e-8);
  auto near_uniform_coh = canonical_stationarity(1e-9, h, 2 * M_PI, LiftKind::coherent);
  CHECK(near_uniform_coh.rho_drift < 1e-8);

  // beta = 1 with Fourier differentiation on a padded box: the coherent lift
  // transports sqrt(F), which the discrete generator annihilates
  auto gw = build_grid(-9, 9, -9, 9, 24, 24, Boundary::periodic);
  auto hw = qubit_oscillator(gw, 1.0, 0.0, DiffScheme::spectral);
  auto rep = canonical_stationarity(1.0, hw, 2 * M_PI, LiftKind::coherent);
  CHECK(rep.rho_drift < 1e-5);
  CHECK(rep.rho_drift_relative < 1e-4);
}
