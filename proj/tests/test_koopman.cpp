#include <doctest.h>

#include <cmath>
#include <random>

#include "koopman.hpp"
#include "presets.hpp"
#include "quantum.hpp"

using namespace hyko;

namespace {

Vec normalized_gaussian_wavefunction(const PhaseSpaceGrid& g, double cq, double cp,
                                     double sigma) {
  auto rho = ClassicalDensity::normalized(
      g.sample([&](double q, double p) {
        return std::exp(-((q - cq) * (q - cq) + (p - cp) * (p - cp)) / (2 * sigma * sigma));
      }),
      g);
  return density_to_wavefunction(rho, g);
}

}  // namespace

TEST_CASE("multiplicative representation") {
  auto g = build_grid(-2, 2, -2, 2, 8, 8, Boundary::periodic);
  Vec ones = Vec::Ones(g.size());
  auto id = represent_multiplicative(RVec(RVec::Ones(g.size())), g);
  CHECK((id.apply(ones) - ones).cwiseAbs().maxCoeff() == 0.0);

  RVec qvals = g.sample([](double q, double) { return q; });
  auto mq = represent_multiplicative(qvals, g);
  Vec out = mq.apply(ones);
  for (int i = 0; i < g.size(); ++i) CHECK(out(i).real() == doctest::Approx(g.q_of(i)));

  // pi(a) pi(b) = pi(ab) for diagonal operators
  std::mt19937_64 rng(3);
  std::normal_distribution<double> dist;
  Vec a(g.size()), b(g.size());
  for (int i = 0; i < g.size(); ++i) {
    a(i) = Complex(dist(rng), dist(rng));
    b(i) = Complex(dist(rng), dist(rng));
  }
  Mat lhs = represent_multiplicative(a, g).dense() * represent_multiplicative(b, g).dense();
  Mat rhs = represent_multiplicative(Vec(a.cwiseProduct(b)), g).dense();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
  // diagonal operators commute exactly
  Mat rl = represent_multiplicative(b, g).dense() * represent_multiplicative(a, g).dense();
  CHECK((lhs - rl).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("momentum operator symbol and hermiticity") {
  auto g = build_grid(0, 2 * M_PI, -1, 1, 64, 4, Boundary::periodic);
  auto pi_q = momentum_operator(g, Axis::q, 2);

  // antisymmetry of the difference matrix makes -iD Hermitian
  SpRMat d = pi_q.difference_matrix();
  CHECK((RMat(d) + RMat(d).transpose()).cwiseAbs().maxCoeff() < 1e-14);

  Vec constant = Vec::Ones(g.size());
  CHECK(pi_q.apply(constant).cwiseAbs().maxCoeff() == 0.0);

  // oracle: the modified wavenumber of the order-2 stencil, sin(k dq)/dq at k=1
  double expected = std::sin(g.dq()) / g.dq();
  CHECK(expected == doctest::Approx(0.99839).epsilon(1e-4));
  Vec wave = g.sample_complex([](double q, double) { return std::exp(Complex(0, q)); });
  Vec applied = pi_q.apply(wave);
  for (int i = 0; i < g.size(); ++i)
    CHECK(std::abs(applied(i) - expected * wave(i)) < 1e-12);

  CHECK_THROWS_AS(momentum_operator(build_grid(0, 1, 0, 1, 8, 8, Boundary::zero), Axis::q, 4),
                  ConfigError);
}

TEST_CASE("canonical commutator in the weak sense") {
  // oracle: [pi(q), Pi_q] psi = i psi in the continuum
  double errs[2];
  int k = 0;
  for (int n : {32, 64}) {
    auto g = build_grid(-6, 6, -6, 6, n, n, Boundary::periodic);
    Vec psi = normalized_gaussian_wavefunction(g, 0.5, 0.0, 1.0);
    RVec qv = g.sample([](double q, double) { return q; });
    auto mq = represent_multiplicative(qv, g);
    auto pq = momentum_operator(g, Axis::q, 2);
    Vec comm = mq.apply(pq.apply(psi)) - pq.apply(mq.apply(psi));
    errs[k++] = (comm - Complex(0, 1) * psi).cwiseAbs().maxCoeff();
  }
  CHECK(std::log2(errs[0] / errs[1]) > 1.8);
}

TEST_CASE("liouvillian assembly") {
  auto g = build_grid(-4, 4, -4, 4, 16, 16, Boundary::periodic);

  // constant energy generates nothing
  auto field0 = hamiltonian_field(RVec::Constant(g.size(), 2.5), g);
  auto l0 = build_liouvillian(field0, g);
  CHECK(l0.dense_matrix().cwiseAbs().maxCoeff() < 1e-14);

  // free particle: on e^{iq} f(p) the generator acts as p times the stencil symbol
  auto lfree = build_liouvillian(preset_field(ClassicalPreset::free_particle, g), g);
  Vec wave = g.sample_complex([](double q, double p) {
    return std::exp(Complex(0, q)) * std::exp(-p * p);
  });
  Vec out = lfree.apply(wave);
  double symbol = std::sin(g.dq()) / g.dq();
  for (int i = 0; i < g.size(); ++i)
    CHECK(std::abs(out(i) - g.p_of(i) * symbol * wave(i)) < 1e-12);

  // exact hermiticity of the symmetrized assembly
  auto g32 = build_grid(-5, 5, -5, 5, 32, 32, Boundary::periodic);
  auto losc = build_liouvillian(preset_field(ClassicalPreset::harmonic, g32), g32);
  Mat l = losc.dense_matrix();
  CHECK((l - l.adjoint()).cwiseAbs().maxCoeff() < 1e-14);

  // spectral scheme is antisymmetric-exact as well
  auto lspec = build_liouvillian(preset_field(ClassicalPreset::harmonic, g32), g32,
                                 DiffScheme::spectral);
  Mat ls = lspec.dense_matrix();
  CHECK((ls - ls.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("koopman propagation is unitary and matches the transport oracle") {
  auto g = build_grid(-6, 6, -6, 6, 32, 32, Boundary::periodic);
  auto l = build_liouvillian(preset_field(ClassicalPreset::harmonic, g), g);
  Vec psi0 = normalized_gaussian_wavefunction(g, 1.0, 0.0, 1.0);

  CHECK((koopman_propagate(psi0, l, 0.0) - psi0).cwiseAbs().maxCoeff() == 0.0);

  for (double t : {0.3, M_PI / 2, 2.0, 4 * M_PI}) {
    Vec psi_t = koopman_propagate(psi0, l, t);
    CHECK(std::abs(psi_t.norm() - psi0.norm()) < 1e-10);
  }

  // |psi(t)|^2 vs exact characteristics
  Vec psi_t = koopman_propagate(psi0, l, M_PI / 2);
  auto rho_t = wavefunction_to_density(psi_t, g);
  auto rho0 = wavefunction_to_density(psi0, g);
  auto oracle = liouville_oracle(rho0, ClassicalPreset::harmonic, M_PI / 2, g);
  CHECK((rho_t.values - oracle.values).cwiseAbs().maxCoeff() < 2e-2);
}

TEST_CASE("lanczos path agrees with the dense eigensolver path") {
  auto g = build_grid(-6, 6, -6, 6, 24, 24, Boundary::periodic);
  auto l = build_liouvillian(preset_field(ClassicalPreset::harmonic, g), g);
  Vec psi0 = normalized_gaussian_wavefunction(g, 1.0, 0.5, 1.2);
  PropagateOptions dense_opts;  // grid fits under the dense threshold
  PropagateOptions lanczos_opts;
  lanczos_opts.dense_threshold = 0;
  for (double t : {0.7, 3.1}) {
    Vec a = koopman_propagate(psi0, l, t, dense_opts);
    Vec b = koopman_propagate(psi0, l, t, lanczos_opts);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("classical GNS density matrix") {
  auto g = build_grid(-1, 1, -1, 1, 6, 6, Boundary::periodic);

  RVec delta = RVec::Zero(g.size());
  delta(7) = 1.0 / g.cell_weight();
  Mat dm = classical_gns_dm(ClassicalDensity::checked(delta, g), g);
  CHECK(std::abs(dm(7, 7) - Complex(1, 0)) < 1e-14);
  CHECK(dm.cwiseAbs().sum() == doctest::Approx(1.0));  // the only nonzero entry

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  RVec raw(g.size());
  for (int i = 0; i < g.size(); ++i) raw(i) = uni(rng);
  auto f = ClassicalDensity::normalized(raw, g);
  Mat rho = classical_gns_dm(f, g);
  CHECK(std::abs(rho.trace() - Complex(1, 0)) < 1e-13);

  // Tr(rho_C pi(a)) equals the phase-space average of a against F
  RVec a = g.sample([](double q, double p) { return std::cos(q) + q * p; });
  Complex lhs = (rho * represent_multiplicative(a, g).dense()).trace();
  double rhs = riemann_integral(RVec(f.values.cwiseProduct(a)), g);
  CHECK(std::abs(lhs - rhs) < 1e-12);

  // rank-1 projector onto sqrt(F)
  RVec eigs = hermitian_eigenvalues(rho);
  CHECK(eigs.maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(eigs.head(g.size() - 1).cwiseAbs().maxCoeff()) < 1e-12);
}

TEST_CASE("strict multiplicativity check") {
  auto g = build_grid(0, 2 * M_PI, 0, 2 * M_PI, 8, 8, Boundary::periodic);
  Mat diag = Mat::Zero(g.size(), g.size());
  for (int i = 0; i < g.size(); ++i) diag(i, i) = Complex(i, 1.0);
  auto rep = check_multiplicative(diag, 1e-12);
  CHECK(rep.is_multiplicative);
  CHECK(rep.off_diagonal_mass == 0.0);

  Mat pi_q = momentum_operator(g, Axis::q, 2).dense();
  auto rep2 = check_multiplicative(pi_q, 1e-12);
  CHECK(!rep2.is_multiplicative);
  CHECK(rep2.off_diagonal_mass == doctest::Approx(1.0));
}

TEST_CASE("commutator with the Liouvillian is weakly multiplicative") {
  // oracle: [pi(a), L] acts as multiplication by -i X_H(a)
  auto a_fn = [](double q, double p) { return std::sin(q) + 0.5 * std::cos(p); };
  auto xh_a = [](double q, double p) {
    // alpha dq(a) + beta dp(a) with alpha = p, beta = -q
    return p * std::cos(q) + (-q) * (-0.5 * std::sin(p));
  };
  double errs[2];
  int k = 0;
  for (int n : {24, 48}) {
    auto g = build_grid(-M_PI, M_PI, -M_PI, M_PI, n, n, Boundary::periodic);
    auto l = build_liouvillian(preset_field(ClassicalPreset::harmonic, g), g);
    Vec a = g.sample_complex([&](double q, double p) { return Complex(a_fn(q, p), 0); });
    Mat probes = bandlimited_probes(g);
    auto commutator_action = [&](const Vec& v) {
      return Vec(a.cwiseProduct(l.apply(v)) - l.apply(Vec(a.cwiseProduct(v))));
    };
    // [diag(a), -i X_H] = +i X_H(a) as a multiplication operator
    Vec mult = g.sample_complex([&](double q, double p) {
      return Complex(0, 1) * xh_a(q, p);
    });
    errs[k] = weak_multiplicative_residual_vs(commutator_action, probes, mult);
    // the best fit can only improve on the analytic multiplier
    auto fit = weak_multiplicative_fit(commutator_action, probes);
    CHECK(fit.residual <= errs[k] + 1e-12);
    ++k;
  }
  CHECK(std::log2(errs[0] / errs[1]) > 1.8);
}
