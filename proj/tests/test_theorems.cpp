#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "ontoscope/simplex.hpp"
#include "ontoscope/theorems.hpp"
#include "ontoscope/zoo.hpp"
#include "oracles.hpp"

using namespace ontoscope;
using Catch::Approx;

TEST_CASE("phase-1 simplex") {
  SECTION("feasible square system") {
    Eigen::MatrixXd a(2, 2);
    a << 1, 1, 1, -1;
    Eigen::VectorXd b(2);
    b << 2, 0;
    const auto result = solve_feasibility(a, b);
    REQUIRE(result.feasible);
    CHECK(result.solution[0] == Approx(1.0).margin(1e-9));
    CHECK(result.solution[1] == Approx(1.0).margin(1e-9));
  }
  SECTION("nonnegativity makes a negative target infeasible") {
    Eigen::MatrixXd a(1, 1);
    a << 1;
    Eigen::VectorXd b(1);
    b << -1;
    CHECK_FALSE(solve_feasibility(a, b).feasible);
  }
  SECTION("contradictory rows are infeasible") {
    Eigen::MatrixXd a(2, 2);
    a << 1, 1, 1, 1;
    Eigen::VectorXd b(2);
    b << 1, 2;
    const auto result = solve_feasibility(a, b);
    CHECK_FALSE(result.feasible);
    CHECK(result.residual > 0.4);
  }
  SECTION("underdetermined feasible system") {
    Eigen::MatrixXd a(1, 3);
    a << 1, 2, 3;
    Eigen::VectorXd b(1);
    b << 6;
    const auto result = solve_feasibility(a, b);
    REQUIRE(result.feasible);
    double lhs = 0.0;
    for (int j = 0; j < 3; ++j) {
      CHECK(result.solution[j] >= -1e-12);
      lhs += a(0, j) * result.solution[j];
    }
    CHECK(lhs == Approx(6.0).margin(1e-9));
  }
}

TEST_CASE("theorem 1 on the hemisphere model") {
  OntologicalModel model(fibonacci_sphere(20000));
  register_theorem1_bases(model, ket0(), ket_plus());
  const Theorem1Report report = theorem1_check(model, ket0(), ket_plus(), 3e-2);
  CHECK(report.support_sum == Approx(2.0).margin(3e-2));
  for (const auto& f : report.f_values) {
    REQUIRE(f.has_value());
    CHECK(*f == Approx(1.0).margin(3e-2));
  }
  CHECK(report.conclusion);
}

TEST_CASE("theorem 1 negative control") {
  OntologicalModel base(fibonacci_sphere(4000));
  register_theorem1_bases(base, ket0(), ket_plus());
  // damage the eta-side density so its support no longer covers the sphere
  const auto damaged = build_truncated_epistemic(base, ket_plus(), ket0(), 0.5);
  const Theorem1Report report = theorem1_check(damaged, ket0(), ket_plus(), 3e-2);
  CHECK(report.support_sum < 2.0 - 3e-2);
  CHECK_FALSE(report.conclusion);
  CHECK(report.support_sum == Approx(1.625).margin(0.03));
}

TEST_CASE("theorem 1 with a degenerate basis pair") {
  const auto model = build_ks(2000, 0, 1);
  const Theorem1Report report = theorem1_check(model, ket0(), ket0(), 1e-6);
  CHECK(report.support_integrals[0] == Approx(1.0).margin(1e-9));
  CHECK(report.support_integrals[1] == Approx(0.0).margin(1e-12));
  CHECK(report.support_integrals[2] == Approx(0.0).margin(1e-12));
  CHECK(report.support_integrals[3] == Approx(1.0).margin(1e-9));
  CHECK(report.support_sum == Approx(2.0).margin(1e-9));
  CHECK(report.f_values[0].has_value());
  CHECK_FALSE(report.f_values[1].has_value());  // orthogonal pairing skipped
  CHECK_FALSE(report.f_values[2].has_value());
  CHECK(report.f_values[3].has_value());
  CHECK(report.conclusion);
}

TEST_CASE("theorem 1 requires the registered scaffolding") {
  const auto model = build_ks(2000, 0, 1);
  CHECK_THROWS_AS(theorem1_check(model, state_from_angles(0.37, 0.2), ket_plus(), 3e-2),
                  std::invalid_argument);
  OntologicalModel bare(fibonacci_sphere(2000));
  register_ks_state(bare, "z+", ket0());
  register_ks_state(bare, "z-", ket1());
  register_ks_state(bare, "x+", ket_plus());
  register_ks_state(bare, "x-", ket_minus());
  CHECK_THROWS_AS(theorem1_check(bare, ket0(), ket_plus(), 3e-2),
                  std::invalid_argument);  // no mixed procedures registered
}

TEST_CASE("theorem 2 identity and implication") {
  const auto space = fibonacci_sphere(2000);
  const QuantumState psi = state_from_angles(1.3, 0.2);
  const EpistemicState mu = ks_epistemic(space, psi);

  SECTION("identical densities") {
    OntologicalModel model(space);
    model.add_preparation({"P", pure_density(psi), mu});
    model.add_preparation({"P'", pure_density(psi), mu});
    const Theorem2Report report = theorem2_check(model, psi, "P", "P'", 1e-6);
    CHECK(report.l_q == 1.0);
    CHECK(report.l_c == Approx(1.0).margin(1e-9));
    CHECK(report.tv == Approx(0.0).margin(1e-12));
    CHECK(report.antecedent);
    CHECK(report.implication_holds);
    CHECK(report.pair_is_max_epistemic_2);
  }
  SECTION("procedures at total-variation distance 0.3") {
    // shift 30% of the mass to a point outside the cap
    const std::size_t far = snap_to_grid(*space, Eigen::Vector3d(-bloch_of(psi)));
    const EpistemicState shifted =
        mixture({{0.7, mu}, {0.3, point_mass(space, far)}});
    OntologicalModel model(space);
    model.add_preparation({"P", pure_density(psi), mu});
    model.add_preparation({"P'", pure_density(psi), shifted});
    const Theorem2Report report = theorem2_check(model, psi, "P", "P'", 1e-6);
    CHECK(report.tv == Approx(0.3).margin(1e-9));
    CHECK(report.l_c == Approx(0.7).margin(1e-9));
    CHECK_FALSE(report.antecedent);
    CHECK(report.implication_holds);  // vacuously
    CHECK_FALSE(report.pair_is_max_epistemic_2);
  }
  SECTION("mismatched procedures are rejected") {
    OntologicalModel model(space);
    model.add_preparation({"P", pure_density(psi), mu});
    model.add_preparation({"Q", pure_density(ket0()), ks_epistemic(space, ket0())});
    CHECK_THROWS_AS(theorem2_check(model, psi, "P", "Q", 1e-6),
                    std::invalid_argument);
  }
}

TEST_CASE("total variation complements classical fidelity") {
  const auto space = fibonacci_sphere(2000);
  Rng rng(314);
  for (int k = 0; k < 30; ++k) {
    std::vector<double> d1(space->size()), d2(space->size());
    for (auto* d : {&d1, &d2}) {
      long double sum = 0.0L;
      for (std::size_t i = 0; i < d->size(); ++i) {
        (*d)[i] = rng.uniform(0.0, 1.0);
        sum += space->weight(i) * (*d)[i];
      }
      for (double& v : *d) v = static_cast<double>(v / sum);
    }
    const EpistemicState a(space, d1), b(space, d2);
    const double tv = total_variation(a, b);
    const double lc = classical_fidelity(a, b);
    CHECK(tv == Approx(1.0 - lc).margin(1e-12));
  }
}

TEST_CASE("near-identical densities give a near-one fidelity") {
  const auto space = fibonacci_sphere(2000);
  const QuantumState psi = state_from_angles(0.9, 1.4);
  const EpistemicState mu = ks_epistemic(space, psi);
  const std::size_t far = snap_to_grid(*space, Eigen::Vector3d(-bloch_of(psi)));
  const EpistemicState close =
      mixture({{1.0 - 1e-9, mu}, {1e-9, point_mass(space, far)}});
  const double lc = classical_fidelity(mu, close);
  const double tv = total_variation(mu, close);
  CHECK(lc >= 1.0 - 2e-9);
  CHECK(tv == Approx(1.0 - lc).margin(1e-13));
  CHECK(tv <= 2e-9);
}

TEST_CASE("theorem 3 pattern enumeration") {
  const FeasibilityCertificate cert =
      theorem3_enumerate(ContextualityMode::BothNoncontextual);
  CHECK(cert.mode == ContextualityMode::BothNoncontextual);
  CHECK_FALSE(cert.feasible);
  REQUIRE(cert.per_pattern_sums.size() == 8);

  std::vector<double> plus_sums;
  for (const auto& row : cert.per_pattern_sums) {
    plus_sums.push_back(row.plus_sum_over_nu);
    CHECK(row.plus_sum_over_nu + row.minus_sum_over_nu == Approx(6.0));
    CHECK(row.plus_sum_over_nu != cert.required_over_nu);
    CHECK(row.minus_sum_over_nu != cert.required_over_nu);
    const bool even_multiple =
        row.plus_sum_over_nu == 0.0 || row.plus_sum_over_nu == 2.0 ||
        row.plus_sum_over_nu == 4.0 || row.plus_sum_over_nu == 6.0;
    CHECK(even_multiple);
  }
  // brute-force oracle: the multiset of sums of three values from {0, 2}
  std::sort(plus_sums.begin(), plus_sums.end());
  CHECK(plus_sums == oracle::three_term_even_sums());
}

TEST_CASE("theorem 3 relaxation with contextual pure states") {
  const FeasibilityCertificate cert =
      theorem3_enumerate(ContextualityMode::PureContextualAllowed);
  CHECK(cert.feasible);
  REQUIRE(cert.witness_model.has_value());
  CHECK(cert.witness_residual <= 1e-9);
  const double tv =
      total_variation(cert.witness_model->preparation("P1:A1+").epistemic,
                      cert.witness_model->preparation("P4:A1+").epistemic);
  CHECK(tv == Approx(0.5).margin(1e-12));
}

TEST_CASE("theorem 3 relaxation with contextual mixed states") {
  const FeasibilityCertificate cert =
      theorem3_enumerate(ContextualityMode::MixedContextualAllowed);
  CHECK(cert.feasible);
  REQUIRE(cert.witness_model.has_value());
  const auto& w = *cert.witness_model;
  CHECK(total_variation(w.preparation("z+").epistemic,
                        w.preparation("z+alt").epistemic) == 0.0);
  CHECK(total_variation(w.preparation("I2:z").epistemic,
                        w.preparation("I2:x").epistemic) > 0.1);
}

TEST_CASE("feasibility solver agrees with the enumeration") {
  for (const auto mode : {ContextualityMode::BothNoncontextual,
                          ContextualityMode::PureContextualAllowed,
                          ContextualityMode::MixedContextualAllowed}) {
    const auto by_table = theorem3_enumerate(mode);
    for (const std::size_t n : {std::size_t{1}, std::size_t{6}}) {
      const auto by_lp = theorem3_lp(n, mode);
      CHECK(by_lp.feasible == by_table.feasible);
      if (by_lp.feasible) CHECK(by_lp.lp_residual <= 1e-9);
    }
  }
}

TEST_CASE("feasibility solver honours its cap") {
  CHECK_THROWS_AS(theorem3_lp(100, ContextualityMode::BothNoncontextual),
                  std::invalid_argument);
  CHECK_THROWS_AS(theorem3_lp(0, ContextualityMode::BothNoncontextual),
                  std::invalid_argument);
}

TEST_CASE("theorem 1 conclusion follows the first maximal-epistemicity verdict") {
  const auto model = build_ks(10000, 8, 23);
  const auto pairs = sample_pairs(model, {60, 23, 0.05, true});
  const auto verdict = is_max_epistemic_1(model, pairs, 3e-2);
  const auto report = theorem1_check(model, ket0(), ket_plus(), 3e-2);
  if (verdict.verdict == TriState::Yes) CHECK(report.conclusion);
}
