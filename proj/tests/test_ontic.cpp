#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ontoscope/ontic.hpp"
#include "ontoscope/random.hpp"
#include "ontoscope/zoo.hpp"
#include "oracles.hpp"

using namespace ontoscope;
using Catch::Approx;

TEST_CASE("fibonacci sphere measure") {
  const SpacePtr space = fibonacci_sphere(2500);
  CHECK(space->size() == 2500);
  CHECK(space->total_measure() == Approx(4.0 * M_PI).epsilon(1e-9));
  for (const auto& p : space->points())
    CHECK(p.norm() == Approx(1.0).margin(1e-12));
  CHECK_THROWS_AS(fibonacci_sphere(50), std::invalid_argument);
}

TEST_CASE("epistemic state validation") {
  const SpacePtr space = fibonacci_sphere(500);
  CHECK_THROWS_AS(EpistemicState(space, std::vector<double>(500, 1.0)),
                  std::invalid_argument);  // unnormalized
  std::vector<double> neg(500, 1.0 / (4.0 * M_PI));
  neg[3] = -neg[3];
  CHECK_THROWS_AS(EpistemicState(space, neg), std::invalid_argument);
  const EpistemicState uniform(space,
                               std::vector<double>(500, 1.0 / (4.0 * M_PI)));
  CHECK(uniform.normalization() == Approx(1.0).margin(1e-12));
}

TEST_CASE("response function validation") {
  const SpacePtr space = fibonacci_sphere(200);
  std::vector<std::vector<double>> bad(200, {0.7, 0.7});
  CHECK_THROWS_AS(ResponseFunction(space, {"+", "-"}, bad), std::invalid_argument);
  std::vector<std::vector<double>> good(200, {0.3, 0.7});
  const ResponseFunction rf(space, {"+", "-"}, good);
  CHECK(rf.outcome_index("-") == 1);
  CHECK_THROWS_AS(rf.outcome_index("?"), std::invalid_argument);
}

TEST_CASE("predicted probability on the hemisphere model") {
  const auto model = build_ks(5000, 0, 1);
  const auto& prep = model.preparation("z+");

  SECTION("own projector fires with certainty") {
    const auto& meas = model.measurement("proj:z+");
    CHECK(predicted_probability(model, prep, meas, "+") ==
          Approx(1.0).margin(1e-6));
  }
  SECTION("cross term matches the Born value within quadrature error") {
    const auto& meas = model.measurement("proj:trine2+");
    const double expected =
        born_probability(prep.target, meas.effects[0]);  // 0.25 for the trine
    CHECK(expected == Approx(0.25).margin(1e-12));
    CHECK(predicted_probability(model, prep, meas, "+") ==
          Approx(expected).margin(born_tolerance(5000)));
  }
  SECTION("two-outcome probabilities sum to the normalization") {
    const auto& meas = model.measurement("proj:x+");
    const double total = predicted_probability(model, prep, meas, "+") +
                         predicted_probability(model, prep, meas, "-");
    CHECK(total == Approx(prep.epistemic.normalization()).margin(1e-12));
  }
  SECTION("unknown outcome label") {
    CHECK_THROWS_AS(
        predicted_probability(model, prep, model.measurement("proj:z+"), "??"),
        std::invalid_argument);
  }
}

TEST_CASE("predicted probability is linear in the epistemic state") {
  const auto model = build_ks(2000, 0, 1);
  const auto& mu1 = model.preparation("z+").epistemic;
  const auto& mu2 = model.preparation("x-").epistemic;
  const auto& meas = model.measurement("proj:trine3-");
  const double w = 0.3;
  const EpistemicState mix = mixture({{w, mu1}, {1.0 - w, mu2}});
  const PreparationProcedure mixed_prep{"mix", maximally_mixed(2), mix};
  const PreparationProcedure p1{"p1", maximally_mixed(2), mu1};
  const PreparationProcedure p2{"p2", maximally_mixed(2), mu2};
  const double lhs = predicted_probability(model, mixed_prep, meas, "+");
  const double rhs = w * predicted_probability(model, p1, meas, "+") +
                     (1.0 - w) * predicted_probability(model, p2, meas, "+");
  CHECK(lhs == Approx(rhs).margin(1e-13));
}

TEST_CASE("verify_born on the hemisphere model") {
  auto model = build_ks(5000, 0, 7);
  Rng rng(5);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int k = 0; k < 20; ++k) {
    const std::string sl = "rs" + std::to_string(k);
    const std::string ml = "rm" + std::to_string(k);
    register_ks_state(model, sl, rng.haar_qubit());
    register_ks_state(model, ml, rng.haar_qubit());
    pairs.push_back({sl, "proj:" + ml});
  }
  const BornReport report = verify_born(model, pairs, born_tolerance(5000));
  CHECK(report.passed);
  CHECK(report.checks == 40);
  CHECK(report.mean_abs_deviation <= report.max_abs_deviation);
}

TEST_CASE("verify_born on snapped point-mass preparations") {
  const auto model = build_bb(5000, 6, 3);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& p : model.preparations())
    pairs.push_back({p.label, "proj:" + p.label});
  const BornReport report = verify_born(model, pairs, 1e-9);
  CHECK(report.passed);  // responses carry the exact Born weight at the mass
}

TEST_CASE("verify_born flags a corrupted density") {
  auto model = build_ks(4000, 0, 1);
  std::vector<double> scaled = model.preparation("z+").epistemic.density();
  for (double& v : scaled) v *= 1.1;
  OntologicalModel corrupted(model.space());
  corrupted.add_preparation({"z+", pure_density(ket0()),
                             EpistemicState::raw(model.space(), scaled)});
  corrupted.add_measurement(model.measurement("proj:z+"));
  const BornReport report =
      verify_born(corrupted, {{"z+", "proj:z+"}}, born_tolerance(4000));
  CHECK_FALSE(report.passed);
  CHECK(report.max_abs_deviation == Approx(0.1).margin(0.02));
}

TEST_CASE("verify_born requires registered measurements") {
  const auto model = build_ks(2000, 0, 1);
  CHECK_THROWS_AS(verify_born(model, {{"z+", "proj:nope"}}, 1e-2),
                  std::invalid_argument);
}

TEST_CASE("support of a hemisphere density is the open hemisphere") {
  const auto space = fibonacci_sphere(3000);
  const QuantumState psi = state_from_angles(1.0, 0.3);
  const Eigen::Vector3d s = bloch_of(psi);
  const EpistemicState mu = ks_epistemic(space, psi);
  const auto idx = support(mu);
  std::vector<std::size_t> hemisphere;
  for (std::size_t i = 0; i < space->size(); ++i)
    if (s.dot(space->point(i)) > 0.0) hemisphere.push_back(i);
  CHECK(idx == hemisphere);
}

TEST_CASE("support corner cases") {
  const auto space = fibonacci_sphere(500);
  const EpistemicState mass = point_mass(space, 77);
  CHECK(support(mass) == std::vector<std::size_t>{77});

  const EpistemicState uniform(space, std::vector<double>(500, 1.0 / (4.0 * M_PI)));
  CHECK(support(uniform).size() == 500);

  const EpistemicState zero = EpistemicState::raw(space, std::vector<double>(500, 0.0));
  CHECK_THROWS_AS(support(zero), std::invalid_argument);
  CHECK_THROWS_AS(support(uniform, -1.0), std::invalid_argument);
}

TEST_CASE("support_integral") {
  const auto space = fibonacci_sphere(4000);
  const QuantumState psi = state_from_angles(0.8, 0.0);
  const QuantumState phi = state_from_angles(2.0, 1.0);
  const EpistemicState mu_psi = ks_epistemic(space, psi);
  const EpistemicState mu_phi = ks_epistemic(space, phi);

  std::vector<std::size_t> all(space->size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  CHECK(support_integral(mu_psi, all) == Approx(1.0).margin(1e-12));
  CHECK(support_integral(mu_psi, {}) == 0.0);
  CHECK_THROWS_AS(support_integral(mu_psi, {space->size()}), std::out_of_range);

  // the maximal-epistemicity property of the hemisphere model
  CHECK(support_integral(mu_psi, support(mu_phi)) ==
        Approx(overlap_sq(psi, phi)).margin(2e-2));

  // support integral over a state's own support recovers the normalization
  CHECK(support_integral(mu_psi, support(mu_psi, 0.0)) ==
        Approx(1.0).margin(kDensityNormTol));
}

TEST_CASE("mixture") {
  const auto space = fibonacci_sphere(3000);
  const QuantumState chi = state_from_angles(0.5, 2.2);
  const EpistemicState mu = ks_epistemic(space, chi);
  const EpistemicState mu_perp = ks_epistemic(space, orthogonal_qubit(chi));

  SECTION("single-component identity") {
    const EpistemicState same = mixture({{1.0, mu}});
    for (std::size_t i = 0; i < space->size(); ++i)
      CHECK(same.density(i) == mu.density(i));
  }
  SECTION("antipodal caps average to the absolute-cosine density") {
    const EpistemicState mixed = mixture({{0.5, mu}, {0.5, mu_perp}});
    const Eigen::Vector3d s = bloch_of(chi);
    for (std::size_t i = 0; i < space->size(); i += 17) {
      const double analytic = std::abs(s.dot(space->point(i))) / (2.0 * M_PI);
      CHECK(mixed.density(i) == Approx(analytic).epsilon(2e-3).margin(1e-9));
    }
    CHECK(mixed.normalization() == Approx(1.0).margin(1e-12));
  }
  SECTION("raw densities average exactly") {
    const auto raw = ks_density_raw(*space, bloch_of(chi));
    const auto raw_perp = ks_density_raw(*space, Eigen::Vector3d(-bloch_of(chi)));
    const Eigen::Vector3d s = bloch_of(chi);
    for (std::size_t i = 0; i < space->size(); i += 13) {
      const double analytic = std::abs(s.dot(space->point(i))) / (2.0 * M_PI);
      CHECK(0.5 * (raw[i] + raw_perp[i]) == Approx(analytic).margin(1e-15));
    }
  }
  SECTION("bad weight sums are rejected") {
    CHECK_THROWS_AS(mixture({{0.5, mu}, {0.6, mu_perp}}), std::invalid_argument);
    CHECK_THROWS_AS(mixture({{-0.1, mu}, {1.1, mu_perp}}), std::invalid_argument);
  }
}

TEST_CASE("total variation between the mixed decompositions") {
  const auto model = build_ks(20000, 0, 1);
  const double tv = total_variation(model.preparation("I2:z").epistemic,
                                    model.preparation("I2:x").epistemic);
  // oracle: product-grid quadrature of the half absolute difference
  const double expected = oracle::ks_mixed_tv(oracle::product_grid(300, 300));
  CHECK(tv == Approx(expected).margin(5e-3));
  CHECK(tv > 0.1);
}

TEST_CASE("spaces do not mix") {
  const auto a = fibonacci_sphere(500);
  const auto b = fibonacci_sphere(500);
  const EpistemicState mu_a(a, std::vector<double>(500, 1.0 / (4.0 * M_PI)));
  const EpistemicState mu_b(b, std::vector<double>(500, 1.0 / (4.0 * M_PI)));
  CHECK_THROWS_AS(mixture({{0.5, mu_a}, {0.5, mu_b}}), std::invalid_argument);
  CHECK_THROWS_AS(total_variation(mu_a, mu_b), std::invalid_argument);
}
