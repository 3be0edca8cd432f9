#pragma once

// Constructors for the concrete ontological models the toolkit ships with:
//
//  - build_ks:  the hemisphere/cosine qubit model. Density for a pure state
//    with Bloch vector s is (1/pi) max(0, s . lambda); projective responses
//    are hemisphere indicators with the equator assigned to the positive
//    outcome. Reproduces qubit statistics in the continuum limit.
//  - build_bb:  point-mass epistemic states at grid points, Born-weight
//    responses. The textbook state-as-reality reference model.
//  - build_theorem3_witness: a six-point abstract model whose five
//    maximally-mixed preparations share one density while the pure-state
//    densities are context dependent.
//  - build_truncated_epistemic: a deliberately damaged copy of a base model
//    for negative tests; zeroes part of one epistemic state and renormalizes.

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ontoscope/ontic.hpp"
#include "ontoscope/quantum.hpp"
#include "ontoscope/random.hpp"

namespace ontoscope {

enum class ZooKind { KochenSpecker, BeltramettiBugajski, Theorem3Witness, TruncatedEpistemic };

struct ZooModelSpec {
  ZooKind kind = ZooKind::KochenSpecker;
  std::size_t grid_size = 20000;
  std::uint64_t seed = 42;
};

inline QuantumState orthogonal_qubit(const QuantumState& psi) {
  return state_from_bloch(Eigen::Vector3d(-bloch_of(psi)));
}

// Named deterministic states (z, x, y bases and the two non-z trine
// eigenstate pairs) followed by `n_random` Haar states from the seed.
inline std::vector<std::pair<std::string, QuantumState>> standard_qubit_states(
    std::size_t n_random, std::uint64_t seed) {
  std::vector<std::pair<std::string, QuantumState>> out = {
      {"z+", ket0()},      {"z-", ket1()},
      {"x+", ket_plus()},  {"x-", ket_minus()},
      {"y+", state_from_bloch({0.0, 1.0, 0.0})},
      {"y-", state_from_bloch({0.0, -1.0, 0.0})},
  };
  const auto trine = trine_observables();
  for (std::size_t t = 1; t < 3; ++t) {  // trine 0 is the z pair already
    out.emplace_back("trine" + std::to_string(t + 1) + "+",
                     eigenstate_of(trine[t], true));
    out.emplace_back("trine" + std::to_string(t + 1) + "-",
                     eigenstate_of(trine[t], false));
  }
  Rng rng(seed);
  for (std::size_t k = 0; k < n_random; ++k) {
    std::string label = "haar" + std::to_string(k);
    out.emplace_back(std::move(label), rng.haar_qubit());
  }
  return out;
}

// Exactly n Haar-random states, no named ones.
inline std::vector<std::pair<std::string, QuantumState>> haar_qubit_states(
    std::size_t n, std::uint64_t seed) {
  std::vector<std::pair<std::string, QuantumState>> out;
  Rng rng(seed);
  for (std::size_t k = 0; k < n; ++k)
    out.emplace_back("haar" + std::to_string(k), rng.haar_qubit());
  return out;
}

// ---------------------------------------------------------------------------
// Kochen-Specker qubit model

// Raw discretized density (1/pi) max(0, s . lambda), before renormalization.
inline std::vector<double> ks_density_raw(const OnticSpace& space,
                                          const Eigen::Vector3d& bloch) {
  std::vector<double> d(space.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = std::max(0.0, bloch.dot(space.point(i))) / M_PI;
  return d;
}

inline EpistemicState ks_epistemic(const SpacePtr& space,
                                   const QuantumState& psi) {
  std::vector<double> d = ks_density_raw(*space, bloch_of(psi));
  long double norm = 0.0L;
  for (std::size_t i = 0; i < d.size(); ++i)
    norm += static_cast<long double>(space->weight(i)) * d[i];
  for (double& v : d) v = static_cast<double>(v / norm);
  return EpistemicState(space, std::move(d));
}

// Hemisphere indicator response for the projector pair of psi; the equator
// lambda . s = 0 goes to the positive outcome so grids are deterministic.
inline Measurement ks_projective_measurement(const SpacePtr& space,
                                             const std::string& label,
                                             const QuantumState& psi) {
  const Eigen::Vector3d s = bloch_of(psi);
  std::vector<std::vector<double>> table(space->size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const bool plus = s.dot(space->point(i)) >= 0.0;
    table[i] = plus ? std::vector<double>{1.0, 0.0} : std::vector<double>{0.0, 1.0};
  }
  std::vector<Effect> effects = {projector_effect(psi),
                                 projector_effect(orthogonal_qubit(psi))};
  return Measurement(label, std::move(effects),
                     ResponseFunction(space, {"+", "-"}, std::move(table)));
}

inline void register_ks_state(OntologicalModel& model, const std::string& label,
                              const QuantumState& psi) {
  model.add_preparation({label, pure_density(psi), ks_epistemic(model.space(), psi)});
  model.add_measurement(ks_projective_measurement(model.space(), "proj:" + label, psi));
}

// Registers the maximally mixed state prepared as an equal mixture of two
// already-registered orthogonal pure preparations.
inline void register_mixed_procedure(OntologicalModel& model,
                                     const std::string& label,
                                     const std::string& plus_label,
                                     const std::string& minus_label) {
  const auto& plus = model.preparation(plus_label);
  const auto& minus = model.preparation(minus_label);
  EpistemicState mixed = mixture({{0.5, plus.epistemic}, {0.5, minus.epistemic}});
  model.add_preparation({label, maximally_mixed(2), std::move(mixed)});
}

inline OntologicalModel build_ks(
    std::size_t grid_size,
    const std::vector<std::pair<std::string, QuantumState>>& states) {
  OntologicalModel model(fibonacci_sphere(grid_size));
  bool have_z = false, have_x = false;
  for (const auto& [label, psi] : states) {
    register_ks_state(model, label, psi);
    have_z |= label == "z-";
    have_x |= label == "x-";
  }
  if (have_z) register_mixed_procedure(model, "I2:z", "z+", "z-");
  if (have_x) register_mixed_procedure(model, "I2:x", "x+", "x-");
  return model;
}

inline OntologicalModel build_ks(std::size_t grid_size,
                                 std::size_t n_random_states = 20,
                                 std::uint64_t seed = 42) {
  return build_ks(grid_size, standard_qubit_states(n_random_states, seed));
}

// ---------------------------------------------------------------------------
// Beltrametti-Bugajski model

// Index of the grid point closest to the given Bloch vector.
inline std::size_t snap_to_grid(const OnticSpace& space,
                                const Eigen::Vector3d& bloch) {
  std::size_t best = 0;
  double best_dot = -2.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const double d = bloch.dot(space.point(i));
    if (d > best_dot) {
      best_dot = d;
      best = i;
    }
  }
  return best;
}

// Point mass at one grid point, stored as density 1/weight so the
// normalization invariant holds without special cases.
inline EpistemicState point_mass(const SpacePtr& space, std::size_t index) {
  std::vector<double> d(space->size(), 0.0);
  d.at(index) = 1.0 / space->weight(index);
  return EpistemicState(space, std::move(d));
}

// Born-weight response for the projector pair of phi: at ontic point lambda
// (itself a pure state) the positive outcome fires with |<phi|lambda>|^2.
inline Measurement bb_projective_measurement(const SpacePtr& space,
                                             const std::string& label,
                                             const QuantumState& phi) {
  const Eigen::Vector3d s = bloch_of(phi);
  std::vector<std::vector<double>> table(space->size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double p = 0.5 * (1.0 + s.dot(space->point(i)));
    table[i] = {p, 1.0 - p};
  }
  std::vector<Effect> effects = {projector_effect(phi),
                                 projector_effect(orthogonal_qubit(phi))};
  return Measurement(label, std::move(effects),
                     ResponseFunction(space, {"+", "-"}, std::move(table)));
}

inline OntologicalModel build_bb(
    std::size_t grid_size,
    const std::vector<std::pair<std::string, QuantumState>>& states) {
  OntologicalModel model(fibonacci_sphere(grid_size));
  std::set<std::size_t> taken;
  for (const auto& [label, psi] : states) {
    const std::size_t idx = snap_to_grid(*model.space(), bloch_of(psi));
    if (!taken.insert(idx).second)
      throw std::invalid_argument("build_bb: states '" + label +
                                  "' and an earlier one snap to the same grid point");
    // The snapped state is the registered target, so the point-mass response
    // reproduces its Born statistics exactly.
    const QuantumState snapped = state_from_bloch(model.space()->point(idx));
    model.add_preparation({label, pure_density(snapped), point_mass(model.space(), idx)});
    model.add_measurement(bb_projective_measurement(model.space(), "proj:" + label, snapped));
  }
  return model;
}

inline OntologicalModel build_bb(std::size_t grid_size,
                                 std::size_t n_random_states = 8,
                                 std::uint64_t seed = 42) {
  return build_bb(grid_size, standard_qubit_states(n_random_states, seed));
}

// ---------------------------------------------------------------------------
// Six-point witness model

// Five procedures prepare I/2 over a six-point abstract space. The three
// basis contexts split the space into complementary uniform triples, the two
// sum contexts spread every pure state uniformly, so the mixed density is
// procedure independent while the pure densities are not.
inline OntologicalModel build_theorem3_witness() {
  const std::size_t n = 6;
  SpacePtr space = OnticSpace::abstract(std::vector<double>(n, 1.0));

  const auto uniform_over = [&](const std::vector<std::size_t>& pts) {
    std::vector<double> d(n, 0.0);
    for (std::size_t i : pts) d[i] = 1.0 / 3.0;
    return EpistemicState(space, std::move(d));
  };
  const EpistemicState spread(space, std::vector<double>(n, 1.0 / 6.0));

  // Three distinct complementary-triple partitions, one per context.
  const std::vector<std::vector<std::size_t>> plus_sets = {
      {0, 1, 2}, {1, 2, 3}, {2, 3, 4}};
  const std::vector<std::vector<std::size_t>> minus_sets = {
      {3, 4, 5}, {4, 5, 0}, {5, 0, 1}};

  OntologicalModel model(space);
  const auto trine = trine_observables();
  std::vector<EpistemicState> mixed;
  for (std::size_t t = 0; t < 3; ++t) {
    const auto [plus_proj, minus_proj] = projectors_of(trine[t]);
    const DensityOperator plus_target(plus_proj.matrix());
    const DensityOperator minus_target(minus_proj.matrix());
    const std::string at = "A" + std::to_string(t + 1);
    model.add_preparation({"P" + std::to_string(t + 1) + ":" + at + "+",
                           plus_target, uniform_over(plus_sets[t])});
    model.add_preparation({"P" + std::to_string(t + 1) + ":" + at + "-",
                           minus_target, uniform_over(minus_sets[t])});
    model.add_preparation({"P4:" + at + "+", plus_target, spread});
    model.add_preparation({"P5:" + at + "-", minus_target, spread});
    mixed.push_back(mixture({{0.5, uniform_over(plus_sets[t])},
                             {0.5, uniform_over(minus_sets[t])}}));
  }
  for (std::size_t t = 0; t < 3; ++t)
    model.add_preparation(
        {"P" + std::to_string(t + 1) + ":I2", maximally_mixed(2), mixed[t]});
  model.add_preparation({"P4:I2", maximally_mixed(2),
                         mixture({{1.0 / 3.0, spread}, {1.0 / 3.0, spread}, {1.0 / 3.0, spread}})});
  model.add_preparation({"P5:I2", maximally_mixed(2),
                         mixture({{1.0 / 3.0, spread}, {1.0 / 3.0, spread}, {1.0 / 3.0, spread}})});
  return model;
}

// ---------------------------------------------------------------------------
// Truncated-epistemic negative control

// Builds the model a ZooModelSpec describes, with default state counts
// (sphere kinds enforce the N >= 100 grid minimum; the witness space is
// fixed at six points). The truncated kind damages the |+> state over the
// |0> support at fraction one half.
inline OntologicalModel build_zoo(const ZooModelSpec& spec);

// Copy of `base` with mu_psi zeroed on the leading `fraction` of mu_phi's
// support and renormalized. The result is no longer Born valid (mass was
// removed from a Born-relevant region) and its degree of epistemicity on the
// pair drops below 1.
inline OntologicalModel build_truncated_epistemic(const OntologicalModel& base,
                                                  const QuantumState& psi,
                                                  const QuantumState& phi,
                                                  double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("build_truncated_epistemic: fraction must be in (0, 1)");
  const auto* prep_psi = base.find_preparation_for(pure_density(psi));
  const auto* prep_phi = base.find_preparation_for(pure_density(phi));
  if (!prep_psi || !prep_phi)
    throw std::invalid_argument("build_truncated_epistemic: base model lacks the pair");

  const std::vector<std::size_t> region = support(prep_phi->epistemic);
  const std::size_t cut = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(region.size())));

  std::vector<double> d = prep_psi->epistemic.density();
  for (std::size_t j = 0; j < cut; ++j) d[region[j]] = 0.0;
  long double norm = 0.0L;
  for (std::size_t i = 0; i < d.size(); ++i)
    norm += static_cast<long double>(base.space()->weight(i)) * d[i];
  if (!(norm > 0.0L))
    throw std::invalid_argument("build_truncated_epistemic: truncation removed all mass");
  for (double& v : d) v = static_cast<double>(v / norm);

  OntologicalModel out(base.space());
  for (const auto& p : base.preparations()) {
    if (&p == prep_psi)
      out.add_preparation({p.label, p.target, EpistemicState(base.space(), d)});
    else
      out.add_preparation(p);
  }
  for (const auto& m : base.measurements()) out.add_measurement(m);
  out.notes() = base.notes();
  out.notes().push_back("truncated epistemic state '" + prep_psi->label +
                        "' over support of '" + prep_phi->label +
                        "'; Born validity intentionally broken");
  return out;
}

inline OntologicalModel build_zoo(const ZooModelSpec& spec) {
  switch (spec.kind) {
    case ZooKind::KochenSpecker:
      return build_ks(spec.grid_size, 20, spec.seed);
    case ZooKind::BeltramettiBugajski:
      return build_bb(spec.grid_size, haar_qubit_states(8, spec.seed));
    case ZooKind::Theorem3Witness:
      return build_theorem3_witness();
    case ZooKind::TruncatedEpistemic: {
      const OntologicalModel base = build_ks(spec.grid_size, 0, spec.seed);
      return build_truncated_epistemic(base, ket_plus(), ket0(), 0.5);
    }
  }
  throw std::invalid_argument("build_zoo: unknown kind");
}

}  // namespace ontoscope
