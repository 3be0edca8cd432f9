#pragma once

// Overlap quantities connecting the Hilbert-space and ontic-space pictures:
// classical fidelity between epistemic states, the degree of epistemicity,
// and the bundled per-pair overlap record.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ontoscope/ontic.hpp"
#include "ontoscope/quantum.hpp"

namespace ontoscope {

struct OverlapRecord {
  std::pair<QuantumState, QuantumState> state_pair;
  double l_q = 0.0;      // quantum overlap, 1 - pure-state trace distance
  double l_c = 0.0;      // classical fidelity of the epistemic states
  double deficit = 0.0;  // l_q - l_c, reported signed
};

struct EpistemicityDegree {
  double value = 0.0;
  std::pair<QuantumState, QuantumState> pair;
};

// sum_i w_i min(a_i, b_i): 1 for identical densities, 0 for disjoint supports,
// symmetric in its arguments.
inline double classical_fidelity(const EpistemicState& a,
                                 const EpistemicState& b) {
  detail::require_same_space(a.space(), b.space(), "classical_fidelity");
  const auto& w = a.space()->weights();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < w.size(); ++i)
    acc += static_cast<long double>(w[i]) * std::min(a.density(i), b.density(i));
  return static_cast<double>(acc);
}

namespace detail {

inline const PreparationProcedure& preparation_for_state(
    const OntologicalModel& model, const QuantumState& psi) {
  const auto* prep = model.find_preparation_for(pure_density(psi));
  if (!prep)
    throw std::invalid_argument(
        "model has no registered preparation for the requested pure state");
  return *prep;
}

}  // namespace detail

// f(psi, phi): the integral of mu_psi over the support of mu_phi, divided by
// the squared state overlap. Equals 1 on every pair exactly when the model's
// epistemic overlaps fully account for the quantum ones.
inline EpistemicityDegree degree_of_epistemicity(const OntologicalModel& model,
                                                 const QuantumState& psi,
                                                 const QuantumState& phi,
                                                 double support_eps = kDefaultSupportEps) {
  const double fid = overlap_sq(psi, phi);
  if (fid < kOrthoThreshold)
    throw std::domain_error(
        "degree_of_epistemicity: f undefined for orthogonal states");
  const auto& prep_psi = detail::preparation_for_state(model, psi);
  const auto& prep_phi = detail::preparation_for_state(model, phi);
  const double numerator = support_integral(
      prep_psi.epistemic, support(prep_phi.epistemic, support_eps));
  return {numerator / fid, {psi, phi}};
}

// Quantum overlap, classical fidelity, and their signed difference for one
// registered state pair. A negative deficit beyond tolerance is a Born or
// discretization failure worth surfacing, so no clamping happens here.
inline OverlapRecord overlap_record(const OntologicalModel& model,
                                    const QuantumState& a,
                                    const QuantumState& b) {
  const auto& prep_a = detail::preparation_for_state(model, a);
  const auto& prep_b = detail::preparation_for_state(model, b);
  OverlapRecord rec{{a, b}, 0.0, 0.0, 0.0};
  rec.l_q = quantum_overlap(a, b);
  rec.l_c = classical_fidelity(prep_a.epistemic, prep_b.epistemic);
  rec.deficit = rec.l_q - rec.l_c;
  return rec;
}

}  // namespace ontoscope
