#pragma once

// Sample-based classification of a concrete model: psi-ontic vs
// psi-epistemic, the two maximal-epistemicity verdicts, preparation
// (non)contextuality at pure and mixed level, and outcome determinism.
//
// Universal quantification over all state pairs is not finitely checkable,
// so verdicts are sampled: Yes/No verdicts carry the worst pair observed,
// and a run whose pair budget is too small returns Undetermined. A fixed
// seed fully determines the sampled pairs and hence the verdicts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ontoscope/ontic.hpp"
#include "ontoscope/overlap.hpp"
#include "ontoscope/quantum.hpp"
#include "ontoscope/random.hpp"

namespace ontoscope {

enum class TriState { Yes, No, Undetermined };
enum class OnticVerdict { PsiOntic, PsiEpistemic };
enum class ContextLevel { PureState, MixedState };

inline const char* to_string(TriState t) {
  switch (t) {
    case TriState::Yes: return "yes";
    case TriState::No: return "no";
    default: return "undetermined";
  }
}
inline const char* to_string(OnticVerdict v) {
  return v == OnticVerdict::PsiOntic ? "psi-ontic" : "psi-epistemic";
}
inline const char* to_string(ContextLevel l) {
  return l == ContextLevel::PureState ? "pure-state" : "mixed-state";
}

// One sampled pair of registered pure-state preparations.
struct SampledPair {
  std::string prep1;
  std::string prep2;
  QuantumState state1;
  QuantumState state2;
  double fidelity = 0.0;    // |<s1|s2>|^2
  bool same_state = false;  // two procedures for one state
};

struct SamplerOptions {
  std::size_t pair_budget = 200;
  std::uint64_t seed = 42;
  // Pairs below this squared overlap are skipped: the degree of epistemicity
  // is a ratio with the overlap in the denominator and is ill-conditioned
  // near orthogonality.
  double min_fidelity = 0.05;
  bool include_same_state = true;
};

// All unordered pairs of pure registered preparations above the fidelity
// floor, shuffled by the seed and truncated to the budget.
inline std::vector<SampledPair> sample_pairs(const OntologicalModel& model,
                                             const SamplerOptions& opt = {}) {
  struct PureEntry {
    const PreparationProcedure* prep;
    QuantumState state;
  };
  std::vector<PureEntry> pure;
  for (const auto& p : model.preparations()) {
    if (auto psi = pure_state_of(p.target)) pure.push_back({&p, *psi});
  }
  std::vector<SampledPair> pairs;
  for (std::size_t i = 0; i < pure.size(); ++i) {
    for (std::size_t j = i + 1; j < pure.size(); ++j) {
      const double fid = overlap_sq(pure[i].state, pure[j].state);
      if (fid < opt.min_fidelity) continue;
      const bool same = fid > 1.0 - 1e-9;
      if (same && !opt.include_same_state) continue;
      pairs.push_back({pure[i].prep->label, pure[j].prep->label, pure[i].state,
                       pure[j].state, fid, same});
    }
  }
  Rng rng(opt.seed);
  std::shuffle(pairs.begin(), pairs.end(), rng.engine());
  if (pairs.size() > opt.pair_budget)
    pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(opt.pair_budget),
                pairs.end());
  return pairs;
}

struct PairWitness {
  std::string prep1;
  std::string prep2;
  double value = 0.0;      // the metric at the worst pair
  double deviation = 0.0;  // its distance from the verdict target
};

struct EpistemicityVerdict {
  TriState verdict = TriState::Undetermined;
  PairWitness worst;
  std::size_t pairs_checked = 0;
  double tolerance = 0.0;
};

struct ModelVerdict {
  OnticVerdict ontic_or_epistemic = OnticVerdict::PsiOntic;
  EpistemicityVerdict max_psi_epistemic_1;
  EpistemicityVerdict max_psi_epistemic_2;
  std::size_t sampled_pairs = 0;
  double tolerance = 0.0;
};

namespace detail {

inline const EpistemicState& epistemic_of(const OntologicalModel& model,
                                          const std::string& label) {
  return model.preparation(label).epistemic;
}

}  // namespace detail

// PsiOntic iff every sampled pair of *distinct* states has (numerically)
// vanishing classical fidelity; one overlapping pair makes it psi-epistemic.
inline OnticVerdict classify_ontic(const OntologicalModel& model,
                                   const std::vector<SampledPair>& pairs,
                                   double tol) {
  std::size_t considered = 0;
  OnticVerdict verdict = OnticVerdict::PsiOntic;
  for (const auto& pair : pairs) {
    if (pair.same_state) continue;
    ++considered;
    const double lc = classical_fidelity(detail::epistemic_of(model, pair.prep1),
                                         detail::epistemic_of(model, pair.prep2));
    if (lc > tol) verdict = OnticVerdict::PsiEpistemic;
  }
  if (considered == 0)
    throw std::invalid_argument("classify_ontic: no distinct-state pairs sampled");
  return verdict;
}

// First maximal-epistemicity reading: the support integral of mu_psi over
// the support of mu_phi equals the squared state overlap on every pair,
// i.e. |f - 1| <= tol both ways.
inline EpistemicityVerdict is_max_epistemic_1(const OntologicalModel& model,
                                              const std::vector<SampledPair>& pairs,
                                              double tol,
                                              std::size_t min_pairs = 10) {
  EpistemicityVerdict out;
  out.tolerance = tol;
  for (const auto& pair : pairs) {
    const auto& mu1 = detail::epistemic_of(model, pair.prep1);
    const auto& mu2 = detail::epistemic_of(model, pair.prep2);
    if (pair.fidelity < kOrthoThreshold)
      throw std::domain_error("is_max_epistemic_1: orthogonal pair sampled");
    for (int dir = 0; dir < 2; ++dir) {
      const auto& mu_psi = dir == 0 ? mu1 : mu2;
      const auto& mu_phi = dir == 0 ? mu2 : mu1;
      const double f =
          support_integral(mu_psi, support(mu_phi)) / pair.fidelity;
      const double dev = std::abs(f - 1.0);
      if (dev >= out.worst.deviation) {
        out.worst = {pair.prep1, pair.prep2, f, dev};
      }
    }
    ++out.pairs_checked;
  }
  if (out.pairs_checked < min_pairs) return out;  // Undetermined
  out.verdict = out.worst.deviation <= tol ? TriState::Yes : TriState::No;
  return out;
}

// Second reading: classical fidelity equals quantum overlap, |L_Q - L_C| <=
// tol on every pair.
inline EpistemicityVerdict is_max_epistemic_2(const OntologicalModel& model,
                                              const std::vector<SampledPair>& pairs,
                                              double tol,
                                              std::size_t min_pairs = 10) {
  EpistemicityVerdict out;
  out.tolerance = tol;
  for (const auto& pair : pairs) {
    const double lq = quantum_overlap(pair.state1, pair.state2);
    const double lc = classical_fidelity(detail::epistemic_of(model, pair.prep1),
                                         detail::epistemic_of(model, pair.prep2));
    const double dev = std::abs(lq - lc);
    if (dev >= out.worst.deviation) out.worst = {pair.prep1, pair.prep2, lc, dev};
    ++out.pairs_checked;
  }
  if (out.pairs_checked < min_pairs) return out;  // Undetermined
  out.verdict = out.worst.deviation <= tol ? TriState::Yes : TriState::No;
  return out;
}

struct ContextualityVerdict {
  ContextLevel level = ContextLevel::PureState;
  bool noncontextual = true;
  std::string state;  // description of the shared target
  std::string proc1;
  std::string proc2;
  double distance = 0.0;  // worst total-variation distance
  std::size_t procedure_pairs = 0;
  double tolerance = 0.0;
};

// Noncontextual iff the epistemic states of every pair of procedures
// preparing rho agree in total variation within tol. With fewer than two
// procedures the check is vacuous and passes with distance zero.
inline ContextualityVerdict check_preparation_noncontextuality(
    const OntologicalModel& model, const DensityOperator& rho,
    const std::vector<std::string>& proc_labels, double tol,
    const std::string& state_name = "") {
  ContextualityVerdict out;
  out.level = rho.is_pure() ? ContextLevel::PureState : ContextLevel::MixedState;
  out.state = state_name;
  out.tolerance = tol;
  std::vector<const PreparationProcedure*> procs;
  for (const auto& label : proc_labels) {
    const auto& p = model.preparation(label);
    if ((p.target.matrix() - rho.matrix()).cwiseAbs().maxCoeff() > kRenormLimit)
      throw std::invalid_argument("check_preparation_noncontextuality: procedure '" +
                                  label + "' does not prepare the given state");
    procs.push_back(&p);
  }
  for (std::size_t i = 0; i < procs.size(); ++i) {
    for (std::size_t j = i + 1; j < procs.size(); ++j) {
      const double tv = total_variation(procs[i]->epistemic, procs[j]->epistemic);
      ++out.procedure_pairs;
      if (tv >= out.distance) {
        out.distance = tv;
        out.proc1 = procs[i]->label;
        out.proc2 = procs[j]->label;
      }
    }
  }
  out.noncontextual = out.distance <= tol;
  return out;
}

struct DeterminismReport {
  bool deterministic = false;
  double fraction = 0.0;  // response entries within tol of {0, 1}
  std::size_t entries = 0;
  double tolerance = 0.0;
};

// True iff every response value is within tol of 0 or 1 on the union of the
// supports of the registered preparations.
inline DeterminismReport check_outcome_determinism(const OntologicalModel& model,
                                                   double tol = 1e-6) {
  if (model.measurements().empty())
    throw std::invalid_argument("check_outcome_determinism: model has no measurements");
  if (model.preparations().empty())
    throw std::invalid_argument("check_outcome_determinism: model has no preparations");
  std::set<std::size_t> support_union;
  for (const auto& p : model.preparations())
    for (std::size_t i : support(p.epistemic)) support_union.insert(i);
  DeterminismReport out;
  out.tolerance = tol;
  std::size_t good = 0;
  for (const auto& m : model.measurements()) {
    for (std::size_t i : support_union) {
      for (std::size_t k = 0; k < m.response.outcomes().size(); ++k) {
        const double v = m.response.value(i, k);
        ++out.entries;
        if (std::min(v, 1.0 - v) <= tol) ++good;
      }
    }
  }
  out.fraction = out.entries ? double(good) / double(out.entries) : 0.0;
  out.deterministic = good == out.entries;
  return out;
}

// ---------------------------------------------------------------------------
// Whole-model classification

struct ClassifyOptions {
  SamplerOptions sampler;
  // Resolved as born_tolerance(N) when unset.
  std::optional<double> tolerance;
  // Degree-of-epistemicity tolerance; the ratio amplifies quadrature error,
  // so it defaults to 1.5x the pair tolerance.
  std::optional<double> f_tolerance;
  std::size_t min_pairs = 10;
  double determinism_tol = 1e-6;
};

struct ClassificationReport {
  ModelVerdict verdict;
  ContextualityVerdict pure_pnc;
  ContextualityVerdict mixed_pnc;
  std::size_t pure_groups = 0;   // pure targets with >= 2 procedures
  std::size_t mixed_groups = 0;  // mixed targets with >= 2 procedures
  DeterminismReport determinism;
};

// Groups registered procedures by shared target and reports the worst
// contextuality witness at the requested purity level.
inline ContextualityVerdict noncontextuality_over_groups(
    const OntologicalModel& model, bool pure_level, double tol,
    std::size_t* groups_out = nullptr) {
  ContextualityVerdict out;
  out.level = pure_level ? ContextLevel::PureState : ContextLevel::MixedState;
  out.tolerance = tol;
  std::vector<bool> grouped(model.preparations().size(), false);
  std::size_t groups = 0;
  for (std::size_t i = 0; i < model.preparations().size(); ++i) {
    if (grouped[i]) continue;
    const auto& base = model.preparations()[i];
    if (base.target.is_pure() != pure_level) continue;
    std::vector<std::string> labels = {base.label};
    for (std::size_t j = i + 1; j < model.preparations().size(); ++j) {
      if (grouped[j]) continue;
      const auto& other = model.preparations()[j];
      if (other.target.dim() == base.target.dim() &&
          (other.target.matrix() - base.target.matrix()).cwiseAbs().maxCoeff() <=
              kRenormLimit) {
        labels.push_back(other.label);
        grouped[j] = true;
      }
    }
    if (labels.size() < 2) continue;
    ++groups;
    ContextualityVerdict verdict = check_preparation_noncontextuality(
        model, base.target, labels, tol, base.label);
    if (verdict.distance >= out.distance) {
      out.distance = verdict.distance;
      out.state = verdict.state;
      out.proc1 = verdict.proc1;
      out.proc2 = verdict.proc2;
    }
    out.procedure_pairs += verdict.procedure_pairs;
  }
  out.noncontextual = out.distance <= tol;
  if (groups_out) *groups_out = groups;
  return out;
}

inline ClassificationReport classify_model(const OntologicalModel& model,
                                           const ClassifyOptions& opt = {}) {
  const double tol =
      opt.tolerance.value_or(born_tolerance(model.space()->size()));
  const double f_tol = opt.f_tolerance.value_or(1.5 * tol);
  const auto pairs = sample_pairs(model, opt.sampler);

  ClassificationReport report;
  report.verdict.tolerance = tol;
  report.verdict.sampled_pairs = pairs.size();
  report.verdict.ontic_or_epistemic = classify_ontic(model, pairs, tol);
  report.verdict.max_psi_epistemic_1 =
      is_max_epistemic_1(model, pairs, f_tol, opt.min_pairs);
  report.verdict.max_psi_epistemic_2 =
      is_max_epistemic_2(model, pairs, tol, opt.min_pairs);
  report.pure_pnc =
      noncontextuality_over_groups(model, true, tol, &report.pure_groups);
  report.mixed_pnc =
      noncontextuality_over_groups(model, false, tol, &report.mixed_groups);
  report.determinism = check_outcome_determinism(model, opt.determinism_tol);
  return report;
}

}  // namespace ontoscope
