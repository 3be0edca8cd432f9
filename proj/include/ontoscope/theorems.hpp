#pragma once

// Mechanized checks of the toolkit's three structural theorems.
//
// Theorem 1: in a model whose maximally mixed preparations share one
//   density, the four integrals of a basis pair's epistemic states over the
//   other basis pair's supports sum to 2, forcing every degree of
//   epistemicity to 1.
// Theorem 2: if classical fidelity between two procedures preparing the same
//   pure state is 1, the two densities agree (their total-variation distance
//   vanishes), since TV = 1 - L_C for normalized densities.
// Theorem 3: requiring one shared density both for the five maximally mixed
//   procedures and for every pure state is infeasible. With one context's
//   disjointness, each of the eight sign patterns forces the three positive
//   densities to sum to an even multiple of the shared density, never the
//   required 3x. Relaxing either level restores feasibility, certified by an
//   explicit witness model.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ontoscope/classify.hpp"
#include "ontoscope/ontic.hpp"
#include "ontoscope/overlap.hpp"
#include "ontoscope/quantum.hpp"
#include "ontoscope/simplex.hpp"
#include "ontoscope/zoo.hpp"

namespace ontoscope {

// ---------------------------------------------------------------------------
// Theorem 1

struct Theorem1Report {
  // the two orthogonal bases the check ran on
  std::pair<QuantumState, QuantumState> chi_basis;
  std::pair<QuantumState, QuantumState> eta_basis;
  // chi over supp(eta), chi over supp(eta_perp), chi_perp over supp(eta),
  // chi_perp over supp(eta_perp).
  std::array<double, 4> support_integrals{};
  double support_sum = 0.0;  // target 2 under mixed-level noncontextuality
  // Degrees of epistemicity for the same four orderings; empty where the
  // pair is orthogonal and the ratio is undefined.
  std::array<std::optional<double>, 4> f_values{};
  double tolerance = 0.0;
  bool conclusion = false;
};

// Registers the chi and eta bases (labels <prefix>+ / <prefix>-) plus the
// corresponding maximally mixed procedures in a hemisphere-density model, so
// theorem1_check has everything it needs. A degenerate chi = eta request
// still yields two (identical) mixed procedures under distinct labels.
inline void register_theorem1_bases(OntologicalModel& model,
                                    const QuantumState& chi,
                                    const QuantumState& eta) {
  const auto ensure_basis = [&](const std::string& prefix, const QuantumState& s) {
    if (!model.find_preparation_for(pure_density(s))) {
      register_ks_state(model, prefix + "+", s);
      register_ks_state(model, prefix + "-", orthogonal_qubit(s));
    }
    register_mixed_procedure(model, "I2:" + prefix, "", "", s);
  };
  ensure_basis("chi", chi);
  ensure_basis("eta", eta);
}

inline Theorem1Report theorem1_check(const OntologicalModel& model,
                                     const QuantumState& chi,
                                     const QuantumState& eta, double tol) {
  const auto prep_of = [&](const QuantumState& s, const char* name) {
    const auto* p = model.find_preparation_for(pure_density(s));
    if (!p)
      throw std::invalid_argument(std::string("theorem1_check: missing preparation for ") + name);
    return p;
  };
  const QuantumState chi_perp = orthogonal_qubit(chi);
  const QuantumState eta_perp = orthogonal_qubit(eta);
  const auto* p_chi = prep_of(chi, "chi");
  const auto* p_chi_perp = prep_of(chi_perp, "chi_perp");
  const auto* p_eta = prep_of(eta, "eta");
  const auto* p_eta_perp = prep_of(eta_perp, "eta_perp");
  if (model.preparations_for(maximally_mixed(2)).size() < 2)
    throw std::invalid_argument(
        "theorem1_check: model must register two maximally mixed procedures");

  const auto supp_eta = support(p_eta->epistemic);
  const auto supp_eta_perp = support(p_eta_perp->epistemic);

  Theorem1Report report{{chi, chi_perp}, {eta, eta_perp}};
  report.tolerance = tol;
  report.support_integrals = {
      support_integral(p_chi->epistemic, supp_eta),
      support_integral(p_chi->epistemic, supp_eta_perp),
      support_integral(p_chi_perp->epistemic, supp_eta),
      support_integral(p_chi_perp->epistemic, supp_eta_perp)};
  report.support_sum = report.support_integrals[0] + report.support_integrals[1] +
                       report.support_integrals[2] + report.support_integrals[3];

  const std::array<double, 4> overlaps = {
      overlap_sq(chi, eta), overlap_sq(chi, eta_perp),
      overlap_sq(chi_perp, eta), overlap_sq(chi_perp, eta_perp)};
  bool f_ok = true;
  for (std::size_t k = 0; k < 4; ++k) {
    if (overlaps[k] < kOrthoThreshold) continue;  // f undefined, skipped
    report.f_values[k] = report.support_integrals[k] / overlaps[k];
    f_ok = f_ok && std::abs(*report.f_values[k] - 1.0) <= tol;
  }
  report.conclusion = f_ok && std::abs(report.support_sum - 2.0) <= tol;
  return report;
}

// ---------------------------------------------------------------------------
// Theorem 2

struct Theorem2Report {
  double l_q = 1.0;  // identical pure states
  double l_c = 0.0;
  double tv = 0.0;
  bool antecedent = false;        // L_C >= 1 - tol
  bool implication_holds = true;  // antecedent => TV <= 2 tol
  bool pair_is_max_epistemic_2 = false;
  double tolerance = 0.0;
};

// Checks the implication "classical fidelity 1 between two procedures for
// the same pure state forces equal densities" on one registered pair.
inline Theorem2Report theorem2_check(const OntologicalModel& model,
                                     const QuantumState& psi,
                                     const std::string& proc1,
                                     const std::string& proc2, double tol) {
  const auto& p1 = model.preparation(proc1);
  const auto& p2 = model.preparation(proc2);
  const Eigen::MatrixXcd target = psi.projector();
  for (const auto* p : {&p1, &p2}) {
    if ((p->target.matrix() - target).cwiseAbs().maxCoeff() > kRenormLimit)
      throw std::invalid_argument("theorem2_check: procedure '" + p->label +
                                  "' does not prepare the given pure state");
  }
  Theorem2Report report;
  report.tolerance = tol;
  report.l_q = quantum_overlap(psi, psi);
  report.l_c = classical_fidelity(p1.epistemic, p2.epistemic);
  report.tv = total_variation(p1.epistemic, p2.epistemic);
  report.antecedent = report.l_c >= 1.0 - tol;
  report.implication_holds = !report.antecedent || report.tv <= 2.0 * tol;
  report.pair_is_max_epistemic_2 = std::abs(report.l_q - report.l_c) <= tol;
  return report;
}

// ---------------------------------------------------------------------------
// Theorem 3

enum class ContextualityMode {
  BothNoncontextual,
  PureContextualAllowed,
  MixedContextualAllowed
};

inline const char* to_string(ContextualityMode m) {
  switch (m) {
    case ContextualityMode::BothNoncontextual: return "both-noncontextual";
    case ContextualityMode::PureContextualAllowed: return "pure-contextual-allowed";
    default: return "mixed-contextual-allowed";
  }
}

struct PatternRow {
  std::array<int, 3> signs{};      // which of the +/- pair carries the density
  double plus_sum_over_nu = 0.0;   // sum_t mu_t^+ in units of nu
  double minus_sum_over_nu = 0.0;  // sum_t mu_t^- in units of nu
};

struct FeasibilityCertificate {
  ContextualityMode mode = ContextualityMode::BothNoncontextual;
  bool feasible = false;
  std::vector<PatternRow> per_pattern_sums;  // all 8 sign patterns
  double required_over_nu = 3.0;
  std::optional<OntologicalModel> witness_model;
  double witness_residual = 0.0;  // max constraint violation of the witness
  bool via_lp = false;
  double lp_residual = 0.0;
};

// The eight per-point sign patterns with the forced values: within one
// context the +/- supports are disjoint, so at a point with positive shared
// density exactly one of the pair carries 2 nu and the other 0.
inline std::vector<PatternRow> theorem3_pattern_table() {
  std::vector<PatternRow> rows;
  for (int bits = 0; bits < 8; ++bits) {
    PatternRow row;
    for (int t = 0; t < 3; ++t) {
      row.signs[t] = (bits >> t) & 1 ? 1 : -1;
      const double plus_value = row.signs[t] > 0 ? 2.0 : 0.0;
      row.plus_sum_over_nu += plus_value;
      row.minus_sum_over_nu += 2.0 - plus_value;
    }
    rows.push_back(row);
  }
  return rows;
}

// Max violation of the witness model's defining constraints: the shared
// mixed density nu must equal half of each context's +/- pair and a third of
// each sum context's three densities, at every point.
inline double theorem3_witness_residual(const OntologicalModel& witness) {
  const auto& nu = witness.preparation("P1:I2").epistemic;
  const std::size_t n = nu.size();
  double worst = 0.0;
  for (std::size_t t = 1; t <= 3; ++t) {
    const std::string at = "A" + std::to_string(t);
    const auto& plus = witness.preparation("P" + std::to_string(t) + ":" + at + "+").epistemic;
    const auto& minus = witness.preparation("P" + std::to_string(t) + ":" + at + "-").epistemic;
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(nu.density(i) -
                                       0.5 * (plus.density(i) + minus.density(i))));
  }
  for (const char* ctx : {"P4", "P5"}) {
    const char sign = ctx[1] == '4' ? '+' : '-';
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t t = 1; t <= 3; ++t)
        sum += witness
                   .preparation(std::string(ctx) + ":A" + std::to_string(t) + sign)
                   .epistemic.density(i);
      worst = std::max(worst, std::abs(nu.density(i) - sum / 3.0));
    }
  }
  for (const char* mixed : {"P2:I2", "P3:I2", "P4:I2", "P5:I2"})
    worst = std::max(worst, total_variation(nu, witness.preparation(mixed).epistemic));
  return worst;
}

// Mixed-contextual witness: a hemisphere-density model that is pure-level
// noncontextual (one density per pure state; an explicit duplicate procedure
// exhibits distance zero) but whose two maximally mixed decompositions carry
// visibly different densities.
inline OntologicalModel build_mixed_contextual_witness(std::size_t grid_size = 4000) {
  OntologicalModel model = build_ks(grid_size, 0, 1);
  model.add_preparation(
      {"z+alt", pure_density(ket0()), ks_epistemic(model.space(), ket0())});
  return model;
}

inline FeasibilityCertificate theorem3_enumerate(ContextualityMode mode) {
  FeasibilityCertificate cert;
  cert.mode = mode;
  cert.per_pattern_sums = theorem3_pattern_table();
  switch (mode) {
    case ContextualityMode::BothNoncontextual: {
      bool attained = false;
      for (const auto& row : cert.per_pattern_sums)
        attained = attained || row.plus_sum_over_nu == cert.required_over_nu ||
                   row.minus_sum_over_nu == cert.required_over_nu;
      cert.feasible = attained;  // never: the sums are even multiples of nu
      break;
    }
    case ContextualityMode::PureContextualAllowed: {
      cert.feasible = true;
      cert.witness_model = build_theorem3_witness();
      cert.witness_residual = theorem3_witness_residual(*cert.witness_model);
      break;
    }
    case ContextualityMode::MixedContextualAllowed: {
      cert.feasible = true;
      cert.witness_model = build_mixed_contextual_witness();
      // Constraint check: identical pure-state densities, differing mixed ones.
      const auto& w = *cert.witness_model;
      cert.witness_residual = total_variation(w.preparation("z+").epistemic,
                                              w.preparation("z+alt").epistemic);
      break;
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Theorem 3, linear-feasibility route

// Assembles and solves the per-point linear system for a given shared sign
// pattern. Densities are expressed in units of nu; the probed points carry
// positive shared density by assumption.
//
// Variable layout per point:
//   BothNoncontextual:      mu_t^+, mu_t^- (6)
//   PureContextualAllowed:  context copies m_t^+/-, q_t^+, q_t^- (12)
//   MixedContextualAllowed: mu_t^+/- (6) plus nu_1..nu_5 (11), nu_1 = 1
namespace detail {

inline LinearFeasibility theorem3_solve_pattern(std::size_t n_points,
                                                ContextualityMode mode,
                                                const std::vector<int>& pattern) {
  std::size_t vars_per_point = 0;
  switch (mode) {
    case ContextualityMode::BothNoncontextual: vars_per_point = 6; break;
    case ContextualityMode::PureContextualAllowed: vars_per_point = 12; break;
    case ContextualityMode::MixedContextualAllowed: vars_per_point = 11; break;
  }
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  const std::size_t n_vars = vars_per_point * n_points;
  const auto add_row = [&](const std::vector<std::pair<std::size_t, double>>& entries,
                           double b) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_vars));
    for (const auto& [idx, coeff] : entries)
      row[static_cast<Eigen::Index>(idx)] += coeff;
    rows.push_back(std::move(row));
    rhs.push_back(b);
  };

  for (std::size_t p = 0; p < n_points; ++p) {
    const std::size_t base = p * vars_per_point;
    const int bits = pattern[p];
    // index helpers: plus_t = base + 2t, minus_t = base + 2t + 1 for the
    // per-context (or shared) pure densities
    const auto plus = [&](int t) { return base + 2 * std::size_t(t); };
    const auto minus = [&](int t) { return base + 2 * std::size_t(t) + 1; };
    switch (mode) {
      case ContextualityMode::BothNoncontextual: {
        for (int t = 0; t < 3; ++t) {
          add_row({{plus(t), 1.0}, {minus(t), 1.0}}, 2.0);  // pair sums to 2 nu
          const bool plus_side = (bits >> t) & 1;
          add_row({{plus_side ? minus(t) : plus(t), 1.0}}, 0.0);  // disjointness
        }
        add_row({{plus(0), 1.0}, {plus(1), 1.0}, {plus(2), 1.0}}, 3.0);
        add_row({{minus(0), 1.0}, {minus(1), 1.0}, {minus(2), 1.0}}, 3.0);
        break;
      }
      case ContextualityMode::PureContextualAllowed: {
        const auto q_plus = [&](int t) { return base + 6 + std::size_t(t); };
        const auto q_minus = [&](int t) { return base + 9 + std::size_t(t); };
        for (int t = 0; t < 3; ++t) {
          add_row({{plus(t), 1.0}, {minus(t), 1.0}}, 2.0);
          const bool plus_side = (bits >> t) & 1;
          add_row({{plus_side ? minus(t) : plus(t), 1.0}}, 0.0);
        }
        add_row({{q_plus(0), 1.0}, {q_plus(1), 1.0}, {q_plus(2), 1.0}}, 3.0);
        add_row({{q_minus(0), 1.0}, {q_minus(1), 1.0}, {q_minus(2), 1.0}}, 3.0);
        break;
      }
      case ContextualityMode::MixedContextualAllowed: {
        const auto nu = [&](int j) { return base + 6 + std::size_t(j); };  // j = 0..4
        add_row({{nu(0), 1.0}}, 1.0);  // normalize the probed density
        for (int t = 0; t < 3; ++t) {
          add_row({{plus(t), 1.0}, {minus(t), 1.0}, {nu(t), -2.0}}, 0.0);
          const bool plus_side = (bits >> t) & 1;
          add_row({{plus_side ? minus(t) : plus(t), 1.0}}, 0.0);
        }
        add_row({{plus(0), 1.0}, {plus(1), 1.0}, {plus(2), 1.0}, {nu(3), -3.0}}, 0.0);
        add_row({{minus(0), 1.0}, {minus(1), 1.0}, {minus(2), 1.0}, {nu(4), -3.0}}, 0.0);
        break;
      }
    }
  }

  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(n_vars));
  Eigen::VectorXd b(static_cast<Eigen::Index>(rhs.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    a.row(static_cast<Eigen::Index>(i)) = rows[i];
    b[static_cast<Eigen::Index>(i)] = rhs[i];
  }
  LinearFeasibility result = solve_feasibility(a, b);
  if (result.feasible) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(n_vars));
    for (std::size_t i = 0; i < result.solution.size(); ++i)
      x[static_cast<Eigen::Index>(i)] = result.solution[i];
    result.residual = (a * x - b).cwiseAbs().maxCoeff();
  }
  return result;
}

}  // namespace detail

// Feasibility search over a finite space: with supplied per-point patterns a
// single solve; otherwise one shared pattern per point class, scanning all
// eight. Agrees with theorem3_enumerate on every mode.
inline FeasibilityCertificate theorem3_lp(
    std::size_t space_size, ContextualityMode mode,
    const std::vector<std::vector<int>>& support_patterns = {},
    std::size_t cap = 64) {
  if (space_size == 0)
    throw std::invalid_argument("theorem3_lp: empty space");
  if (space_size > cap)
    throw std::invalid_argument("theorem3_lp: space size exceeds the cap of " +
                                std::to_string(cap));
  std::vector<std::vector<int>> patterns = support_patterns;
  if (patterns.empty()) {
    for (int bits = 0; bits < 8; ++bits)
      patterns.emplace_back(space_size, bits);
  }
  for (const auto& p : patterns)
    if (p.size() != space_size)
      throw std::invalid_argument("theorem3_lp: pattern length mismatch");

  FeasibilityCertificate cert;
  cert.mode = mode;
  cert.via_lp = true;
  cert.per_pattern_sums = theorem3_pattern_table();
  cert.feasible = false;
  cert.lp_residual = 0.0;
  for (const auto& pattern : patterns) {
    const LinearFeasibility lf = detail::theorem3_solve_pattern(space_size, mode, pattern);
    if (lf.feasible) {
      cert.feasible = true;
      cert.lp_residual = std::max(cert.lp_residual, lf.residual);
    }
  }
  if (cert.feasible) {
    // a feasible certificate always carries a concrete witness model
    if (mode == ContextualityMode::PureContextualAllowed) {
      cert.witness_model = build_theorem3_witness();
      cert.witness_residual = theorem3_witness_residual(*cert.witness_model);
    } else if (mode == ContextualityMode::MixedContextualAllowed) {
      cert.witness_model = build_mixed_contextual_witness();
      cert.witness_residual =
          total_variation(cert.witness_model->preparation("z+").epistemic,
                          cert.witness_model->preparation("z+alt").epistemic);
    }
  }
  return cert;
}

}  // namespace ontoscope
