#pragma once

// Finite representation of an ontological model: a discretized ontic space,
// epistemic states (densities against the quadrature measure), response
// functions, preparation procedures, and the Born-rule verifier.
//
// Densities are stored as values of a density function against the
// quadrature measure, not as per-point masses, so every integral in this
// file is literally sum_i w_i * (...). Sums accumulate in long double; the
// total-variation / classical-fidelity identities downstream are checked to
// 1e-12 and need the extra headroom.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ontoscope/quantum.hpp"

namespace ontoscope {

inline constexpr double kSpaceMeasureTol = 1e-6;   // relative, sphere spaces
inline constexpr double kDensityNormTol = 1e-6;    // sum w_i d_i vs 1
inline constexpr double kResponseRowTol = 1e-9;    // per-point outcome sum
inline constexpr double kDefaultSupportEps = 1e-9; // relative support cutoff

// Born-deviation tolerance scaled with grid size as c / sqrt(N), anchored at
// 2e-2 for N = 20000: the discretization error of hemisphere-indicator
// integrands sets how sharp any downstream check can be.
inline double born_tolerance(std::size_t grid_size, double base = 2e-2,
                             std::size_t base_grid = 20000) {
  return base * std::sqrt(double(base_grid) / double(grid_size));
}

// Finite point set with quadrature weights approximating the ontic space.
// Sphere spaces carry unit Bloch vectors per point; abstract spaces carry
// only weights (points are their indices).
class OnticSpace {
 public:
  static std::shared_ptr<const OnticSpace> sphere(
      std::vector<Eigen::Vector3d> points, std::vector<double> weights) {
    auto space = std::shared_ptr<OnticSpace>(new OnticSpace());
    space->points_ = std::move(points);
    space->weights_ = std::move(weights);
    space->validate(true);
    return space;
  }

  static std::shared_ptr<const OnticSpace> abstract(std::vector<double> weights) {
    auto space = std::shared_ptr<OnticSpace>(new OnticSpace());
    space->weights_ = std::move(weights);
    space->validate(false);
    return space;
  }

  std::size_t size() const { return weights_.size(); }
  bool is_sphere() const { return !points_.empty(); }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }

  const std::vector<Eigen::Vector3d>& points() const {
    if (!is_sphere())
      throw std::logic_error("OnticSpace: abstract space has no point geometry");
    return points_;
  }
  const Eigen::Vector3d& point(std::size_t i) const { return points()[i]; }

  double total_measure() const {
    long double acc = 0.0L;
    for (double w : weights_) acc += w;
    return static_cast<double>(acc);
  }

 private:
  OnticSpace() = default;

  void validate(bool sphere_kind) const {
    if (weights_.empty()) throw std::invalid_argument("OnticSpace: empty space");
    for (double w : weights_)
      if (!(w > 0.0)) throw std::invalid_argument("OnticSpace: weights must be positive");
    if (sphere_kind) {
      if (points_.size() != weights_.size())
        throw std::invalid_argument("OnticSpace: points/weights size mismatch");
      const double total = total_measure();
      if (std::abs(total - 4.0 * M_PI) > kSpaceMeasureTol * 4.0 * M_PI)
        throw std::invalid_argument("OnticSpace: sphere measure is not 4 pi");
    }
  }

  std::vector<Eigen::Vector3d> points_;
  std::vector<double> weights_;
};

using SpacePtr = std::shared_ptr<const OnticSpace>;

// Spherical Fibonacci point set with equal weights 4 pi / N: near-uniform
// coverage and simple exact weights.
inline SpacePtr fibonacci_sphere(std::size_t n) {
  if (n < 100)
    throw std::invalid_argument("fibonacci_sphere: need at least 100 points");
  std::vector<Eigen::Vector3d> points;
  points.reserve(n);
  const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * double(i) + 1.0) / double(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * double(i);
    points.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  std::vector<double> weights(n, 4.0 * M_PI / double(n));
  return OnticSpace::sphere(std::move(points), std::move(weights));
}

namespace detail {

inline void require_same_space(const SpacePtr& a, const SpacePtr& b,
                               const char* who) {
  if (a != b)
    throw std::invalid_argument(std::string(who) +
                                ": operands live on different ontic spaces");
}

}  // namespace detail

// Nonnegative density over an OnticSpace, normalized under the quadrature
// measure: sum_i w_i density_i = 1.
class EpistemicState {
 public:
  EpistemicState(SpacePtr space, std::vector<double> density)
      : space_(std::move(space)), density_(std::move(density)) {
    if (!space_) throw std::invalid_argument("EpistemicState: null space");
    if (density_.size() != space_->size())
      throw std::invalid_argument("EpistemicState: density length mismatch");
    for (double d : density_)
      if (!(d >= 0.0))
        throw std::invalid_argument("EpistemicState: negative density value");
    const double norm = normalization();
    if (std::abs(norm - 1.0) > kDensityNormTol)
      throw std::invalid_argument("EpistemicState: normalization " +
                                  std::to_string(norm) + " too far from 1");
  }

  // Skips validation. For constructing deliberately broken densities in
  // diagnostics and negative tests; regular code goes through the ctor.
  static EpistemicState raw(SpacePtr space, std::vector<double> density) {
    EpistemicState out;
    out.space_ = std::move(space);
    out.density_ = std::move(density);
    return out;
  }

  const SpacePtr& space() const { return space_; }
  const std::vector<double>& density() const { return density_; }
  double density(std::size_t i) const { return density_[i]; }
  std::size_t size() const { return density_.size(); }

  double normalization() const {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < density_.size(); ++i)
      acc += static_cast<long double>(space_->weight(i)) * density_[i];
    return static_cast<double>(acc);
  }

 private:
  EpistemicState() = default;

  SpacePtr space_;
  std::vector<double> density_;
};

// Per-point outcome probabilities; each point's row sums to 1.
class ResponseFunction {
 public:
  ResponseFunction(SpacePtr space, std::vector<std::string> outcomes,
                   std::vector<std::vector<double>> table)
      : space_(std::move(space)),
        outcomes_(std::move(outcomes)),
        table_(std::move(table)) {
    if (!space_) throw std::invalid_argument("ResponseFunction: null space");
    if (outcomes_.empty())
      throw std::invalid_argument("ResponseFunction: no outcomes");
    if (table_.size() != space_->size())
      throw std::invalid_argument("ResponseFunction: table length mismatch");
    for (const auto& row : table_) {
      if (row.size() != outcomes_.size())
        throw std::invalid_argument("ResponseFunction: row width mismatch");
      long double sum = 0.0L;
      for (double p : row) {
        if (p < -1e-12 || p > 1.0 + 1e-12)
          throw std::invalid_argument("ResponseFunction: entry outside [0, 1]");
        sum += p;
      }
      if (std::abs(static_cast<double>(sum) - 1.0) > kResponseRowTol)
        throw std::invalid_argument("ResponseFunction: outcome row does not sum to 1");
    }
  }

  const SpacePtr& space() const { return space_; }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::vector<std::vector<double>>& table() const { return table_; }
  double value(std::size_t point, std::size_t outcome) const {
    return table_[point][outcome];
  }

  std::size_t outcome_index(const std::string& label) const {
    for (std::size_t k = 0; k < outcomes_.size(); ++k)
      if (outcomes_[k] == label) return k;
    throw std::invalid_argument("ResponseFunction: unknown outcome '" + label + "'");
  }

 private:
  SpacePtr space_;
  std::vector<std::string> outcomes_;
  std::vector<std::vector<double>> table_;
};

// An effect set together with the response function realizing it.
struct Measurement {
  std::string label;
  std::vector<Effect> effects;  // aligned with response.outcomes()
  ResponseFunction response;

  Measurement(std::string label_, std::vector<Effect> effects_,
              ResponseFunction response_)
      : label(std::move(label_)),
        effects(std::move(effects_)),
        response(std::move(response_)) {
    if (effects.size() != response.outcomes().size())
      throw std::invalid_argument("Measurement: effect/outcome count mismatch");
  }
};

struct PreparationProcedure {
  std::string label;
  DensityOperator target;
  EpistemicState epistemic;
};

// An assembled model: one shared space, preparations, measurements. Immutable
// in spirit once assembled; verification operations never mutate it.
class OntologicalModel {
 public:
  explicit OntologicalModel(SpacePtr space) : space_(std::move(space)) {
    if (!space_) throw std::invalid_argument("OntologicalModel: null space");
  }

  const SpacePtr& space() const { return space_; }

  void add_preparation(PreparationProcedure prep) {
    detail::require_same_space(space_, prep.epistemic.space(), "add_preparation");
    for (const auto& p : preparations_)
      if (p.label == prep.label)
        throw std::invalid_argument("add_preparation: duplicate label '" +
                                    prep.label + "'");
    preparations_.push_back(std::move(prep));
  }

  void add_measurement(Measurement meas) {
    detail::require_same_space(space_, meas.response.space(), "add_measurement");
    for (const auto& m : measurements_)
      if (m.label == meas.label)
        throw std::invalid_argument("add_measurement: duplicate label '" +
                                    meas.label + "'");
    measurements_.push_back(std::move(meas));
  }

  const std::vector<PreparationProcedure>& preparations() const {
    return preparations_;
  }
  const std::vector<Measurement>& measurements() const { return measurements_; }

  const PreparationProcedure& preparation(const std::string& label) const {
    for (const auto& p : preparations_)
      if (p.label == label) return p;
    throw std::invalid_argument("model: no preparation labelled '" + label + "'");
  }

  const Measurement& measurement(const std::string& label) const {
    for (const auto& m : measurements_)
      if (m.label == label) return m;
    throw std::invalid_argument("model: no measurement labelled '" + label + "'");
  }

  // First preparation whose target matches rho entrywise within tol.
  const PreparationProcedure* find_preparation_for(
      const DensityOperator& rho, double tol = kRenormLimit) const {
    for (const auto& p : preparations_) {
      if (p.target.dim() != rho.dim()) continue;
      if ((p.target.matrix() - rho.matrix()).cwiseAbs().maxCoeff() <= tol)
        return &p;
    }
    return nullptr;
  }

  std::vector<const PreparationProcedure*> preparations_for(
      const DensityOperator& rho, double tol = kRenormLimit) const {
    std::vector<const PreparationProcedure*> out;
    for (const auto& p : preparations_) {
      if (p.target.dim() != rho.dim()) continue;
      if ((p.target.matrix() - rho.matrix()).cwiseAbs().maxCoeff() <= tol)
        out.push_back(&p);
    }
    return out;
  }

  std::vector<std::string>& notes() { return notes_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  SpacePtr space_;
  std::vector<PreparationProcedure> preparations_;
  std::vector<Measurement> measurements_;
  std::vector<std::string> notes_;
};

// ---------------------------------------------------------------------------
// Operations

// sum_i w_i mu_i xi_i[outcome]: the model's prediction for one outcome.
inline double predicted_probability(const OntologicalModel& model,
                                    const PreparationProcedure& prep,
                                    const Measurement& meas,
                                    const std::string& outcome) {
  detail::require_same_space(model.space(), prep.epistemic.space(),
                             "predicted_probability");
  detail::require_same_space(model.space(), meas.response.space(),
                             "predicted_probability");
  const std::size_t k = meas.response.outcome_index(outcome);
  const auto& w = model.space()->weights();
  const auto& d = prep.epistemic.density();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < d.size(); ++i)
    acc += static_cast<long double>(w[i]) * d[i] * meas.response.value(i, k);
  return static_cast<double>(acc);
}

struct BornDeviation {
  std::string preparation;
  std::string measurement;
  std::string outcome;
  double predicted = 0.0;
  double born = 0.0;
  double deviation = 0.0;
};

struct BornReport {
  double max_abs_deviation = 0.0;
  double mean_abs_deviation = 0.0;
  std::size_t checks = 0;
  double tolerance = 0.0;
  bool passed = false;
  BornDeviation worst;
};

// Compares predicted probabilities against Tr(rho E) over all outcomes of the
// given (preparation, measurement) pairs.
inline BornReport verify_born(
    const OntologicalModel& model,
    const std::vector<std::pair<std::string, std::string>>& pairs, double tol) {
  BornReport report;
  report.tolerance = tol;
  long double dev_sum = 0.0L;
  for (const auto& [prep_label, meas_label] : pairs) {
    const auto& prep = model.preparation(prep_label);
    const auto& meas = model.measurement(meas_label);
    for (std::size_t k = 0; k < meas.effects.size(); ++k) {
      const std::string& outcome = meas.response.outcomes()[k];
      const double predicted = predicted_probability(model, prep, meas, outcome);
      const double expected = born_probability(prep.target, meas.effects[k]);
      const double dev = std::abs(predicted - expected);
      dev_sum += dev;
      ++report.checks;
      if (dev > report.max_abs_deviation) {
        report.max_abs_deviation = dev;
        report.worst = {prep_label, meas_label, outcome, predicted, expected, dev};
      }
    }
  }
  if (report.checks == 0)
    throw std::invalid_argument("verify_born: no pairs to check");
  report.mean_abs_deviation = static_cast<double>(dev_sum / report.checks);
  report.passed = report.max_abs_deviation <= tol;
  return report;
}

// Indices where the density exceeds eps_rel times its maximum.
inline std::vector<std::size_t> support(const EpistemicState& mu,
                                        double eps_rel = kDefaultSupportEps) {
  if (eps_rel < 0.0) throw std::invalid_argument("support: eps_rel must be >= 0");
  const auto& d = mu.density();
  const double max_d = *std::max_element(d.begin(), d.end());
  if (!(max_d > 0.0))
    throw std::invalid_argument("support: all-zero density");
  const double cut = eps_rel * max_d;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > cut) idx.push_back(i);
  return idx;
}

// sum over the region of w_i d_i; the literal discretization of an integral
// of mu over a subset of the space.
inline double support_integral(const EpistemicState& mu,
                               const std::vector<std::size_t>& region) {
  const auto& w = mu.space()->weights();
  const auto& d = mu.density();
  long double acc = 0.0L;
  for (std::size_t i : region) {
    if (i >= d.size())
      throw std::out_of_range("support_integral: index outside the space");
    acc += static_cast<long double>(w[i]) * d[i];
  }
  return static_cast<double>(acc);
}

// Pointwise convex combination of epistemic states on a shared space.
inline EpistemicState mixture(
    const std::vector<std::pair<double, EpistemicState>>& parts) {
  if (parts.empty()) throw std::invalid_argument("mixture: no components");
  const SpacePtr& space = parts.front().second.space();
  long double weight_sum = 0.0L;
  for (const auto& [w, mu] : parts) {
    if (w < 0.0) throw std::invalid_argument("mixture: negative weight");
    detail::require_same_space(space, mu.space(), "mixture");
    weight_sum += w;
  }
  if (std::abs(static_cast<double>(weight_sum) - 1.0) > 1e-9)
    throw std::invalid_argument("mixture: weights sum to " +
                                std::to_string(double(weight_sum)) + ", not 1");
  std::vector<double> density(space->size(), 0.0);
  for (const auto& [w, mu] : parts)
    for (std::size_t i = 0; i < density.size(); ++i)
      density[i] += w * mu.density(i);
  return EpistemicState(space, std::move(density));
}

// (1/2) sum_i w_i |a_i - b_i|: total-variation distance between densities.
inline double total_variation(const EpistemicState& a, const EpistemicState& b) {
  detail::require_same_space(a.space(), b.space(), "total_variation");
  const auto& w = a.space()->weights();
  long double acc = 0.0L;
  for (std::size_t i = 0; i < w.size(); ++i)
    acc += static_cast<long double>(w[i]) * std::abs(a.density(i) - b.density(i));
  return static_cast<double>(0.5L * acc);
}

}  // namespace ontoscope
