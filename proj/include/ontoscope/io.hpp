#pragma once

// JSON model documents, run configuration, and the report writers used by
// the command-line tool. Models are stored as human-auditable JSON (complex
// numbers as [re, im] pairs), metric tables as CSV. Loading re-validates
// every module invariant by construction, and save/load round-trips arrays
// bit-exactly.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ontoscope/classify.hpp"
#include "ontoscope/ontic.hpp"
#include "ontoscope/overlap.hpp"
#include "ontoscope/quantum.hpp"
#include "ontoscope/theorems.hpp"

namespace ontoscope {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

struct RunConfig {
  std::size_t grid_size = 20000;
  double tolerance = 2e-2;
  std::uint64_t seed = 42;
  std::size_t pair_budget = 200;
  std::string output_path;  // empty = stdout

  void validate() const {
    if (grid_size < 100)
      throw std::invalid_argument("config: grid size must be at least 100");
    if (!(tolerance > 0.0))
      throw std::invalid_argument("config: tolerance must be positive");
  }
};

// ---------------------------------------------------------------------------
// JSON encoding of quantum/ontic objects

inline Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

inline Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXcd matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw std::runtime_error(where + ": expected a non-empty matrix array");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXcd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw std::runtime_error(where + ": ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& cell = j[r][c];
      if (!cell.is_array() || cell.size() != 2)
        throw std::runtime_error(where + ": matrix entries must be [re, im] pairs");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

inline Json space_to_json(const OnticSpace& space) {
  Json j;
  j["kind"] = space.is_sphere() ? "fibonacci-sphere" : "abstract";
  j["size"] = space.size();
  j["weights"] = space.weights();
  return j;
}

// Sphere spaces are regenerated from their size: the grid construction is
// deterministic, so the points come back bit-identical without storing 3N
// coordinates.
inline SpacePtr space_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const std::size_t size = j.at("size").get<std::size_t>();
  std::vector<double> weights = j.at("weights").get<std::vector<double>>();
  if (weights.size() != size)
    throw std::runtime_error("space.weights: length " +
                             std::to_string(weights.size()) + " != space.size " +
                             std::to_string(size));
  if (kind == "fibonacci-sphere") {
    SpacePtr space = fibonacci_sphere(size);
    for (std::size_t i = 0; i < size; ++i)
      if (weights[i] != space->weight(i))
        throw std::runtime_error("space.weights: entry " + std::to_string(i) +
                                 " does not match the Fibonacci grid weight");
    return space;
  }
  if (kind == "abstract") return OnticSpace::abstract(std::move(weights));
  throw std::runtime_error("space.kind: unknown kind '" + kind + "'");
}

inline Json model_to_json(const OntologicalModel& model) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["space"] = space_to_json(*model.space());
  Json preps = Json::array();
  for (const auto& p : model.preparations()) {
    Json jp;
    jp["label"] = p.label;
    jp["target"] = matrix_to_json(p.target.matrix());
    jp["density"] = p.epistemic.density();
    preps.push_back(std::move(jp));
  }
  j["preparations"] = std::move(preps);
  Json meas = Json::array();
  for (const auto& m : model.measurements()) {
    Json jm;
    jm["label"] = m.label;
    Json effects = Json::array();
    for (const auto& e : m.effects) effects.push_back(matrix_to_json(e.matrix()));
    jm["effects"] = std::move(effects);
    jm["outcomes"] = m.response.outcomes();
    jm["response"] = m.response.table();
    meas.push_back(std::move(jm));
  }
  j["measurements"] = std::move(meas);
  if (!model.notes().empty()) j["notes"] = model.notes();
  return j;
}

inline OntologicalModel model_from_json(const Json& j) {
  if (j.at("schema_version").get<std::string>() != kSchemaVersion)
    throw std::runtime_error("schema_version: expected \"1\"");
  SpacePtr space = space_from_json(j.at("space"));
  OntologicalModel model(space);
  std::size_t index = 0;
  for (const auto& jp : j.at("preparations")) {
    const std::string where = "preparations[" + std::to_string(index++) + "]";
    try {
      auto density = jp.at("density").get<std::vector<double>>();
      if (density.size() != space->size())
        throw std::runtime_error("density length " + std::to_string(density.size()) +
                                 " != space.size " + std::to_string(space->size()));
      model.add_preparation(
          {jp.at("label").get<std::string>(),
           DensityOperator(matrix_from_json(jp.at("target"), where + ".target")),
           EpistemicState(space, std::move(density))});
    } catch (const std::exception& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
  }
  index = 0;
  for (const auto& jm : j.at("measurements")) {
    const std::string where = "measurements[" + std::to_string(index++) + "]";
    try {
      std::vector<Effect> effects;
      for (const auto& je : jm.at("effects"))
        effects.emplace_back(matrix_from_json(je, where + ".effects"));
      auto outcomes = jm.at("outcomes").get<std::vector<std::string>>();
      auto table = jm.at("response").get<std::vector<std::vector<double>>>();
      model.add_measurement(
          {jm.at("label").get<std::string>(), std::move(effects),
           ResponseFunction(space, std::move(outcomes), std::move(table))});
    } catch (const std::exception& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
  }
  if (j.contains("notes"))
    model.notes() = j.at("notes").get<std::vector<std::string>>();
  return model;
}

inline void save_model(const OntologicalModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << model_to_json(model).dump(1) << '\n';
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline OntologicalModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("'" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const std::exception& e) {
    throw std::runtime_error("'" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

inline Json witness_to_json(const PairWitness& w) {
  return Json{{"prep1", w.prep1}, {"prep2", w.prep2}, {"value", w.value},
              {"deviation", w.deviation}};
}

inline Json epistemicity_verdict_to_json(const EpistemicityVerdict& v) {
  return Json{{"verdict", to_string(v.verdict)},
              {"worst_pair", witness_to_json(v.worst)},
              {"pairs_checked", v.pairs_checked},
              {"tolerance", v.tolerance}};
}

inline Json contextuality_to_json(const ContextualityVerdict& v) {
  return Json{{"level", to_string(v.level)},
              {"noncontextual", v.noncontextual},
              {"state", v.state},
              {"procedure_pair", Json::array({v.proc1, v.proc2})},
              {"distance", v.distance},
              {"procedure_pairs", v.procedure_pairs},
              {"tolerance", v.tolerance}};
}

inline Json classification_to_json(const ClassificationReport& r) {
  Json j;
  j["ontic_or_epistemic"] = to_string(r.verdict.ontic_or_epistemic);
  j["max_psi_epistemic_1"] = epistemicity_verdict_to_json(r.verdict.max_psi_epistemic_1);
  j["max_psi_epistemic_2"] = epistemicity_verdict_to_json(r.verdict.max_psi_epistemic_2);
  j["sampled_pairs"] = r.verdict.sampled_pairs;
  j["tolerance"] = r.verdict.tolerance;
  j["pure_pnc"] = contextuality_to_json(r.pure_pnc);
  j["pure_groups"] = r.pure_groups;
  j["mixed_pnc"] = contextuality_to_json(r.mixed_pnc);
  j["mixed_groups"] = r.mixed_groups;
  j["determinism"] = Json{{"deterministic", r.determinism.deterministic},
                          {"fraction", r.determinism.fraction},
                          {"entries", r.determinism.entries},
                          {"tolerance", r.determinism.tolerance}};
  return j;
}

inline Json theorem1_to_json(const Theorem1Report& r) {
  Json f = Json::array();
  for (const auto& v : r.f_values) {
    if (v) f.push_back(*v);
    else f.push_back(nullptr);  // undefined on an orthogonal pairing
  }
  return Json{{"support_integrals", r.support_integrals},
              {"support_sum", r.support_sum},
              {"f_values", f},
              {"tolerance", r.tolerance},
              {"conclusion", r.conclusion}};
}

inline Json theorem2_to_json(const Theorem2Report& r) {
  return Json{{"l_q", r.l_q},
              {"l_c", r.l_c},
              {"tv", r.tv},
              {"antecedent", r.antecedent},
              {"implication_holds", r.implication_holds},
              {"pair_is_max_epistemic_2", r.pair_is_max_epistemic_2},
              {"tolerance", r.tolerance}};
}

inline Json certificate_to_json(const FeasibilityCertificate& c,
                                bool embed_witness = true) {
  Json rows = Json::array();
  for (const auto& row : c.per_pattern_sums) {
    std::string signs;
    for (int s : row.signs) signs += s > 0 ? '+' : '-';
    rows.push_back(Json{{"pattern", signs},
                        {"plus_sum_over_nu", row.plus_sum_over_nu},
                        {"minus_sum_over_nu", row.minus_sum_over_nu}});
  }
  Json j;
  j["mode"] = to_string(c.mode);
  j["feasible"] = c.feasible;
  j["required_over_nu"] = c.required_over_nu;
  j["per_pattern_sums"] = std::move(rows);
  j["via_lp"] = c.via_lp;
  if (c.via_lp) j["lp_residual"] = c.lp_residual;
  if (c.witness_model) {
    j["witness_residual"] = c.witness_residual;
    if (embed_witness) j["witness_model"] = model_to_json(*c.witness_model);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Overlap CSV

struct OverlapRow {
  std::string pair_id;
  double overlap_sq = 0.0;
  double l_q = 0.0;
  double l_c = 0.0;
  double f = 0.0;
  double deficit = 0.0;
};

inline std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_overlaps_csv(std::ostream& out,
                               const std::vector<OverlapRow>& rows) {
  out << "pair,overlap_sq,l_q,l_c,f,deficit\n";
  for (const auto& r : rows) {
    out << r.pair_id << ',' << format_full(r.overlap_sq) << ','
        << format_full(r.l_q) << ',' << format_full(r.l_c) << ','
        << format_full(r.f) << ',' << format_full(r.deficit) << '\n';
  }
}

// One overlap row per sampled pair, reproducible under a fixed seed.
inline std::vector<OverlapRow> overlap_rows(const OntologicalModel& model,
                                            const std::vector<SampledPair>& pairs) {
  std::vector<OverlapRow> rows;
  rows.reserve(pairs.size());
  for (const auto& pair : pairs) {
    const auto& mu1 = model.preparation(pair.prep1).epistemic;
    const auto& mu2 = model.preparation(pair.prep2).epistemic;
    OverlapRow row;
    row.pair_id = pair.prep1 + "|" + pair.prep2;
    row.overlap_sq = pair.fidelity;
    row.l_q = quantum_overlap(pair.state1, pair.state2);
    row.l_c = classical_fidelity(mu1, mu2);
    row.f = support_integral(mu1, support(mu2)) / pair.fidelity;
    row.deficit = row.l_q - row.l_c;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ontoscope
