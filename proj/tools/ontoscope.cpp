// Command-line front end: builds zoo models, classifies model files, runs
// the three theorem checks, and emits overlap tables.
//
// Exit codes: 0 = success / expected verdict, 1 = verdict mismatch,
// 2 = input or configuration error.

#include <cstdlib>
#include <optional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ontoscope/ontoscope.hpp"

namespace {

using namespace ontoscope;

constexpr int kExitOk = 0;
constexpr int kExitVerdictMismatch = 1;
constexpr int kExitInputError = 2;

QuantumState parse_state(const std::string& token) {
  if (token == "0") return ket0();
  if (token == "1") return ket1();
  if (token == "+") return ket_plus();
  if (token == "-") return ket_minus();
  if (token == "i") return state_from_bloch({0.0, 1.0, 0.0});
  if (token == "-i") return state_from_bloch({0.0, -1.0, 0.0});
  const auto comma = token.find(',');
  if (comma != std::string::npos) {
    try {
      const double theta = std::stod(token.substr(0, comma));
      const double phi = std::stod(token.substr(comma + 1));
      return state_from_angles(theta, phi);
    } catch (const std::exception&) {
    }
  }
  throw std::invalid_argument("unrecognized state token '" + token +
                              "' (use 0, 1, +, -, i, -i or \"theta,phi\")");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

void apply_seed_env(RunConfig& config) {
  if (const char* env = std::getenv("ONTOSCOPE_SEED"))
    config.seed = std::strtoull(env, nullptr, 10);
}

int run_zoo(const std::string& kind, const RunConfig& config, std::size_t states,
            double fraction, const std::string& out_path) {
  OntologicalModel model = [&]() {
    if (kind == "ks") return build_ks(config.grid_size, states, config.seed);
    if (kind == "bb")
      return build_bb(config.grid_size, haar_qubit_states(states, config.seed));
    if (kind == "witness") return build_theorem3_witness();
    if (kind == "truncated") {
      OntologicalModel base = build_ks(config.grid_size, states, config.seed);
      return build_truncated_epistemic(base, ket_plus(), ket0(), fraction);
    }
    throw std::invalid_argument("unknown zoo kind '" + kind + "'");
  }();
  const std::string path = out_path.empty() ? kind + ".json" : out_path;
  save_model(model, path);
  std::cerr << "wrote " << path << " (" << model.preparations().size()
            << " preparations, " << model.measurements().size()
            << " measurements, N=" << model.space()->size() << ")\n";
  return kExitOk;
}

int run_classify(const std::string& model_path, const RunConfig& config,
                 std::optional<double> tolerance, double min_fidelity,
                 const std::string& out_path) {
  const OntologicalModel model = load_model(model_path);
  ClassifyOptions opt;
  opt.sampler.pair_budget = config.pair_budget;
  opt.sampler.seed = config.seed;
  opt.sampler.min_fidelity = min_fidelity;
  opt.tolerance = tolerance;  // unset: scaled from the model grid size
  const ClassificationReport report = classify_model(model, opt);
  Json j = classification_to_json(report);
  j["model"] = model_path;
  j["seed"] = config.seed;
  write_text(out_path, j.dump(2) + "\n");
  return kExitOk;
}

int run_theorem1(const RunConfig& config, const std::string& model_path,
                 const std::string& chi_token, const std::string& eta_token,
                 double tol, const std::string& out_path) {
  const QuantumState chi = parse_state(chi_token);
  const QuantumState eta = parse_state(eta_token);
  OntologicalModel model = [&]() {
    if (!model_path.empty()) return load_model(model_path);
    OntologicalModel fresh(fibonacci_sphere(config.grid_size));
    register_theorem1_bases(fresh, chi, eta);
    return fresh;
  }();
  const Theorem1Report report = theorem1_check(model, chi, eta, tol);
  Json j = theorem1_to_json(report);
  j["chi"] = chi_token;
  j["eta"] = eta_token;
  write_text(out_path, j.dump(2) + "\n");
  return report.conclusion ? kExitOk : kExitVerdictMismatch;
}

int run_theorem2(const std::string& model_path, std::string prep1,
                 std::string prep2, double tol, const std::string& out_path) {
  const OntologicalModel model = load_model(model_path);
  if (prep1.empty() || prep2.empty()) {
    // Pick the first pure target prepared by two registered procedures.
    bool found = false;
    for (std::size_t i = 0; !found && i < model.preparations().size(); ++i) {
      const auto& a = model.preparations()[i];
      if (!a.target.is_pure()) continue;
      for (std::size_t j = i + 1; j < model.preparations().size(); ++j) {
        const auto& b = model.preparations()[j];
        if (b.target.dim() == a.target.dim() &&
            (b.target.matrix() - a.target.matrix()).cwiseAbs().maxCoeff() <=
                kRenormLimit) {
          prep1 = a.label;
          prep2 = b.label;
          found = true;
          break;
        }
      }
    }
    if (!found)
      throw std::invalid_argument(
          "no pure state is prepared by two procedures; pass --prep1/--prep2");
  }
  const auto& target = model.preparation(prep1).target;
  const auto psi = pure_state_of(target);
  if (!psi)
    throw std::invalid_argument("procedure '" + prep1 +
                                "' does not prepare a pure state");
  const Theorem2Report report = theorem2_check(model, *psi, prep1, prep2, tol);
  Json j = theorem2_to_json(report);
  j["prep1"] = prep1;
  j["prep2"] = prep2;
  j["model"] = model_path;
  write_text(out_path, j.dump(2) + "\n");
  return report.implication_holds ? kExitOk : kExitVerdictMismatch;
}

int run_theorem3(const std::string& mode_token, bool with_lp, std::size_t lp_size,
                 const std::string& out_path) {
  ContextualityMode mode;
  if (mode_token == "both-nc") mode = ContextualityMode::BothNoncontextual;
  else if (mode_token == "pure-ctx") mode = ContextualityMode::PureContextualAllowed;
  else if (mode_token == "mixed-ctx") mode = ContextualityMode::MixedContextualAllowed;
  else
    throw std::invalid_argument("unknown mode '" + mode_token +
                                "' (both-nc, pure-ctx, mixed-ctx)");
  const FeasibilityCertificate cert = theorem3_enumerate(mode);
  Json j = certificate_to_json(cert);
  bool agree = true;
  if (with_lp) {
    const FeasibilityCertificate lp = theorem3_lp(lp_size, mode);
    agree = lp.feasible == cert.feasible;
    j["lp"] = Json{{"space_size", lp_size},
                   {"feasible", lp.feasible},
                   {"residual", lp.lp_residual},
                   {"agrees", agree}};
  }
  write_text(out_path, j.dump(2) + "\n");

  const bool expected = mode == ContextualityMode::BothNoncontextual
                            ? !cert.feasible
                            : cert.feasible && cert.witness_residual <= 1e-9;
  return expected && agree ? kExitOk : kExitVerdictMismatch;
}

int run_overlaps(const std::string& model_path, const RunConfig& config,
                 double min_fidelity, const std::string& out_path) {
  const OntologicalModel model = load_model(model_path);
  SamplerOptions opt;
  opt.pair_budget = config.pair_budget;
  opt.seed = config.seed;
  opt.min_fidelity = min_fidelity;
  const auto rows = overlap_rows(model, sample_pairs(model, opt));
  std::ostringstream csv;
  write_overlaps_csv(csv, rows);
  write_text(out_path, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ontoscope: build, verify, and classify discretized ontological models "
      "of small quantum systems"};
  app.require_subcommand(1);

  RunConfig config;
  apply_seed_env(config);
  std::string out_path;
  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", config.seed,
                    "random seed (the ONTOSCOPE_SEED variable overrides the default)");
  };

  auto* zoo = app.add_subcommand("zoo", "write a built-in model to a JSON file");
  add_seed(zoo);
  std::string zoo_kind;
  std::size_t zoo_states = 20;
  double zoo_fraction = 0.5;
  zoo->add_option("kind", zoo_kind, "ks, bb, witness, or truncated")->required();
  zoo->add_option("--n", config.grid_size, "grid size")->capture_default_str();
  zoo->add_option("--states", zoo_states, "number of extra Haar-random states")->capture_default_str();
  zoo->add_option("--fraction", zoo_fraction, "truncated: support fraction to remove")->capture_default_str();
  zoo->add_option("-o,--out", out_path, "output file (default <kind>.json)");

  auto* classify = app.add_subcommand("classify", "classify a model file");
  add_seed(classify);
  std::string model_path;
  double min_fidelity = 0.05;
  classify->add_option("model", model_path, "model JSON file")->required();
  classify->add_option("--tol", config.tolerance, "classification tolerance")->capture_default_str();
  classify->add_option("--pairs", config.pair_budget, "pair budget")->capture_default_str();
  classify->add_option("--min-fidelity", min_fidelity,
                       "skip pairs with squared overlap below this")->capture_default_str();
  classify->add_option("-o,--out", out_path, "report file (default stdout)");

  auto* theorem = app.add_subcommand("theorem", "run one of the three theorem checks");
  add_seed(theorem);
  int which = 0;
  std::string chi_token = "0", eta_token = "+", mode_token = "both-nc";
  std::string prep1, prep2;
  bool with_lp = false;
  std::size_t lp_size = 6;
  double theorem_tol = 3e-2;
  theorem->add_option("which", which, "1, 2, or 3")->required();
  theorem->add_option("--model", model_path, "model JSON file");
  theorem->add_option("--chi", chi_token, "first basis state (theorem 1)")->capture_default_str();
  theorem->add_option("--eta", eta_token, "second basis state (theorem 1)")->capture_default_str();
  theorem->add_option("--prep1", prep1, "first procedure label (theorem 2)");
  theorem->add_option("--prep2", prep2, "second procedure label (theorem 2)");
  theorem->add_option("--mode", mode_token,
                      "theorem 3 mode: both-nc, pure-ctx, mixed-ctx")->capture_default_str();
  theorem->add_flag("--lp", with_lp, "cross-check theorem 3 with the feasibility solver");
  theorem->add_option("--lp-size", lp_size, "space size for the solver")->capture_default_str();
  theorem->add_option("--tol", theorem_tol, "verdict tolerance")->capture_default_str();
  theorem->add_option("--n", config.grid_size, "grid size for freshly built models")->capture_default_str();
  theorem->add_option("-o,--out", out_path, "report file (default stdout)");

  auto* overlaps = app.add_subcommand("overlaps", "emit per-pair overlap metrics as CSV");
  add_seed(overlaps);
  overlaps->add_option("model", model_path, "model JSON file")->required();
  overlaps->add_option("--pairs", config.pair_budget, "pair budget")->capture_default_str();
  overlaps->add_option("--min-fidelity", min_fidelity,
                       "skip pairs with squared overlap below this")->capture_default_str();
  overlaps->add_option("-o,--out", out_path, "CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    config.validate();
    if (zoo->parsed())
      return run_zoo(zoo_kind, config, zoo_states, zoo_fraction, out_path);
    if (classify->parsed()) {
      std::optional<double> tol;
      if (classify->count("--tol")) tol = config.tolerance;
      return run_classify(model_path, config, tol, min_fidelity, out_path);
    }
    if (theorem->parsed()) {
      switch (which) {
        case 1:
          return run_theorem1(config, model_path, chi_token, eta_token,
                              theorem_tol, out_path);
        case 2: {
          if (model_path.empty())
            throw std::invalid_argument("theorem 2 needs --model");
          return run_theorem2(model_path, prep1, prep2, theorem_tol, out_path);
        }
        case 3:
          return run_theorem3(mode_token, with_lp, lp_size, out_path);
        default:
          throw std::invalid_argument("theorem must be 1, 2, or 3");
      }
    }
    if (overlaps->parsed())
      return run_overlaps(model_path, config, min_fidelity, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
