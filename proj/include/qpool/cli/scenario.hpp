// Copyright 2026 The qpool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scenario configs: strict JSON schema per kind, decoding into typed inputs,
// and dispatch to the library. Every config is a flat object with "kind",
// an optional unsigned "seed", and the kind's own fields; unknown fields are
// rejected.

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qpool/audit.hpp"
#include "qpool/classical_bayes.hpp"
#include "qpool/cli/json_io.hpp"
#include "qpool/cli/report.hpp"
#include "qpool/estimation.hpp"
#include "qpool/fusion.hpp"
#include "qpool/measurement.hpp"

namespace qpool::cli {

enum class ScenarioKind { PoolClassical, History, Consistency, Realize, Ambiguity, Fuse, Estimate, ReproducePaper };

inline const std::vector<std::pair<ScenarioKind, std::string>>& kind_names() {
  static const std::vector<std::pair<ScenarioKind, std::string>> names{
      {ScenarioKind::PoolClassical, "pool-classical"}, {ScenarioKind::History, "history"},
      {ScenarioKind::Consistency, "consistency"},      {ScenarioKind::Realize, "realize"},
      {ScenarioKind::Ambiguity, "ambiguity"},          {ScenarioKind::Fuse, "fuse"},
      {ScenarioKind::Estimate, "estimate"},            {ScenarioKind::ReproducePaper, "reproduce-paper"}};
  return names;
}

inline std::string to_string(ScenarioKind k) {
  for (const auto& [kind, name] : kind_names()) {
    if (kind == k) return name;
  }
  return "?";
}

inline std::set<std::string> allowed_fields(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::PoolClassical: return {"P", "Q"};
    case ScenarioKind::History: return {"steps", "known", "initial_state"};
    case ScenarioKind::Consistency: return {"rhoA", "rhoB", "tol"};
    case ScenarioKind::Realize: return {"rhoA", "rhoB", "sigma", "alpha", "beta", "tol"};
    case ScenarioKind::Ambiguity: return {"rhoA", "rhoB", "sigma1", "sigma2", "tol"};
    case ScenarioKind::Fuse: return {"rhoA", "rhoB", "family", "samples", "weight_exponent"};
    case ScenarioKind::Estimate: return {"alice", "bob", "mc_samples"};
    case ScenarioKind::ReproducePaper: return {};
  }
  return {};
}

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::ReproducePaper;
  std::optional<std::uint64_t> seed;
  json fields = json::object();  // kind-specific fields only

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

inline json to_json(const ScenarioConfig& c) {
  json j = c.fields;
  j["kind"] = to_string(c.kind);
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

// ---------------------------------------------------------------------------
// Typed inputs

struct PoolInput {
  ProbDist p, q;
};
struct HistoryInput {
  MeasurementHistory history;
  std::optional<KnownOutcomes> known;
  std::optional<DensityMatrix> initial;
};
struct ConsistencyInput {
  DensityMatrix rho_a, rho_b;
  double tol;
};
struct RealizeInput {
  DensityMatrix rho_a, rho_b, sigma;
  std::optional<double> alpha, beta;
  double tol;
};
struct AmbiguityInput {
  DensityMatrix rho_a, rho_b, sigma1, sigma2;
  double tol;
};
struct FuseInput {
  DensityMatrix rho_a, rho_b;
  HistoryMeasureConfig measure;
};
struct EstimateInput {
  std::vector<DiagonalEffect> alice, bob;
  std::size_t mc_samples;
};
struct ReproduceInput {};

using ScenarioInput = std::variant<PoolInput, HistoryInput, ConsistencyInput, RealizeInput, AmbiguityInput,
                                   FuseInput, EstimateInput, ReproduceInput>;

namespace detail {

inline std::string ptr(const std::string& key) { return "/" + key; }

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const qpool::Error& e) {
    throw ConfigError(path, std::string(e.name()) + ": " + e.what());
  }
}

inline const json& require(const json& obj, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(ptr(key), "required field missing");
  return obj.at(key);
}

inline DensityMatrix density(const json& obj, const std::string& key) {
  return wrap(ptr(key), [&] { return DensityMatrix(matrix_from_json(require(obj, key), ptr(key))); });
}

inline ProbDist prob(const json& obj, const std::string& key) {
  return wrap(ptr(key), [&] { return ProbDist(real_vector_from_json(require(obj, key), ptr(key))); });
}

inline std::optional<double> opt_real(const json& obj, const std::string& key) {
  if (!obj.contains(key)) return std::nullopt;
  return to_double(rational_from_json(obj.at(key), ptr(key)));
}

inline std::size_t count(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError(path, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

inline void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& base) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(base + "/" + it.key(), "unknown field");
  }
}

inline std::vector<ComplexMatrix> matrix_list(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty list of matrices");
  std::vector<ComplexMatrix> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(matrix_from_json(v[k], path + "/" + std::to_string(k)));
  return out;
}

inline HistoryStep history_step(const json& s, const std::string& path) {
  if (!s.is_object()) throw ConfigError(path, "expected an object");
  check_keys(s, {"owner", "povm", "kraus", "unitaries"}, path);
  if (!s.contains("owner") || !s["owner"].is_string()) throw ConfigError(path + "/owner", "expected a string");
  const auto owner = owner_from_string(s["owner"].get<std::string>());
  if (!owner) throw ConfigError(path + "/owner", "expected alice, bob or eve");
  if (s.contains("povm") == s.contains("kraus")) {
    throw ConfigError(path, "exactly one of 'povm' and 'kraus' is required");
  }
  if (s.contains("kraus")) {
    if (s.contains("unitaries")) throw ConfigError(path + "/unitaries", "only allowed together with 'povm'");
    auto ops = matrix_list(s["kraus"], path + "/kraus");
    return wrap(path + "/kraus", [&] { return HistoryStep{*owner, KrausPovm(std::move(ops))}; });
  }
  auto effects = matrix_list(s["povm"], path + "/povm");
  std::optional<std::vector<ComplexMatrix>> unitaries;
  if (s.contains("unitaries")) unitaries = matrix_list(s["unitaries"], path + "/unitaries");
  return wrap(path + "/povm", [&] {
    return HistoryStep{*owner, KrausPovm::from_povm(Povm::from_matrices(effects), unitaries)};
  });
}

inline std::vector<DiagonalEffect> effect_list(const json& obj, const std::string& key) {
  std::vector<DiagonalEffect> out;
  if (!obj.contains(key)) return out;
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(ptr(key), "expected an array of effect parameters");
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string p = ptr(key) + "/" + std::to_string(k);
    const Rational x = rational_from_json(v[k], p);
    out.push_back(wrap(p, [&] { return DiagonalEffect(x); }));
  }
  return out;
}

}  // namespace detail

/// Builds a config from parsed JSON, checking the envelope and field names.
inline ScenarioConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("/kind", "required string field missing");
  const std::string name = j["kind"].get<std::string>();
  std::optional<ScenarioKind> kind;
  for (const auto& [k, n] : kind_names()) {
    if (n == name) kind = k;
  }
  if (!kind) throw ConfigError("/kind", "unknown scenario kind '" + name + "'");

  ScenarioConfig cfg;
  cfg.kind = *kind;
  const auto allowed = allowed_fields(*kind);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "kind") continue;
    if (it.key() == "seed") {
      if (!it.value().is_number_unsigned() &&
          !(it.value().is_number_integer() && it.value().get<std::int64_t>() >= 0)) {
        throw ConfigError("/seed", "expected a non-negative integer");
      }
      cfg.seed = it.value().get<std::uint64_t>();
      continue;
    }
    if (!allowed.count(it.key())) throw ConfigError("/" + it.key(), "unknown field for kind '" + name + "'");
    cfg.fields[it.key()] = it.value();
  }
  return cfg;
}

inline ScenarioConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("JSON syntax error: ") + e.what());
  }
  return parse_config(j);
}

/// Full schema validation: decodes every field into library types.
inline ScenarioInput decode(const ScenarioConfig& cfg) {
  using namespace detail;
  const json& f = cfg.fields;
  switch (cfg.kind) {
    case ScenarioKind::PoolClassical: {
      auto p = prob(f, "P");
      auto q = prob(f, "Q");
      if (p.size() != q.size()) throw ConfigError("/Q", "P and Q differ in length");
      return PoolInput{std::move(p), std::move(q)};
    }
    case ScenarioKind::History: {
      const json& steps = require(f, "steps");
      if (!steps.is_array() || steps.empty()) throw ConfigError("/steps", "expected a non-empty array");
      std::vector<HistoryStep> list;
      for (std::size_t k = 0; k < steps.size(); ++k) list.push_back(history_step(steps[k], "/steps/" + std::to_string(k)));
      auto history = wrap("/steps", [&] { return MeasurementHistory(std::move(list)); });
      std::optional<KnownOutcomes> known;
      if (f.contains("known")) {
        const json& k = f["known"];
        if (!k.is_object()) throw ConfigError("/known", "expected an object");
        check_keys(k, {"i", "j", "e"}, "/known");
        KnownOutcomes ko;
        if (k.contains("i")) ko.i = count(k["i"], "/known/i");
        if (k.contains("j")) ko.j = count(k["j"], "/known/j");
        if (k.contains("e")) ko.e = count(k["e"], "/known/e");
        known = ko;
      }
      std::optional<DensityMatrix> initial;
      if (f.contains("initial_state")) initial = density(f, "initial_state");
      if (initial && initial->dim() != history.dim()) {
        throw ConfigError("/initial_state", "dimension does not match the history");
      }
      return HistoryInput{std::move(history), known, std::move(initial)};
    }
    case ScenarioKind::Consistency:
      return ConsistencyInput{density(f, "rhoA"), density(f, "rhoB"), opt_real(f, "tol").value_or(1e-9)};
    case ScenarioKind::Realize:
      return RealizeInput{density(f, "rhoA"), density(f, "rhoB"), density(f, "sigma"),
                          opt_real(f, "alpha"), opt_real(f, "beta"), opt_real(f, "tol").value_or(1e-9)};
    case ScenarioKind::Ambiguity:
      return AmbiguityInput{density(f, "rhoA"), density(f, "rhoB"), density(f, "sigma1"), density(f, "sigma2"),
                            opt_real(f, "tol").value_or(1e-9)};
    case ScenarioKind::Fuse: {
      HistoryMeasureConfig m;
      if (f.contains("family")) {
        const json& fam = f["family"];
        auto parsed = fam.is_string() ? history_family_from_string(fam.get<std::string>()) : std::nullopt;
        if (!parsed) throw ConfigError("/family", "expected haar-intersection or haar-intersection-unweighted");
        m.family = *parsed;
      }
      if (f.contains("samples")) m.samples = count(f["samples"], "/samples");
      if (m.samples == 0) throw ConfigError("/samples", "must be at least 1");
      m.weight_exponent = opt_real(f, "weight_exponent").value_or(1.0);
      m.seed = cfg.seed.value_or(0);
      return FuseInput{density(f, "rhoA"), density(f, "rhoB"), m};
    }
    case ScenarioKind::Estimate: {
      std::size_t mc = f.contains("mc_samples") ? count(f["mc_samples"], "/mc_samples") : 0;
      return EstimateInput{effect_list(f, "alice"), effect_list(f, "bob"), mc};
    }
    case ScenarioKind::ReproducePaper: return ReproduceInput{};
  }
  throw ConfigError("/kind", "unhandled kind");
}

// ---------------------------------------------------------------------------
// Execution

namespace detail {

inline json exact_state_json(const ExactQubitState& s) {
  return {{"exact", {s.p0.str(), s.p1.str()}}, {"diagonal", {to_double(s.p0), to_double(s.p1)}}};
}

inline json strategy_json(const StrategyComparison& c) {
  return {{"alpha", c.alpha.str()},
          {"beta", c.beta.str()},
          {"gamma", c.gamma.str()},
          {"rho_A", exact_state_json(c.rho_a)},
          {"rho_A_prime", exact_state_json(c.rho_a_prime)},
          {"sigma", exact_state_json(c.sigma)},
          {"sigma_prime", exact_state_json(c.sigma_prime)},
          {"pooled_gap", to_double(c.pooled_gap())}};
}

inline json polynomial_json(const PolynomialDensity& q) {
  json arr = json::array();
  for (const auto& c : q.coefficients()) arr.push_back(c.str());
  return arr;
}

inline void run_pool(const PoolInput& in, RunReport& r) {
  const auto out = pool_classical(in.p, in.q);
  r.outputs["result"] = out.values();
  r.outputs["entropy_bits"] = {{"P", shannon_entropy(in.p)}, {"Q", shannon_entropy(in.q)}, {"result", shannon_entropy(out)}};
  Table t{{"n", "P", "Q", "pooled"}, {}};
  for (std::size_t n = 0; n < out.size(); ++n) t.rows.push_back({n, in.p[n], in.q[n], out[n]});
  r.tables["pooled"] = std::move(t);
}

inline void run_history(const HistoryInput& in, RunReport& r) {
  const auto flat = flatten_history(in.history);
  r.outputs["i_max"] = flat.i_max();
  r.outputs["j_max"] = flat.j_max();
  r.outputs["e_max"] = flat.e_max();
  r.outputs["completeness_residual"] = flat.completeness_residual();
  r.outputs["initial_state"] = in.initial ? "configured" : "maximally mixed";

  auto state_rows = [&](auto known_for, std::size_t n, const char* index_name) {
    json list = json::array();
    Table t{{index_name, "probability"}, {}};
    for (std::size_t k = 0; k < n; ++k) {
      const KnownOutcomes known = known_for(k);
      double prob = 0.0;
      json entry = {{index_name, k}};
      try {
        const auto c = conditional_state(flat, known, in.initial);
        prob = c.probability;
        entry["state"] = matrix_to_json(c.state.matrix());
      } catch (const ImpossibleOutcomeError&) {
        entry["state"] = nullptr;
      }
      entry["probability"] = prob;
      list.push_back(std::move(entry));
      t.rows.push_back({k, prob});
    }
    return std::make_pair(std::move(list), std::move(t));
  };
  auto [alice, alice_t] = state_rows([](std::size_t k) { return KnownOutcomes{k, {}, {}}; }, flat.i_max(), "i");
  auto [bob, bob_t] = state_rows([](std::size_t k) { return KnownOutcomes{{}, k, {}}; }, flat.j_max(), "j");
  r.outputs["alice"] = std::move(alice);
  r.outputs["bob"] = std::move(bob);
  r.tables["alice_outcomes"] = std::move(alice_t);
  r.tables["bob_outcomes"] = std::move(bob_t);

  constexpr std::size_t kJointLimit = 4096;
  if (flat.i_max() * flat.j_max() <= kJointLimit) {
    Table t{{"i", "j", "probability"}, {}};
    for (std::size_t i = 0; i < flat.i_max(); ++i) {
      for (std::size_t j = 0; j < flat.j_max(); ++j) {
        double prob = 0.0;
        try {
          prob = conditional_state(flat, {i, j, {}}, in.initial).probability;
        } catch (const ImpossibleOutcomeError&) {
        }
        t.rows.push_back({i, j, prob});
      }
    }
    r.tables["joint_outcomes"] = std::move(t);
  }
  if (in.known) {
    const auto c = conditional_state(flat, *in.known, in.initial);
    r.outputs["conditional"] = {{"probability", c.probability}, {"state", matrix_to_json(c.state.matrix())}};
  }
}

inline void run_consistency(const ConsistencyInput& in, RunReport& r) {
  const auto c = check_consistency(in.rho_a, in.rho_b, in.tol);
  r.outputs["consistent"] = c.consistent;
  r.outputs["intersection_dim"] = c.intersection.dim();
  r.outputs["intersection_projector"] = matrix_to_json(c.intersection.projector());
}

inline json observer_json(const ObserverOutcomes& o) {
  json states = json::array();
  for (const auto& s : o.states) states.push_back(matrix_to_json(s.matrix()));
  return {{"recovered", matrix_to_json(o.recovered.matrix())}, {"states", std::move(states)}};
}

inline Table outcome_table(const ObserverOutcomes& o) {
  Table t{{"n", "P", "P_formula"}, {}};
  for (std::size_t n = 0; n < o.probability.size(); ++n) {
    t.rows.push_back({n + 1, o.probability[n], o.probability_formula[n]});
  }
  return t;
}

inline json realization_json(const Realization& z, const DensityMatrix& rho_a, const DensityMatrix& rho_b) {
  const auto& sc = z.scenario;
  const auto& dec = sc.decomposition;
  json wa = json::array(), wb = json::array();
  for (const auto& t : dec.remainder_a) wa.push_back(t.weight);
  for (const auto& t : dec.remainder_b) wb.push_back(t.weight);
  double p_err = 0.0;
  for (const auto* o : {&z.simulation.alice, &z.simulation.bob}) {
    for (std::size_t n = 0; n < o->probability.size(); ++n) {
      p_err = std::max(p_err, std::abs(o->probability[n] - o->probability_formula[n]));
    }
  }
  return {{"alpha_max", z.alpha_max},
          {"beta_max", z.beta_max},
          {"alpha", dec.alpha},
          {"beta", dec.beta},
          {"remainder_weights_A", std::move(wa)},
          {"remainder_weights_B", std::move(wb)},
          {"dims", {{"S", sc.d_s}, {"S_A", sc.d_a}, {"S_B", sc.d_b}}},
          {"N", sc.n},
          {"K", sc.k},
          {"L", sc.l},
          {"norm_sq", z.simulation.norm_sq},
          {"alice", observer_json(z.simulation.alice)},
          {"bob", observer_json(z.simulation.bob)},
          {"charlie", matrix_to_json(z.simulation.charlie.matrix())},
          {"charlie_probability", z.simulation.charlie_probability},
          {"errors",
           {{"rho_A_recovery", max_abs(z.simulation.alice.recovered.matrix() - rho_a.matrix())},
            {"rho_B_recovery", max_abs(z.simulation.bob.recovered.matrix() - rho_b.matrix())},
            {"charlie_vs_sigma", z.charlie_error},
            {"P_formula", p_err}}}};
}

inline void run_realize(const RealizeInput& in, RunReport& r) {
  const auto z = realize(in.rho_a, in.rho_b, in.sigma, in.alpha, in.beta, in.tol);
  r.outputs = realization_json(z, in.rho_a, in.rho_b);
  r.tables["alice_outcomes"] = outcome_table(z.simulation.alice);
  r.tables["bob_outcomes"] = outcome_table(z.simulation.bob);
}

inline void run_ambiguity(const AmbiguityInput& in, RunReport& r) {
  const auto a = demonstrate_ambiguity(in.rho_a, in.rho_b, in.sigma1, in.sigma2, in.tol);
  r.outputs["distance"] = a.charlie_distance;
  r.outputs["intersection_dim"] = a.intersection.dim();
  json runs = json::array();
  Table t{{"sigma", "alpha", "beta", "N", "charlie_error"}, {}};
  for (std::size_t k = 0; k < a.runs.size(); ++k) {
    runs.push_back(realization_json(a.runs[k], in.rho_a, in.rho_b));
    const auto& dec = a.runs[k].scenario.decomposition;
    t.rows.push_back({k + 1, dec.alpha, dec.beta, a.runs[k].scenario.n, a.runs[k].charlie_error});
  }
  r.outputs["runs"] = std::move(runs);
  r.tables["runs"] = std::move(t);
}

inline void run_fuse(const FuseInput& in, RunReport& r) {
  const auto state = averaged_fusion(in.rho_a, in.rho_b, in.measure);
  r.outputs["state"] = matrix_to_json(state.matrix());
  r.outputs["family"] = std::string(to_string(in.measure.family));
  r.outputs["samples"] = in.measure.samples;
  r.outputs["weight_exponent"] = in.measure.weight_exponent;
  r.outputs["label"] = "EXPLORATORY";
  r.provenance.push_back(
      "EXPLORATORY: no canonical measure over measurement histories is known; the result depends on the chosen "
      "family");
}

inline void run_estimate(const EstimateInput& in, std::uint64_t seed, RunReport& r) {
  const auto qa = qubit_diagonal_posterior(in.alice);
  const auto qb = qubit_diagonal_posterior(in.bob);
  const auto sa = exact_predictive(qa);
  const auto sb = exact_predictive(qb);
  const auto pooled = exact_pooled(qa, qb);
  r.outputs["posterior_A"] = polynomial_json(qa);
  r.outputs["posterior_B"] = polynomial_json(qb);
  r.outputs["rho_A"] = exact_state_json(sa);
  r.outputs["rho_B"] = exact_state_json(sb);
  r.outputs["pooled"] = exact_state_json(pooled);
  Table t{{"observer", "p0_exact", "p0", "p1"}, {}};
  t.rows.push_back({"A", sa.p0.str(), to_double(sa.p0), to_double(sa.p1)});
  t.rows.push_back({"B", sb.p0.str(), to_double(sb.p0), to_double(sb.p1)});
  t.rows.push_back({"pooled", pooled.p0.str(), to_double(pooled.p0), to_double(pooled.p1)});
  r.tables["predictive"] = std::move(t);

  if (in.mc_samples > 0) {
    const auto prior = sample_flat_ensemble(2, in.mc_samples, seed);
    auto update = [&](const std::vector<DiagonalEffect>& effects, WeightedStateEnsemble ens) {
      for (const auto& e : effects) ens = posterior_update(ens, e.effect());
      return ens;
    };
    const auto ea = update(in.alice, prior);
    const auto eb = update(in.bob, prior);
    const auto eab = update(in.bob, ea);
    const auto ma = predictive_state(ea), mb = predictive_state(eb), mab = predictive_state(eab);
    const double dev = std::max({max_abs(ma.matrix() - sa.density().matrix()),
                                 max_abs(mb.matrix() - sb.density().matrix()),
                                 max_abs(mab.matrix() - pooled.density().matrix())});
    r.outputs["monte_carlo"] = {{"samples", in.mc_samples},
                                {"rho_A", matrix_to_json(ma.matrix())},
                                {"rho_B", matrix_to_json(mb.matrix())},
                                {"pooled", matrix_to_json(mab.matrix())},
                                {"max_deviation_from_exact", dev}};
  }
}

inline void run_reproduce(RunReport& r) {
  const auto audit = reproduce_paper_example();
  r.outputs["published_parameters"] = strategy_json(audit.published);
  r.outputs["alternative_parameters"] = strategy_json(audit.alternative);
  r.outputs["symmetry_argument"] = audit.symmetry_argument;
  r.outputs["conclusion_preserved"] = audit.conclusion_preserved;
  Table t{{"quantity", "published", "computed_exact", "computed", "prediction", "status", "note"}, {}};
  for (const auto& row : audit.rows) {
    t.rows.push_back({row.quantity, row.printed.empty() ? "-" : row.printed, row.computed.str(),
                      to_double(row.computed), row.prediction.empty() ? "-" : row.prediction,
                      to_string(row.status), row.note});
  }
  r.tables["audit"] = std::move(t);
  r.provenance.push_back("MATCH: published value reproduced exactly by the rational integrator");
  r.provenance.push_back("DISCREPANCY: published value differs from the exact computation; see note");
  r.provenance.push_back("DERIVED: no published value; computed for the alternative instance");
}

}  // namespace detail

struct RunOptions {
  std::optional<std::uint64_t> seed_override;
  bool timing = true;
};

struct RunResult {
  RunReport report;
  int exit_code;  // 0 ok, 2 numerical failure
};

/// Decodes and runs a config. Config errors propagate as ConfigError;
/// numerical failures are captured in the report with exit code 2.
inline RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt = {}) {
  ScenarioConfig effective = cfg;
  if (opt.seed_override) effective.seed = opt.seed_override;
  const ScenarioInput input = decode(effective);

  RunReport r;
  r.kind = to_string(effective.kind);
  r.seed = effective.seed.value_or(0);
  r.inputs = effective.fields;
  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    std::visit(
        [&](const auto& in) {
          using T = std::decay_t<decltype(in)>;
          if constexpr (std::is_same_v<T, PoolInput>) detail::run_pool(in, r);
          else if constexpr (std::is_same_v<T, HistoryInput>) detail::run_history(in, r);
          else if constexpr (std::is_same_v<T, ConsistencyInput>) detail::run_consistency(in, r);
          else if constexpr (std::is_same_v<T, RealizeInput>) detail::run_realize(in, r);
          else if constexpr (std::is_same_v<T, AmbiguityInput>) detail::run_ambiguity(in, r);
          else if constexpr (std::is_same_v<T, FuseInput>) detail::run_fuse(in, r);
          else if constexpr (std::is_same_v<T, EstimateInput>) detail::run_estimate(in, r.seed, r);
          else detail::run_reproduce(r);
        },
        input);
  } catch (const qpool::Error& e) {
    r.outputs = json::object();
    r.tables.clear();
    r.error = ReportError{e.name(), e.what()};
    code = 2;
  }
  if (opt.timing) {
    r.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return {std::move(r), code};
}

}  // namespace qpool::cli
