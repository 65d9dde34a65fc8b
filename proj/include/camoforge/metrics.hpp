// Copyright 2026 The camoforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "camoforge/attack.hpp"
#include "camoforge/cnf.hpp"
#include "camoforge/obfuscate.hpp"
#include "camoforge/oracle.hpp"
#include "camoforge/simulate.hpp"

namespace camoforge {

inline constexpr std::size_t kExhaustiveInputLimit = 20;

namespace detail {

// Inputs of `c` in the data-input order of `locked`, matched by name.
inline std::vector<std::size_t> match_inputs(const LockedCircuit& locked, const Circuit& c) {
  auto data = locked.data_inputs();
  if (data.size() != c.inputs().size()) throw std::invalid_argument("primary input counts differ");
  std::vector<std::size_t> slot;
  for (const auto& n : data) {
    auto it = std::find(c.inputs().begin(), c.inputs().end(), n);
    if (it == c.inputs().end()) throw std::invalid_argument("input '" + n + "' missing from the reference circuit");
    slot.push_back(static_cast<std::size_t>(it - c.inputs().begin()));
  }
  return slot;
}

}  // namespace detail

// True iff locked@key matches `original` on every input (deterministic netlists).
inline bool verify_key(const LockedCircuit& locked, const Circuit& original, const BitString& key) {
  if (key.size() != locked.key_inputs.size()) throw std::invalid_argument("key width does not match key inputs");
  if (original.outputs().size() != locked.circuit.outputs().size()) throw std::invalid_argument("primary output counts differ");
  auto slot = detail::match_inputs(locked, original);
  std::size_t n = slot.size();
  if (n <= kExhaustiveInputLimit) {
    Simulator a(locked.circuit, {}, locked.key_inputs);
    Simulator b(original);
    std::vector<uint64_t> da(n), db(n), oa(a.num_outputs()), ob(b.num_outputs());
    uint64_t total = uint64_t{1} << n;
    for (uint64_t base = 0; base < total; base += 64) {
      for (std::size_t i = 0; i < n; ++i) {
        uint64_t w = 0;
        for (unsigned l = 0; l < 64; ++l) if (((base + l) >> i) & 1) w |= uint64_t{1} << l;
        da[i] = w;
        db[slot[i]] = w;
      }
      a.eval_block(da, key, EvalMode::deterministic(), 0, oa);
      b.eval_lanes(db, EvalMode::deterministic(), 0, ob);
      uint64_t mask = total - base >= 64 ? ~uint64_t{0} : (uint64_t{1} << (total - base)) - 1;
      for (std::size_t o = 0; o < oa.size(); ++o) if ((oa[o] ^ ob[o]) & mask) return false;
    }
    return true;
  }
  sat::Solver s;
  std::vector<int> x;
  for (std::size_t i = 0; i < n; ++i) x.push_back(s.new_var());
  std::vector<Signal> ia(locked.circuit.inputs().size()), ib(n);
  auto data = locked.data_inputs();
  for (std::size_t i = 0, d = 0; i < ia.size(); ++i) {
    const auto& name = locked.circuit.inputs()[i];
    auto kit = std::find(locked.key_inputs.begin(), locked.key_inputs.end(), name);
    if (kit != locked.key_inputs.end()) {
      ia[i] = Signal::constant(key.get(static_cast<std::size_t>(kit - locked.key_inputs.begin())));
    } else {
      ia[i] = Signal::literal(x[d]);
      ib[slot[d]] = Signal::literal(x[d]);
      ++d;
    }
  }
  auto na = encode_circuit(s, locked.circuit, ia);
  auto nb = encode_circuit(s, original, ib);
  std::vector<int> diff;
  for (std::size_t o = 0; o < original.outputs().size(); ++o) {
    Signal d = xor_signal(s, na[locked.circuit.output_ids()[o]], nb[original.output_ids()[o]]);
    if (d.is_constant()) {
      if (d.value) return false;
      continue;
    }
    diff.push_back(d.lit);
  }
  if (diff.empty()) return true;
  s.add_clause(diff);
  return s.solve() == sat::Result::kUnsat;
}

// locked@key_a and locked@key_b compute the same function.
inline bool keys_equivalent(const LockedCircuit& locked, const BitString& key_a, const BitString& key_b) {
  Simulator sim(locked.circuit, {}, locked.key_inputs);
  sim.check_key(key_a);
  sim.check_key(key_b);
  std::size_t n = sim.num_data_inputs();
  if (n <= kExhaustiveInputLimit) {
    std::vector<uint64_t> d(n), oa(sim.num_outputs()), ob(sim.num_outputs());
    uint64_t total = uint64_t{1} << n;
    for (uint64_t base = 0; base < total; base += 64) {
      for (std::size_t i = 0; i < n; ++i) {
        uint64_t w = 0;
        for (unsigned l = 0; l < 64; ++l) if (((base + l) >> i) & 1) w |= uint64_t{1} << l;
        d[i] = w;
      }
      sim.eval_block(d, key_a, EvalMode::deterministic(), 0, oa);
      sim.eval_block(d, key_b, EvalMode::deterministic(), 0, ob);
      uint64_t mask = total - base >= 64 ? ~uint64_t{0} : (uint64_t{1} << (total - base)) - 1;
      for (std::size_t o = 0; o < oa.size(); ++o) if ((oa[o] ^ ob[o]) & mask) return false;
    }
    return true;
  }
  sat::Solver s;
  const auto& inputs = locked.circuit.inputs();
  std::vector<Signal> ia(inputs.size()), ib(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    auto kit = std::find(locked.key_inputs.begin(), locked.key_inputs.end(), inputs[i]);
    if (kit == locked.key_inputs.end()) {
      ia[i] = ib[i] = Signal::literal(s.new_var());
    } else {
      std::size_t k = static_cast<std::size_t>(kit - locked.key_inputs.begin());
      ia[i] = Signal::constant(key_a.get(k));
      ib[i] = Signal::constant(key_b.get(k));
    }
  }
  auto na = encode_circuit(s, locked.circuit, ia);
  auto nb = encode_circuit(s, locked.circuit, ib);
  std::vector<int> diff;
  for (NetId o : locked.circuit.output_ids()) {
    Signal d = xor_signal(s, na[o], nb[o]);
    if (d.is_constant()) {
      if (d.value) return false;
      continue;
    }
    diff.push_back(d.lit);
  }
  if (diff.empty()) return true;
  s.add_clause(diff);
  return s.solve() == sat::Result::kUnsat;
}

// locked@key against locked@correct_key.
inline bool verify_key(const LockedCircuit& locked, const BitString& key) {
  return keys_equivalent(locked, key, locked.correct_key);
}

struct HdOer {
  double hd = 0;
  double oer = 0;
};

// N uniform random patterns, one stochastic sample from each side per pattern.
// HD is the mean fraction of differing output bits, OER the fraction of patterns
// with any difference.
inline HdOer hd_oer(const Simulator& a, const BitString& key_a, const Simulator& b, const BitString& key_b, uint64_t patterns,
                    uint64_t seed) {
  if (patterns == 0) throw std::invalid_argument("pattern count must be at least 1");
  if (a.num_data_inputs() != b.num_data_inputs() || a.num_outputs() != b.num_outputs()) {
    throw std::invalid_argument("HD/OER needs circuits with equal input and output widths");
  }
  a.check_key(key_a);
  b.check_key(key_b);
  std::size_t n = a.num_data_inputs(), m = a.num_outputs();
  Rng rng(mix64(seed ^ 0x6864ull));
  EvalMode ma = EvalMode::random(seed, 1), mb = EvalMode::random(seed, 2);
  std::vector<uint64_t> d(n), oa(m), ob(m);
  double hd_sum = 0;
  uint64_t differing = 0;
  for (uint64_t base = 0; base < patterns; base += 64) {
    for (auto& w : d) w = rng.next();
    a.eval_block(d, key_a, ma, base, oa);
    b.eval_block(d, key_b, mb, base, ob);
    unsigned lanes = static_cast<unsigned>(std::min<uint64_t>(64, patterns - base));
    uint64_t mask = lanes == 64 ? ~uint64_t{0} : (uint64_t{1} << lanes) - 1;
    uint64_t any = 0;
    uint64_t bits = 0;
    for (std::size_t o = 0; o < m; ++o) {
      uint64_t x = (oa[o] ^ ob[o]) & mask;
      any |= x;
      bits += static_cast<uint64_t>(std::popcount(x));
    }
    differing += static_cast<uint64_t>(std::popcount(any));
    hd_sum += static_cast<double>(bits) / static_cast<double>(m);
  }
  return {hd_sum / static_cast<double>(patterns), static_cast<double>(differing) / static_cast<double>(patterns)};
}

// ---- campaigns --------------------------------------------------------------

enum class LockScheme { kKeyGates, kCamouflage };
enum class BehaviorKind { kNone, kProbabilistic, kPolymorphic };

inline const char* behavior_name(BehaviorKind b) {
  switch (b) {
    case BehaviorKind::kNone: return "none";
    case BehaviorKind::kProbabilistic: return "prob";
    case BehaviorKind::kPolymorphic: return "poly";
  }
  return "?";
}

inline BehaviorKind behavior_from_name(const std::string& s) {
  if (s == "none") return BehaviorKind::kNone;
  if (s == "prob") return BehaviorKind::kProbabilistic;
  if (s == "poly") return BehaviorKind::kPolymorphic;
  throw std::invalid_argument("unknown behavior '" + s + "' (expected none, prob or poly)");
}

struct CampaignConfig {
  std::string benchmark;
  Circuit circuit;
  LockScheme lock = LockScheme::kKeyGates;
  std::size_t key_gates = 32;
  std::string function_set = "gshe16";
  double camo_fraction = 0.1;
  BehaviorKind behavior = BehaviorKind::kProbabilistic;
  double behavior_fraction = 0.5;  // of all gates of the locked circuit
  double correctness = 0.99;
  bool defended = false;
  DefenseConfig defense;
  AttackKind attack = AttackKind::kSat;
  AttackConfig attack_config;
  uint64_t runs = 1;
  uint64_t master_seed = 1;
  unsigned jobs = 1;

  void validate() const {
    if (runs == 0) throw std::invalid_argument("a campaign needs at least one run");
    if (behavior != BehaviorKind::kNone && !(behavior_fraction > 0 && behavior_fraction <= 1)) {
      throw std::invalid_argument("behavior fraction must lie in (0, 1]");
    }
    attack_config.validate();
  }
};

struct RunRecord {
  uint64_t index = 0;
  uint64_t seed = 0;
  AttackStatus status = AttackStatus::kTimeout;
  bool success = false;
  bool equivalent = false;
  double hd = std::numeric_limits<double>::quiet_NaN();  // NaN unless the run succeeded
  double oer = std::numeric_limits<double>::quiet_NaN();
  double runtime_s = 0;
  uint64_t iterations = 0;
  uint64_t oracle_queries = 0;
};

struct CampaignSummary {
  std::string benchmark;
  std::string attack;
  std::string behavior;
  double pct_prob_gates = 0;
  double correctness = 1;
  uint64_t runs = 0;
  double success_rate = 0;
  double equivalence_rate = 0;
  double mean_hd = std::numeric_limits<double>::quiet_NaN();
  double mean_oer = std::numeric_limits<double>::quiet_NaN();
  double mean_runtime_s = 0;
  double mean_iterations = 0;
  double mean_oracle_queries = 0;
  uint64_t master_seed = 0;
  uint64_t hd_oer_patterns = 0;
  std::vector<RunRecord> records;
};

// A locked and annotated instance as built for run `seed` of a campaign.
struct CampaignInstance {
  LockedCircuit locked;
  Annotations annotations;
};

inline CampaignInstance build_instance(const CampaignConfig& cfg, uint64_t seed) {
  CampaignInstance inst;
  if (cfg.lock == LockScheme::kKeyGates) {
    inst.locked = insert_key_gates(cfg.circuit, cfg.key_gates, derive_seed(seed, 0), cfg.benchmark);
  } else {
    const FunctionSet& set = function_set(cfg.function_set);
    auto eligible = [&](const Gate& g) { return set.index_of(g.function).has_value(); };
    auto sel = select_gates_random(cfg.circuit, cfg.camo_fraction, derive_seed(seed, 0), eligible);
    inst.locked = camouflage(cfg.circuit, sel.gates, set, derive_seed(seed, 0), cfg.benchmark);
  }
  const Circuit& lc = inst.locked.circuit;
  auto count = static_cast<std::size_t>(std::llround(cfg.behavior_fraction * static_cast<double>(lc.gates().size())));
  if (cfg.behavior == BehaviorKind::kProbabilistic) {
    inst.annotations = make_probabilistic(lc, select_gates_count(lc, count, derive_seed(seed, 1)), cfg.correctness);
  } else if (cfg.behavior == BehaviorKind::kPolymorphic) {
    auto eligible = [](const Gate& g) { return supports_polymorphism(g.function); };
    inst.annotations = make_polymorphic(lc, select_gates_count(lc, count, derive_seed(seed, 1), eligible));
  }
  return inst;
}

inline RunRecord run_one(const CampaignConfig& cfg, uint64_t index) {
  RunRecord rec;
  rec.index = index;
  rec.seed = derive_seed(cfg.master_seed, index);
  CampaignInstance inst = build_instance(cfg, rec.seed);
  OracleKind kind = cfg.defended ? OracleKind::kDefended
                    : cfg.behavior == BehaviorKind::kNone ? OracleKind::kDeterministic
                                                          : OracleKind::kProbabilistic;
  Oracle oracle(inst.locked, inst.annotations, kind, derive_seed(rec.seed, 2), cfg.defense);
  AttackConfig ac = cfg.attack_config;
  ac.seed = derive_seed(rec.seed, 3);
  AttackResult r = run_attack(cfg.attack, inst.locked, oracle, ac);
  rec.status = r.status;
  rec.success = r.success();
  rec.runtime_s = r.runtime_s;
  rec.iterations = r.iterations;
  rec.oracle_queries = r.oracle_queries;
  if (rec.success) {
    rec.equivalent = verify_key(inst.locked, *r.key);
    auto t0 = sat::Clock::now();
    Simulator sim(inst.locked.circuit, inst.annotations, inst.locked.key_inputs);
    auto m = hd_oer(sim, inst.locked.correct_key, sim, *r.key, ac.patterns, derive_seed(rec.seed, 4));
    rec.hd = m.hd;
    rec.oer = m.oer;
    // PSAT's final sampling pass is part of the attack; the conventional attack has none.
    if (cfg.attack == AttackKind::kPsat) rec.runtime_s += detail::seconds_since(t0);
  }
  return rec;
}

inline CampaignSummary summarize(const CampaignConfig& cfg, std::vector<RunRecord> records) {
  CampaignSummary s;
  s.benchmark = cfg.benchmark;
  s.attack = attack_kind_name(cfg.attack);
  s.behavior = behavior_name(cfg.behavior);
  s.pct_prob_gates = cfg.behavior == BehaviorKind::kNone ? 0.0 : cfg.behavior_fraction * 100.0;
  s.correctness = cfg.behavior == BehaviorKind::kProbabilistic ? cfg.correctness : 1.0;
  s.master_seed = cfg.master_seed;
  s.hd_oer_patterns = cfg.attack_config.patterns;
  s.runs = records.size();
  double successes = 0, equivalent = 0, hd = 0, oer = 0;
  for (const auto& r : records) {
    s.mean_runtime_s += r.runtime_s;
    s.mean_iterations += static_cast<double>(r.iterations);
    s.mean_oracle_queries += static_cast<double>(r.oracle_queries);
    if (r.success) {
      ++successes;
      hd += r.hd;
      oer += r.oer;
    }
    if (r.equivalent) ++equivalent;
  }
  double n = static_cast<double>(s.runs);
  s.success_rate = successes / n;
  s.equivalence_rate = equivalent / n;
  s.mean_runtime_s /= n;
  s.mean_iterations /= n;
  s.mean_oracle_queries /= n;
  if (successes > 0) {
    s.mean_hd = hd / successes;
    s.mean_oer = oer / successes;
  }
  s.records = std::move(records);
  return s;
}

// Runs are independent and indexed; results do not depend on `jobs`.
inline CampaignSummary run_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  std::vector<RunRecord> records(cfg.runs);
  unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(cfg.runs)));
  std::atomic<uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (uint64_t i; (i = next.fetch_add(1)) < cfg.runs;) {
      try {
        records[i] = run_one(cfg, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = cfg.runs;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return summarize(cfg, std::move(records));
}

// ---- reports ------------------------------------------------------------------

enum class ReportFormat { kJson, kCsv };

inline ReportFormat report_format_from_name(const std::string& s) {
  if (s == "json-like" || s == "json") return ReportFormat::kJson;
  if (s == "csv") return ReportFormat::kCsv;
  throw std::invalid_argument("unknown report format '" + s + "' (expected json-like or csv)");
}

namespace detail {

inline std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t pos;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not a number: " + s);
  return v;
}

inline nlohmann::ordered_json json_number(double v) {
  return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v);
}

inline double json_double(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> kColumns = {
      "record",         "benchmark",     "attack",          "behavior",     "pct_prob_gates", "correctness",
      "runs",           "success_rate",  "equivalence_rate", "mean_hd",      "mean_oer",       "mean_runtime_s",
      "mean_iterations", "mean_oracle_queries", "master_seed", "hd_oer_patterns", "run_index", "run_seed",
      "status",         "success",       "equivalent",      "hd",           "oer",            "runtime_s",
      "iterations",     "oracle_queries"};
  return kColumns;
}

}  // namespace detail

inline std::string emit_report(const CampaignSummary& s, ReportFormat format) {
  if (s.runs == 0 || s.records.empty()) throw std::invalid_argument("cannot report an empty campaign");
  using detail::fmt_double;
  if (format == ReportFormat::kJson) {
    nlohmann::ordered_json j;
    j["benchmark"] = s.benchmark;
    j["attack"] = s.attack;
    j["behavior"] = s.behavior;
    j["pct_prob_gates"] = s.pct_prob_gates;
    j["correctness"] = s.correctness;
    j["runs"] = s.runs;
    j["success_rate"] = s.success_rate;
    j["equivalence_rate"] = s.equivalence_rate;
    j["mean_hd"] = detail::json_number(s.mean_hd);
    j["mean_oer"] = detail::json_number(s.mean_oer);
    j["mean_runtime_s"] = s.mean_runtime_s;
    j["mean_iterations"] = s.mean_iterations;
    j["mean_oracle_queries"] = s.mean_oracle_queries;
    j["master_seed"] = s.master_seed;
    j["hd_oer_patterns"] = s.hd_oer_patterns;
    auto runs = nlohmann::ordered_json::array();
    for (const auto& r : s.records) {
      nlohmann::ordered_json o;
      o["run_index"] = r.index;
      o["run_seed"] = r.seed;
      o["status"] = attack_status_name(r.status);
      o["success"] = r.success;
      o["equivalent"] = r.equivalent;
      o["hd"] = detail::json_number(r.hd);
      o["oer"] = detail::json_number(r.oer);
      o["runtime_s"] = r.runtime_s;
      o["iterations"] = r.iterations;
      o["oracle_queries"] = r.oracle_queries;
      runs.push_back(std::move(o));
    }
    j["per_run"] = std::move(runs);
    return j.dump(2) + "\n";
  }
  std::ostringstream o;
  const auto& cols = detail::csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) o << (i ? "," : "") << cols[i];
  o << "\n";
  auto config = [&](const char* record) {
    o << record << "," << s.benchmark << "," << s.attack << "," << s.behavior << "," << fmt_double(s.pct_prob_gates) << ","
      << fmt_double(s.correctness) << "," << s.runs << ",";
  };
  config("summary");
  o << fmt_double(s.success_rate) << "," << fmt_double(s.equivalence_rate) << "," << fmt_double(s.mean_hd) << ","
    << fmt_double(s.mean_oer) << "," << fmt_double(s.mean_runtime_s) << "," << fmt_double(s.mean_iterations) << ","
    << fmt_double(s.mean_oracle_queries) << "," << s.master_seed << "," << s.hd_oer_patterns << ",,,,,,,,,,\n";
  for (const auto& r : s.records) {
    config("run");
    o << ",,,,,,," << s.master_seed << "," << s.hd_oer_patterns << "," << r.index << "," << r.seed << ","
      << attack_status_name(r.status) << "," << (r.success ? 1 : 0) << "," << (r.equivalent ? 1 : 0) << ","
      << fmt_double(r.hd) << "," << fmt_double(r.oer) << "," << fmt_double(r.runtime_s) << "," << r.iterations << ","
      << r.oracle_queries << "\n";
  }
  return o.str();
}

inline CampaignSummary parse_report(const std::string& text, ReportFormat format) {
  CampaignSummary s;
  if (format == ReportFormat::kJson) {
    auto j = nlohmann::json::parse(text);
    s.benchmark = j.at("benchmark").get<std::string>();
    s.attack = j.at("attack").get<std::string>();
    s.behavior = j.at("behavior").get<std::string>();
    s.pct_prob_gates = j.at("pct_prob_gates").get<double>();
    s.correctness = j.at("correctness").get<double>();
    s.runs = j.at("runs").get<uint64_t>();
    s.success_rate = j.at("success_rate").get<double>();
    s.equivalence_rate = j.at("equivalence_rate").get<double>();
    s.mean_hd = detail::json_double(j.at("mean_hd"));
    s.mean_oer = detail::json_double(j.at("mean_oer"));
    s.mean_runtime_s = j.at("mean_runtime_s").get<double>();
    s.mean_iterations = j.at("mean_iterations").get<double>();
    s.mean_oracle_queries = j.at("mean_oracle_queries").get<double>();
    s.master_seed = j.at("master_seed").get<uint64_t>();
    s.hd_oer_patterns = j.at("hd_oer_patterns").get<uint64_t>();
    for (const auto& o : j.at("per_run")) {
      RunRecord r;
      r.index = o.at("run_index").get<uint64_t>();
      r.seed = o.at("run_seed").get<uint64_t>();
      r.status = attack_status_from_name(o.at("status").get<std::string>());
      r.success = o.at("success").get<bool>();
      r.equivalent = o.at("equivalent").get<bool>();
      r.hd = detail::json_double(o.at("hd"));
      r.oer = detail::json_double(o.at("oer"));
      r.runtime_s = o.at("runtime_s").get<double>();
      r.iterations = o.at("iterations").get<uint64_t>();
      r.oracle_queries = o.at("oracle_queries").get<uint64_t>();
      s.records.push_back(r);
    }
    return s;
  }
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || detail::split_csv(line) != detail::csv_columns()) {
    throw std::invalid_argument("unexpected report header");
  }
  using detail::parse_double;
  bool have_summary = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = detail::split_csv(line);
    if (f.size() != detail::csv_columns().size()) throw std::invalid_argument("malformed report row: " + line);
    if (f[0] == "summary") {
      s.benchmark = f[1];
      s.attack = f[2];
      s.behavior = f[3];
      s.pct_prob_gates = parse_double(f[4]);
      s.correctness = parse_double(f[5]);
      s.runs = std::stoull(f[6]);
      s.success_rate = parse_double(f[7]);
      s.equivalence_rate = parse_double(f[8]);
      s.mean_hd = parse_double(f[9]);
      s.mean_oer = parse_double(f[10]);
      s.mean_runtime_s = parse_double(f[11]);
      s.mean_iterations = parse_double(f[12]);
      s.mean_oracle_queries = parse_double(f[13]);
      s.master_seed = std::stoull(f[14]);
      s.hd_oer_patterns = std::stoull(f[15]);
      have_summary = true;
    } else if (f[0] == "run") {
      RunRecord r;
      r.index = std::stoull(f[16]);
      r.seed = std::stoull(f[17]);
      r.status = attack_status_from_name(f[18]);
      r.success = f[19] == "1";
      r.equivalent = f[20] == "1";
      r.hd = parse_double(f[21]);
      r.oer = parse_double(f[22]);
      r.runtime_s = parse_double(f[23]);
      r.iterations = std::stoull(f[24]);
      r.oracle_queries = std::stoull(f[25]);
      s.records.push_back(r);
    } else {
      throw std::invalid_argument("unknown report record '" + f[0] + "'");
    }
  }
  if (!have_summary) throw std::invalid_argument("report has no summary row");
  return s;
}

}  // namespace camoforge
