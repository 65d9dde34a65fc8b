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

#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "camoforge/bits.hpp"
#include "camoforge/cnf.hpp"
#include "camoforge/obfuscate.hpp"
#include "camoforge/oracle.hpp"
#include "camoforge/rng.hpp"
#include "camoforge/sat.hpp"
#include "camoforge/simulate.hpp"

namespace camoforge {

enum class AttackKind { kSat, kDoubleDip, kPsat };
enum class AttackStatus { kSuccess, kInconsistentOracle, kIterationCap, kTimeout };

inline const char* attack_kind_name(AttackKind k) {
  switch (k) {
    case AttackKind::kSat: return "sat";
    case AttackKind::kDoubleDip: return "2dip";
    case AttackKind::kPsat: return "psat";
  }
  return "?";
}

inline AttackKind attack_kind_from_name(const std::string& s) {
  if (s == "sat") return AttackKind::kSat;
  if (s == "2dip") return AttackKind::kDoubleDip;
  if (s == "psat") return AttackKind::kPsat;
  throw std::invalid_argument("unknown attack kind '" + s + "' (expected sat, 2dip or psat)");
}

inline const char* attack_status_name(AttackStatus s) {
  switch (s) {
    case AttackStatus::kSuccess: return "Success";
    case AttackStatus::kInconsistentOracle: return "InconsistentOracle";
    case AttackStatus::kIterationCap: return "IterationCap";
    case AttackStatus::kTimeout: return "Timeout";
  }
  return "?";
}

inline AttackStatus attack_status_from_name(const std::string& s) {
  for (auto st : {AttackStatus::kSuccess, AttackStatus::kInconsistentOracle, AttackStatus::kIterationCap, AttackStatus::kTimeout}) {
    if (s == attack_status_name(st)) return st;
  }
  throw std::invalid_argument("unknown attack status '" + s + "'");
}

struct AttackConfig {
  uint64_t samples = 1000;    // oracle samples per DIP (PSAT)
  uint64_t patterns = 10000;  // patterns for the HD/OER estimate
  uint64_t max_iterations = 10000;
  double timeout_s = 3600;
  uint64_t seed = 0;
  std::string solver = "builtin";

  void validate() const {
    if (samples == 0) throw std::invalid_argument("samples per DIP must be at least 1");
    if (patterns == 0) throw std::invalid_argument("pattern count must be at least 1");
    if (!(timeout_s > 0)) throw std::invalid_argument("timeout must be positive");
  }
};

struct TraceEntry {
  uint64_t iteration = 0;
  BitString dip;
  BitString response;
  std::optional<bool> dominant;  // PSAT only
  std::size_t clauses = 0;
  double elapsed_s = 0;
  bool double_dip_phase = false;
};

struct AttackResult {
  AttackStatus status = AttackStatus::kTimeout;
  std::optional<BitString> key;
  std::vector<TraceEntry> trace;
  uint64_t iterations = 0;
  uint64_t oracle_queries = 0;
  double runtime_s = 0;

  bool success() const { return status == AttackStatus::kSuccess; }
};

// `iter, dip_hex, response_hex, dominant?, clauses, elapsed_s`
inline std::string format_trace_line(const TraceEntry& e) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", e.elapsed_s);
  std::ostringstream o;
  o << e.iteration << ", 0x" << e.dip.to_hex() << ", 0x" << e.response.to_hex() << ", "
    << (e.dominant ? (*e.dominant ? "yes" : "no") : "n/a") << ", " << e.clauses << ", " << buf;
  return o.str();
}

inline std::string format_trace(const std::vector<TraceEntry>& trace) {
  std::string s = "iter, dip_hex, response_hex, dominant?, clauses, elapsed_s\n";
  for (const auto& e : trace) s += format_trace_line(e) + "\n";
  return s;
}

using IterationHook = std::function<void(const TraceEntry&)>;

// Dominance rule: the top pattern wins if it occurs at least as often as the
// next two combined; otherwise a pattern is drawn in proportion to its count.
struct GroundTruth {
  BitString pattern;
  bool dominant = false;
};

inline GroundTruth ground_truth(const OutputHistogram& h, Rng& rng) {
  if (h.empty()) throw std::invalid_argument("ground truth of an empty histogram");
  auto ranked = h.ranked();
  uint64_t c1 = ranked.size() > 1 ? ranked[1].second : 0;
  uint64_t c2 = ranked.size() > 2 ? ranked[2].second : 0;
  if (ranked[0].second >= c1 + c2) return {ranked[0].first, true};
  uint64_t u = rng.uniform_int(h.total());
  for (const auto& [p, n] : ranked) {
    if (u < n) return {p, false};
    u -= n;
  }
  return {ranked.back().first, false};
}

namespace detail {

// Key copies of one locked circuit sharing the data inputs X, plus the
// accumulated I/O constraints.
class AttackFormula {
 public:
  AttackFormula(const LockedCircuit& locked, sat::Backend& s) : locked_(locked), s_(s) {
    const auto& inputs = locked.circuit.inputs();
    std::vector<std::size_t> key_pos(locked.key_inputs.size(), SIZE_MAX);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      auto it = std::find(locked.key_inputs.begin(), locked.key_inputs.end(), inputs[i]);
      if (it == locked.key_inputs.end()) data_slot_.push_back(i);
      else key_pos[it - locked.key_inputs.begin()] = i;
    }
    for (std::size_t k = 0; k < key_pos.size(); ++k) {
      if (key_pos[k] == SIZE_MAX) throw std::invalid_argument("key input '" + locked.key_inputs[k] + "' is not a primary input");
    }
    key_slot_ = key_pos;
    for (std::size_t i = 0; i < data_slot_.size(); ++i) x_.push_back(s_.new_var());
  }

  std::size_t num_data() const { return data_slot_.size(); }
  std::size_t num_keys() const { return key_slot_.size(); }

  int add_key_copy() {
    std::vector<int> k;
    for (std::size_t i = 0; i < key_slot_.size(); ++i) k.push_back(s_.new_var());
    keys_.push_back(std::move(k));
    return static_cast<int>(keys_.size() - 1);
  }
  const std::vector<int>& key_vars(int copy) const { return keys_[copy]; }

  // Circuit copy over the shared X and key copy `copy`; returns output signals.
  std::vector<Signal> symbolic_outputs(int copy) {
    std::vector<Signal> in(locked_.circuit.inputs().size());
    for (std::size_t i = 0; i < data_slot_.size(); ++i) in[data_slot_[i]] = Signal::literal(x_[i]);
    return outputs_of(in, copy);
  }

  // Fresh copy with X fixed to `dip`; asserts its outputs equal `response`.
  bool constrain(int copy, const BitString& dip, const BitString& response) {
    std::vector<Signal> in(locked_.circuit.inputs().size());
    for (std::size_t i = 0; i < data_slot_.size(); ++i) in[data_slot_[i]] = Signal::constant(dip.get(i));
    auto out = outputs_of(in, copy);
    bool ok = true;
    for (std::size_t o = 0; o < out.size(); ++o) ok = assert_signal(s_, out[o], response.get(o)) && ok;
    return ok;
  }

  BitString dip_from_model() const {
    BitString b(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) b.set(i, s_.model_value(x_[i]));
    return b;
  }

  BitString key_from_model(int copy) const {
    BitString b(keys_[copy].size());
    for (std::size_t i = 0; i < keys_[copy].size(); ++i) b.set(i, s_.model_value(keys_[copy][i]));
    return b;
  }

  // Clause (-act OR lits...) with constant folding.
  void guarded_or(int act, const std::vector<Signal>& sigs) {
    std::vector<int> c{-act};
    for (const Signal& x : sigs) {
      if (x.is_constant()) {
        if (x.value) return;
        continue;
      }
      c.push_back(x.lit);
    }
    s_.add_clause(c);
  }

  // Outputs differ under `act`.
  void outputs_differ(int act, const std::vector<Signal>& a, const std::vector<Signal>& b) {
    std::vector<Signal> d;
    for (std::size_t o = 0; o < a.size(); ++o) d.push_back(xor_signal(s_, a[o], b[o]));
    guarded_or(act, d);
  }

  // Outputs agree under `act`.
  void outputs_agree(int act, const std::vector<Signal>& a, const std::vector<Signal>& b) {
    for (std::size_t o = 0; o < a.size(); ++o) {
      Signal d = xor_signal(s_, a[o], b[o]);
      if (d.is_constant()) {
        if (d.value) s_.add_clause({-act});
      } else {
        s_.add_clause({-act, -d.lit});
      }
    }
  }

  void keys_differ(int act, int a, int b) {
    std::vector<Signal> d;
    for (std::size_t i = 0; i < keys_[a].size(); ++i) {
      d.push_back(xor_signal(s_, Signal::literal(keys_[a][i]), Signal::literal(keys_[b][i])));
    }
    guarded_or(act, d);
  }

 private:
  std::vector<Signal> outputs_of(std::vector<Signal>& in, int copy) {
    for (std::size_t k = 0; k < key_slot_.size(); ++k) in[key_slot_[k]] = Signal::literal(keys_[copy][k]);
    auto nets = encode_circuit(s_, locked_.circuit, in);
    std::vector<Signal> out;
    for (NetId id : locked_.circuit.output_ids()) out.push_back(nets[id]);
    return out;
  }

  const LockedCircuit& locked_;
  sat::Backend& s_;
  std::vector<std::size_t> data_slot_;
  std::vector<std::size_t> key_slot_;
  std::vector<int> x_;
  std::vector<std::vector<int>> keys_;
};

using Responder = std::function<BitString(const BitString& dip, TraceEntry& entry)>;

inline double seconds_since(sat::Clock::time_point t0) {
  return std::chrono::duration<double>(sat::Clock::now() - t0).count();
}

// Shared DIP loop. With `double_dip`, a four-copy miter runs first and the
// two-copy miter takes over once it is exhausted.
inline AttackResult dip_loop(const LockedCircuit& locked, Oracle& oracle, const AttackConfig& cfg, bool double_dip,
                             const Responder& respond, const IterationHook& hook) {
  cfg.validate();
  if (!locked.circuit.is_combinational()) throw std::invalid_argument("attacks need a combinational circuit; unroll flip-flops first");
  auto t0 = sat::Clock::now();
  uint64_t q0 = oracle.queries();
  auto backend = make_backend(cfg.solver);
  auto deadline = t0 + std::chrono::duration_cast<sat::Clock::duration>(std::chrono::duration<double>(cfg.timeout_s));
  backend->set_deadline(deadline);
  sat::Backend& s = *backend;
  AttackFormula f(locked, s);
  if (oracle.input_width() != f.num_data()) throw std::invalid_argument("oracle input width does not match the locked circuit");

  int k1 = f.add_key_copy();
  int k2 = f.add_key_copy();
  auto y1 = f.symbolic_outputs(k1);
  auto y2 = f.symbolic_outputs(k2);
  int act_conv = s.new_var();
  f.outputs_differ(act_conv, y1, y2);
  int act_dd = 0;
  if (double_dip) {
    // Pairs (0,2) and (1,3): equal outputs and distinct keys within a pair,
    // different outputs across pairs.
    int k3 = f.add_key_copy();
    int k4 = f.add_key_copy();
    auto y3 = f.symbolic_outputs(k3);
    auto y4 = f.symbolic_outputs(k4);
    act_dd = s.new_var();
    f.outputs_agree(act_dd, y1, y3);
    f.outputs_agree(act_dd, y2, y4);
    f.outputs_differ(act_dd, y1, y2);
    f.keys_differ(act_dd, k1, k3);
    f.keys_differ(act_dd, k2, k4);
  }
  int copies = double_dip ? 4 : 2;
  bool dd_phase = double_dip;

  AttackResult r;
  auto finish = [&](AttackStatus st) {
    r.status = st;
    r.oracle_queries = oracle.queries() - q0;
    r.runtime_s = seconds_since(t0);
    return r;
  };

  for (;;) {
    if (sat::Clock::now() >= deadline) return finish(AttackStatus::kTimeout);
    std::vector<int> assume;
    if (dd_phase) assume = {act_dd, -act_conv};
    else if (double_dip) assume = {act_conv, -act_dd};
    else assume = {act_conv};
    sat::Result res = s.solve(assume);
    if (res == sat::Result::kUnknown) return finish(AttackStatus::kTimeout);
    if (res == sat::Result::kUnsat) {
      if (dd_phase) {
        dd_phase = false;
        continue;
      }
      break;
    }
    if (r.iterations >= cfg.max_iterations) return finish(AttackStatus::kIterationCap);
    TraceEntry e;
    e.iteration = ++r.iterations;
    e.dip = f.dip_from_model();
    e.double_dip_phase = dd_phase;
    e.response = respond(e.dip, e);
    for (int c = 0; c < copies; ++c) f.constrain(c, e.dip, e.response);
    e.clauses = s.num_clauses();
    e.elapsed_s = seconds_since(t0);
    if (hook) hook(e);
    r.trace.push_back(std::move(e));
  }
  std::vector<int> off{-act_conv};
  if (double_dip) off.push_back(-act_dd);
  sat::Result res = s.solve(off);
  if (res == sat::Result::kUnknown) return finish(AttackStatus::kTimeout);
  if (res == sat::Result::kUnsat) return finish(AttackStatus::kInconsistentOracle);
  r.key = f.key_from_model(k1);
  return finish(AttackStatus::kSuccess);
}

}  // namespace detail

// Oracle-guided SAT attack with one exact oracle query per DIP.
inline AttackResult conventional_attack(const LockedCircuit& locked, Oracle& oracle, const AttackConfig& cfg = {},
                                        const IterationHook& hook = {}) {
  return detail::dip_loop(locked, oracle, cfg, false,
                          [&](const BitString& dip, TraceEntry&) { return oracle.query(dip); }, hook);
}

// Double-DIP: every DIP from the four-copy miter rules out at least two keys.
inline AttackResult double_dip_attack(const LockedCircuit& locked, Oracle& oracle, const AttackConfig& cfg = {},
                                      const IterationHook& hook = {}) {
  return detail::dip_loop(locked, oracle, cfg, true,
                          [&](const BitString& dip, TraceEntry&) { return oracle.query(dip); }, hook);
}

// PSAT: each DIP is queried S times and its response settled by ground_truth().
inline AttackResult psat_attack(const LockedCircuit& locked, Oracle& oracle, const AttackConfig& cfg = {},
                                const IterationHook& hook = {}) {
  Rng rng(mix64(cfg.seed ^ 0x70736174ull));
  return detail::dip_loop(locked, oracle, cfg, false,
                          [&](const BitString& dip, TraceEntry& e) {
                            auto g = ground_truth(oracle.sample(dip, cfg.samples), rng);
                            e.dominant = g.dominant;
                            return g.pattern;
                          },
                          hook);
}

inline AttackResult run_attack(AttackKind kind, const LockedCircuit& locked, Oracle& oracle, const AttackConfig& cfg = {},
                               const IterationHook& hook = {}) {
  switch (kind) {
    case AttackKind::kSat: return conventional_attack(locked, oracle, cfg, hook);
    case AttackKind::kDoubleDip: return double_dip_attack(locked, oracle, cfg, hook);
    case AttackKind::kPsat: return psat_attack(locked, oracle, cfg, hook);
  }
  throw std::invalid_argument("unknown attack kind");
}

// ---- explicit key-space pruning -------------------------------------------

// Output of candidate key `k` on input `x`.
using KeyedFunction = std::function<BitString(std::size_t k, const BitString& x)>;

struct PruneStep {
  BitString dip;
  BitString response;
  std::vector<std::size_t> pruned;
};

// Enumerates `num_keys` candidates and removes, per query, those whose output
// disagrees with the oracle response. `remaining` receives the survivors.
inline std::vector<PruneStep> prune_key_space(const KeyedFunction& f, std::size_t num_keys,
                                              const std::vector<std::pair<BitString, BitString>>& queries,
                                              std::vector<std::size_t>* remaining = nullptr) {
  std::vector<std::size_t> alive;
  for (std::size_t k = 0; k < num_keys; ++k) alive.push_back(k);
  std::vector<PruneStep> steps;
  for (const auto& [x, y] : queries) {
    PruneStep st{x, y, {}};
    std::vector<std::size_t> next;
    for (std::size_t k : alive) {
      if (f(k, x) == y) next.push_back(k);
      else st.pruned.push_back(k);
    }
    alive = std::move(next);
    steps.push_back(std::move(st));
  }
  if (remaining) *remaining = alive;
  return steps;
}

// Keys in `keys` consistent with every (input, output) pair, by simulation.
inline std::vector<BitString> consistent_keys(const LockedCircuit& locked, const std::vector<BitString>& keys,
                                              const std::vector<std::pair<BitString, BitString>>& io) {
  Simulator sim(locked.circuit, {}, locked.key_inputs);
  std::vector<BitString> out;
  for (const auto& k : keys) {
    bool ok = true;
    for (const auto& [x, y] : io) {
      if (sim.eval(x, k) != y) { ok = false; break; }
    }
    if (ok) out.push_back(k);
  }
  return out;
}

}  // namespace camoforge
