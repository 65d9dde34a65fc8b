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

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "camoforge/annotation.hpp"
#include "camoforge/bits.hpp"
#include "camoforge/netlist.hpp"
#include "camoforge/rng.hpp"

namespace camoforge {

// Deterministic evaluation ignores annotations. Stochastic evaluation draws
// every random choice from counter_hash(seed, stream, gate, sample).
struct EvalMode {
  bool stochastic = false;
  uint64_t seed = 0;
  uint64_t stream = 0;
  // Polymorphic gates redraw their function every `epoch` samples (1 = every evaluation).
  uint64_t epoch = 1;

  static EvalMode deterministic() { return {}; }
  static EvalMode random(uint64_t seed, uint64_t stream = 0, uint64_t epoch = 1) { return {true, seed, stream, epoch}; }
};

// Output pattern -> occurrence count.
class OutputHistogram {
 public:
  OutputHistogram() = default;
  explicit OutputHistogram(std::size_t width) : width_(width) {}

  void add(const BitString& pattern, uint64_t count = 1) {
    if (pattern.size() != width_) throw std::invalid_argument("histogram pattern width mismatch");
    counts_[pattern] += count;
    total_ += count;
  }

  void merge(const OutputHistogram& o) {
    if (o.width_ != width_ && o.total_ != 0) throw std::invalid_argument("histogram width mismatch");
    for (const auto& [p, n] : o.counts_) add(p, n);
  }

  std::size_t width() const { return width_; }
  uint64_t total() const { return total_; }
  std::size_t distinct() const { return counts_.size(); }
  bool empty() const { return total_ == 0; }
  const std::map<BitString, uint64_t>& counts() const { return counts_; }

  uint64_t count(const BitString& p) const {
    auto it = counts_.find(p);
    return it == counts_.end() ? 0 : it->second;
  }

  // Patterns by descending count; equal counts in lexicographic order.
  std::vector<std::pair<BitString, uint64_t>> ranked() const {
    std::vector<std::pair<BitString, uint64_t>> v(counts_.begin(), counts_.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return v;
  }

  bool operator==(const OutputHistogram&) const = default;

 private:
  std::size_t width_ = 0;
  uint64_t total_ = 0;
  std::map<BitString, uint64_t> counts_;
};

// Bit-parallel evaluator: each call evaluates 64 independent lanes.
class Simulator {
 public:
  static constexpr unsigned kLanes = 64;

  Simulator(const Circuit& circuit, const Annotations& annotations = {}, const std::vector<std::string>& key_inputs = {})
      : circuit_(circuit) {
    if (!circuit.is_combinational()) throw std::invalid_argument("simulation needs a combinational circuit; unroll flip-flops first");
    validate_annotations(circuit, annotations);
    std::unordered_map<std::string, std::size_t> key_pos;
    for (std::size_t i = 0; i < key_inputs.size(); ++i) key_pos.emplace(key_inputs[i], i);
    key_slot_.assign(key_inputs.size(), SIZE_MAX);
    for (std::size_t i = 0; i < circuit.inputs().size(); ++i) {
      auto it = key_pos.find(circuit.inputs()[i]);
      if (it == key_pos.end()) {
        data_slot_.push_back(i);
      } else {
        key_slot_[it->second] = i;
      }
    }
    for (std::size_t k = 0; k < key_slot_.size(); ++k) {
      if (key_slot_[k] == SIZE_MAX) throw std::invalid_argument("key input '" + key_inputs[k] + "' is not a primary input");
    }
    behavior_.assign(circuit.gates().size(), -1);
    for (const auto& a : annotations) {
      std::size_t g = circuit.gate_index(a.gate);
      Behavior b;
      if (const auto* p = std::get_if<Probabilistic>(&a.mode)) {
        b.flip_threshold = probability_threshold(1.0 - p->correctness);
        b.always_flip = p->correctness <= 0.0;
      } else {
        const auto& dist = std::get<Polymorphic>(a.mode).distribution;
        double acc = 0;
        for (std::size_t i = 0; i < dist.size(); ++i) {
          acc += dist[i].second;
          b.functions.push_back(dist[i].first);
          b.cumulative.push_back(i + 1 == dist.size() ? ~uint64_t{0} : probability_threshold(acc));
        }
      }
      behavior_[g] = static_cast<int>(behaviors_.size());
      behaviors_.push_back(std::move(b));
    }
  }

  const Circuit& circuit() const { return circuit_; }
  std::size_t num_data_inputs() const { return data_slot_.size(); }
  std::size_t num_keys() const { return key_slot_.size(); }
  std::size_t num_outputs() const { return circuit_.outputs().size(); }

  // Lane words for every primary input in circuit order; lane l uses sample index sample_base + l.
  void eval_lanes(std::span<const uint64_t> inputs, const EvalMode& mode, uint64_t sample_base, std::span<uint64_t> out) const {
    const Circuit& c = circuit_;
    if (inputs.size() != c.inputs().size()) throw std::invalid_argument("input lane count mismatch");
    if (out.size() != c.outputs().size()) throw std::invalid_argument("output lane count mismatch");
    std::vector<uint64_t> v(c.num_nets());
    std::copy(inputs.begin(), inputs.end(), v.begin());
    uint64_t buf[GateFunction::kMaxArity];
    for (std::size_t g = 0; g < c.gates().size(); ++g) {
      auto fin = c.gate_fanin(g);
      for (std::size_t j = 0; j < fin.size(); ++j) buf[j] = v[fin[j]];
      std::span<const uint64_t> in(buf, fin.size());
      uint64_t r;
      int bi = behavior_[g];
      if (!mode.stochastic || bi < 0) {
        r = c.gates()[g].function.eval(in);
      } else {
        const Behavior& b = behaviors_[bi];
        if (b.functions.empty()) {
          r = c.gates()[g].function.eval(in) ^ flip_mask(b, mode, g, sample_base);
        } else {
          r = polymorphic_eval(b, in, mode, g, sample_base);
        }
      }
      v[c.gate_net(g)] = r;
    }
    for (std::size_t o = 0; o < out.size(); ++o) out[o] = v[c.output_ids()[o]];
  }

  // Same as eval_lanes, with data lanes in data-input order and one key broadcast to all lanes.
  void eval_block(std::span<const uint64_t> data, const BitString& key, const EvalMode& mode, uint64_t sample_base,
                  std::span<uint64_t> out) const {
    check_key(key);
    if (data.size() != data_slot_.size()) throw std::invalid_argument("data lane count mismatch");
    std::vector<uint64_t> in(circuit_.inputs().size(), 0);
    for (std::size_t i = 0; i < data.size(); ++i) in[data_slot_[i]] = data[i];
    for (std::size_t k = 0; k < key_slot_.size(); ++k) in[key_slot_[k]] = key.get(k) ? ~uint64_t{0} : 0;
    eval_lanes(in, mode, sample_base, out);
  }

  // One evaluation of one input pattern as sample `sample_index`.
  BitString eval(const BitString& input, const BitString& key, const EvalMode& mode = {}, uint64_t sample_index = 0) const {
    check_input(input);
    std::vector<uint64_t> data(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) data[i] = input.get(i) ? 1 : 0;
    std::vector<uint64_t> out(num_outputs());
    eval_block(data, key, mode, sample_index, out);
    BitString r(out.size());
    for (std::size_t o = 0; o < out.size(); ++o) r.set(o, out[o] & 1);
    return r;
  }

  // `count` evaluations of one input as samples first..first+count-1 of `mode`.
  OutputHistogram sample(const BitString& input, const BitString& key, const EvalMode& mode, uint64_t first,
                         uint64_t count) const {
    check_input(input);
    OutputHistogram h(num_outputs());
    std::vector<uint64_t> data(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) data[i] = input.get(i) ? ~uint64_t{0} : 0;
    std::vector<uint64_t> out(num_outputs());
    for (uint64_t done = 0; done < count; done += kLanes) {
      eval_block(data, key, mode, first + done, out);
      unsigned lanes = static_cast<unsigned>(std::min<uint64_t>(kLanes, count - done));
      for_each_lane_pattern(out, lanes, [&](const BitString& p, uint64_t n) { h.add(p, n); });
    }
    return h;
  }

  // Splits block outputs into per-lane patterns and reports runs of equal patterns.
  template <typename F>
  static void for_each_lane_pattern(std::span<const uint64_t> out, unsigned lanes, F&& f) {
    std::map<BitString, uint64_t> local;
    for (unsigned l = 0; l < lanes; ++l) {
      BitString p(out.size());
      for (std::size_t o = 0; o < out.size(); ++o) p.set(o, (out[o] >> l) & 1);
      ++local[p];
    }
    for (const auto& [p, n] : local) f(p, n);
  }

  void check_input(const BitString& input) const {
    if (input.size() != data_slot_.size()) {
      throw std::invalid_argument("input width " + std::to_string(input.size()) + " does not match " +
                                  std::to_string(data_slot_.size()) + " data inputs");
    }
  }

  void check_key(const BitString& key) const {
    if (key.size() != key_slot_.size()) {
      throw std::invalid_argument("key width " + std::to_string(key.size()) + " does not match " +
                                  std::to_string(key_slot_.size()) + " key inputs");
    }
  }

 private:
  struct Behavior {
    uint64_t flip_threshold = 0;
    bool always_flip = false;
    std::vector<GateFunction> functions;
    std::vector<uint64_t> cumulative;
  };

  static constexpr uint64_t kPolyStream = 0x706f6c79ull << 32;

  static uint64_t flip_mask(const Behavior& b, const EvalMode& m, std::size_t g, uint64_t base) {
    if (b.always_flip) return ~uint64_t{0};
    if (b.flip_threshold == 0) return 0;
    uint64_t mask = 0;
    for (unsigned l = 0; l < kLanes; ++l) {
      if (counter_hash(m.seed, m.stream, g, base + l) < b.flip_threshold) mask |= uint64_t{1} << l;
    }
    return mask;
  }

  static uint64_t polymorphic_eval(const Behavior& b, std::span<const uint64_t> in, const EvalMode& m, std::size_t g,
                                   uint64_t base) {
    std::vector<uint64_t> choice_mask(b.functions.size(), 0);
    uint64_t epoch = std::max<uint64_t>(m.epoch, 1);
    for (unsigned l = 0; l < kLanes; ++l) {
      uint64_t h = counter_hash(m.seed, m.stream ^ kPolyStream, g, (base + l) / epoch);
      std::size_t k = 0;
      while (k + 1 < b.cumulative.size() && h >= b.cumulative[k]) ++k;
      choice_mask[k] |= uint64_t{1} << l;
    }
    uint64_t r = 0;
    for (std::size_t k = 0; k < b.functions.size(); ++k) {
      if (choice_mask[k]) r |= b.functions[k].eval(in) & choice_mask[k];
    }
    return r;
  }

  Circuit circuit_;
  std::vector<std::size_t> data_slot_;
  std::vector<std::size_t> key_slot_;
  std::vector<int> behavior_;
  std::vector<Behavior> behaviors_;
};

// Deterministic evaluation of a circuit without key inputs or annotations.
inline BitString evaluate(const Circuit& c, const BitString& input) {
  Simulator sim(c);
  return sim.eval(input, BitString(0));
}

// S stochastic evaluations of `input` (samples 0..S-1 of stream 0).
inline OutputHistogram sample_outputs(const Circuit& c, const Annotations& anns, const std::vector<std::string>& key_inputs,
                                      const BitString& key, const BitString& input, uint64_t samples, uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("sample count must be at least 1");
  Simulator sim(c, anns, key_inputs);
  sim.check_key(key);
  return sim.sample(input, key, EvalMode::random(seed), 0, samples);
}

}  // namespace camoforge
