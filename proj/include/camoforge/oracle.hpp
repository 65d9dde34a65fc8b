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
#include <atomic>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "camoforge/annotation.hpp"
#include "camoforge/bits.hpp"
#include "camoforge/obfuscate.hpp"
#include "camoforge/simulate.hpp"

namespace camoforge {

// Decides, one query at a time, whether the input stream looks like an attack.
class RepetitionDetector {
 public:
  virtual ~RepetitionDetector() = default;
  // Records `input`; true when the detector fires on this query.
  virtual bool observe(const BitString& input) = 0;
};

// Fires when an input occurs `threshold` times within the last `window` queries.
class ExactRepeatDetector : public RepetitionDetector {
 public:
  ExactRepeatDetector(std::size_t window, std::size_t threshold) : window_(window), threshold_(threshold) {
    if (window == 0) throw std::invalid_argument("detector window must be positive");
  }

  bool observe(const BitString& input) override {
    recent_.push_back(input);
    ++counts_[input];
    if (recent_.size() > window_) {
      auto it = counts_.find(recent_.front());
      if (--it->second == 0) counts_.erase(it);
      recent_.pop_front();
    }
    return counts_[input] >= threshold_;
  }

 private:
  std::size_t window_;
  std::size_t threshold_;
  std::deque<BitString> recent_;
  std::unordered_map<BitString, std::size_t, BitStringHash> counts_;
};

struct DefenseConfig {
  std::size_t window = 64;
  std::size_t threshold = 4;  // SIZE_MAX disables the defense
  uint64_t duration = 1024;
  double escalated_correctness = 0.5;
  // Gates whose correctness is overridden while escalated; empty means every probabilistic gate.
  std::vector<std::string> monitored;

  void validate() const {
    if (threshold > window && threshold != SIZE_MAX) throw std::invalid_argument("defense threshold exceeds window");
    if (!(escalated_correctness >= 0.5 && escalated_correctness <= 1.0)) {
      throw std::invalid_argument("escalated correctness must lie in [0.5, 1]");
    }
  }
};

enum class OracleKind { kDeterministic, kProbabilistic, kDefended };

inline const char* oracle_kind_name(OracleKind k) {
  switch (k) {
    case OracleKind::kDeterministic: return "deterministic";
    case OracleKind::kProbabilistic: return "probabilistic";
    case OracleKind::kDefended: return "defended";
  }
  return "?";
}

// A working chip: the locked circuit under its correct key. The key is not exposed.
class Oracle {
 public:
  Oracle(const LockedCircuit& locked, const Annotations& anns, OracleKind kind, uint64_t seed = 0,
         DefenseConfig defense = {}, std::unique_ptr<RepetitionDetector> detector = nullptr)
      : kind_(kind),
        seed_(seed),
        key_(locked.correct_key),
        normal_(locked.circuit, anns, locked.key_inputs),
        defense_(std::move(defense)) {
    if (kind_ == OracleKind::kDefended) {
      defense_.validate();
      std::set<std::string> monitored(defense_.monitored.begin(), defense_.monitored.end());
      if (monitored.empty()) {
        for (const auto& a : anns) if (a.is_probabilistic()) monitored.insert(a.gate);
      }
      Annotations escalated;
      for (const auto& a : anns) if (!monitored.count(a.gate)) escalated.push_back(a);
      for (const auto& g : monitored) escalated.push_back({g, Probabilistic{defense_.escalated_correctness}});
      escalated_.emplace(locked.circuit, escalated, locked.key_inputs);
      detector_ = detector ? std::move(detector)
                           : std::make_unique<ExactRepeatDetector>(defense_.window, defense_.threshold);
    }
  }

  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  OracleKind kind() const { return kind_; }
  std::size_t input_width() const { return normal_.num_data_inputs(); }
  std::size_t output_width() const { return normal_.num_outputs(); }
  uint64_t queries() const { return queries_.load(); }
  uint64_t escalated_queries() const { return escalated_count_; }

  BitString query(const BitString& input) {
    auto h = sample(input, 1);
    return h.counts().begin()->first;
  }

  // `count` successive queries of the same input, tallied.
  OutputHistogram sample(const BitString& input, uint64_t count) {
    normal_.check_input(input);
    std::lock_guard<std::mutex> lock(mu_);
    uint64_t first = queries_.fetch_add(count);
    if (kind_ == OracleKind::kDeterministic) {
      OutputHistogram h(output_width());
      h.add(normal_.eval(input, key_), count);
      return h;
    }
    EvalMode mode = EvalMode::random(seed_, kOracleStream);
    if (kind_ == OracleKind::kProbabilistic) return normal_.sample(input, key_, mode, first, count);
    return defended_sample(input, count, first, mode);
  }

 private:
  static constexpr uint64_t kOracleStream = 0x6f7261636c65ull;

  OutputHistogram defended_sample(const BitString& input, uint64_t count, uint64_t first, const EvalMode& mode) {
    OutputHistogram h(output_width());
    std::vector<uint64_t> data(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) data[i] = input.get(i) ? ~uint64_t{0} : 0;
    std::vector<uint64_t> plain(output_width()), hot(output_width()), out(output_width());
    for (uint64_t done = 0; done < count; done += Simulator::kLanes) {
      unsigned lanes = static_cast<unsigned>(std::min<uint64_t>(Simulator::kLanes, count - done));
      uint64_t hot_mask = 0;
      for (unsigned l = 0; l < lanes; ++l) {
        if (detector_->observe(input)) remaining_ = defense_.duration;
        if (remaining_ > 0) {
          --remaining_;
          ++escalated_count_;
          hot_mask |= uint64_t{1} << l;
        }
      }
      normal_.eval_block(data, key_, mode, first + done, plain);
      if (hot_mask) escalated_->eval_block(data, key_, mode, first + done, hot);
      for (std::size_t o = 0; o < out.size(); ++o) out[o] = (plain[o] & ~hot_mask) | (hot[o] & hot_mask);
      Simulator::for_each_lane_pattern(out, lanes, [&](const BitString& p, uint64_t n) { h.add(p, n); });
    }
    return h;
  }

  OracleKind kind_;
  uint64_t seed_;
  BitString key_;
  Simulator normal_;
  std::optional<Simulator> escalated_;
  DefenseConfig defense_;
  std::unique_ptr<RepetitionDetector> detector_;
  std::mutex mu_;
  std::atomic<uint64_t> queries_{0};
  uint64_t remaining_ = 0;
  uint64_t escalated_count_ = 0;
};

}  // namespace camoforge
