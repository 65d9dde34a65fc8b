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
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

// Conflict-driven clause-learning SAT solver with incremental assumptions.
// Literals use the DIMACS convention: variable v >= 1 appears as v or -v.

namespace camoforge::sat {

enum class Result { kSat, kUnsat, kUnknown };

inline const char* result_name(Result r) {
  switch (r) {
    case Result::kSat: return "SAT";
    case Result::kUnsat: return "UNSAT";
    case Result::kUnknown: return "UNKNOWN";
  }
  return "?";
}

using Clock = std::chrono::steady_clock;

// Anything the attacks can push clauses into and query.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual int new_var() = 0;
  virtual int num_vars() const = 0;
  // False once the clause set is known to be unsatisfiable.
  virtual bool add_clause(std::span<const int> lits) = 0;
  virtual Result solve(std::span<const int> assumptions) = 0;
  // Value of `var` in the last satisfying assignment.
  virtual bool model_value(int var) const = 0;
  virtual std::size_t num_clauses() const = 0;
  virtual void set_deadline(Clock::time_point deadline) = 0;

  bool add_clause(std::initializer_list<int> lits) { return add_clause(std::span<const int>(lits.begin(), lits.size())); }
  Result solve() { return solve(std::span<const int>{}); }
};

struct Stats {
  uint64_t conflicts = 0;
  uint64_t decisions = 0;
  uint64_t propagations = 0;
  uint64_t restarts = 0;
};

class Solver : public Backend {
 public:
  Solver() = default;

  int new_var() override {
    int v = static_cast<int>(assigns_.size());
    assigns_.push_back(kUndef);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    activity_.push_back(0.0);
    polarity_.push_back(1);
    seen_.push_back(0);
    heap_index_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert(v);
    return v + 1;
  }

  int num_vars() const override { return static_cast<int>(assigns_.size()); }
  std::size_t num_clauses() const override { return num_original_; }
  const Stats& stats() const { return stats_; }
  bool okay() const { return ok_; }

  void set_deadline(Clock::time_point deadline) override { deadline_ = deadline; }
  void set_interrupt(const std::atomic<bool>* flag) { interrupt_ = flag; }
  // Restarts are on by default; turning them off gives a single search run.
  void set_restarts(bool on) { restarts_ = on; }

  using Backend::add_clause;
  using Backend::solve;

  bool add_clause(std::span<const int> dimacs) override {
    if (!ok_) return false;
    ++num_original_;
    std::vector<uint32_t> c;
    c.reserve(dimacs.size());
    for (int d : dimacs) {
      if (d == 0) throw std::invalid_argument("literal 0 is not a valid DIMACS literal");
      while (std::abs(d) > num_vars()) new_var();
      c.push_back(to_lit(d));
    }
    std::sort(c.begin(), c.end());
    std::vector<uint32_t> out;
    uint32_t prev = kNoLit;
    for (uint32_t l : c) {
      if (value(l) == kTrue || l == (prev ^ 1)) return true;
      if (l != prev && value(l) != kFalse) out.push_back(l);
      prev = l;
    }
    if (out.empty()) return ok_ = false;
    if (out.size() == 1) {
      enqueue(out[0], kNoReason);
      if (propagate() != kNoReason) ok_ = false;
      return ok_;
    }
    CRef cr = alloc(out, false, 0);
    clauses_.push_back(cr);
    attach(cr);
    return true;
  }

  Result solve(std::span<const int> assumptions) override {
    model_.clear();
    if (!ok_) return Result::kUnsat;
    assumptions_.clear();
    for (int d : assumptions) {
      while (std::abs(d) > num_vars()) new_var();
      assumptions_.push_back(to_lit(d));
    }
    Result result = Result::kUnknown;
    for (int round = 0;; ++round) {
      if (out_of_time()) break;
      double budget = restarts_ ? luby(round) * 100.0 : std::numeric_limits<double>::infinity();
      Outcome o = search(budget);
      if (o == Outcome::kRestart) { ++stats_.restarts; continue; }
      if (o == Outcome::kSat) result = Result::kSat;
      if (o == Outcome::kUnsat) result = Result::kUnsat;
      break;
    }
    cancel_until(0);
    return result;
  }

  bool model_value(int var) const override {
    if (var < 1 || static_cast<std::size_t>(var) > model_.size()) throw std::out_of_range("no model value for variable");
    return model_[var - 1] == kTrue;
  }

 private:
  using CRef = uint32_t;
  static constexpr CRef kNoReason = std::numeric_limits<uint32_t>::max();
  static constexpr uint32_t kNoLit = std::numeric_limits<uint32_t>::max() - 1;
  static constexpr int8_t kTrue = 1, kFalse = -1, kUndef = 0;

  enum class Outcome { kSat, kUnsat, kRestart, kStopped };

  struct Watcher {
    CRef cref;
    uint32_t blocker;
  };

  static uint32_t to_lit(int d) { return 2u * static_cast<uint32_t>(std::abs(d) - 1) + (d < 0 ? 1u : 0u); }
  static uint32_t var(uint32_t l) { return l >> 1; }

  int8_t value(uint32_t l) const {
    int8_t a = assigns_[l >> 1];
    return (l & 1) ? static_cast<int8_t>(-a) : a;
  }

  // Clause arena layout: size, flags (bit 0 learnt, bit 1 deleted, rest LBD), activity, literals.
  uint32_t csize(CRef c) const { return arena_[c]; }
  uint32_t* lits(CRef c) { return &arena_[c + 3]; }
  bool is_learnt(CRef c) const { return arena_[c + 1] & 1u; }
  bool is_deleted(CRef c) const { return arena_[c + 1] & 2u; }
  uint32_t lbd(CRef c) const { return arena_[c + 1] >> 2; }
  float cactivity(CRef c) const { return std::bit_cast<float>(arena_[c + 2]); }
  void set_cactivity(CRef c, float a) { arena_[c + 2] = std::bit_cast<uint32_t>(a); }

  CRef alloc(const std::vector<uint32_t>& ls, bool learnt, uint32_t lbd_value) {
    CRef c = static_cast<CRef>(arena_.size());
    arena_.push_back(static_cast<uint32_t>(ls.size()));
    arena_.push_back((learnt ? 1u : 0u) | (lbd_value << 2));
    arena_.push_back(std::bit_cast<uint32_t>(0.0f));
    arena_.insert(arena_.end(), ls.begin(), ls.end());
    return c;
  }

  void attach(CRef c) {
    uint32_t* l = lits(c);
    watches_[l[0] ^ 1].push_back({c, l[1]});
    watches_[l[1] ^ 1].push_back({c, l[0]});
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(uint32_t l, CRef from) {
    uint32_t v = var(l);
    assigns_[v] = (l & 1) ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = from;
    trail_.push_back(l);
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
      uint32_t v = var(trail_[i]);
      assigns_[v] = kUndef;
      reason_[v] = kNoReason;
      polarity_[v] = trail_[i] & 1;
      if (heap_index_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
  }

  CRef propagate() {
    CRef confl = kNoReason;
    while (qhead_ < trail_.size()) {
      uint32_t p = trail_[qhead_++];
      uint32_t false_lit = p ^ 1;
      auto& ws = watches_[p];
      ++stats_.propagations;
      std::size_t i = 0, j = 0, n = ws.size();
      while (i < n) {
        Watcher w = ws[i];
        if (value(w.blocker) == kTrue) { ws[j++] = ws[i++]; continue; }
        CRef cr = w.cref;
        if (is_deleted(cr)) { ++i; continue; }
        uint32_t* c = lits(cr);
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        ++i;
        uint32_t first = c[0];
        Watcher nw{cr, first};
        if (first != w.blocker && value(first) == kTrue) { ws[j++] = nw; continue; }
        bool moved = false;
        uint32_t sz = csize(cr);
        for (uint32_t k = 2; k < sz; ++k) {
          if (value(c[k]) != kFalse) {
            c[1] = c[k];
            c[k] = false_lit;
            watches_[c[1] ^ 1].push_back(nw);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = nw;
        if (value(first) == kFalse) {
          confl = cr;
          qhead_ = trail_.size();
          while (i < n) ws[j++] = ws[i++];
        } else {
          enqueue(first, cr);
        }
      }
      ws.resize(j);
      if (confl != kNoReason) break;
    }
    return confl;
  }

  uint32_t abstract_level(uint32_t v) const { return 1u << (level_[v] & 31); }

  bool lit_redundant(uint32_t p, uint32_t abstract) {
    std::vector<uint32_t> stack{p};
    std::size_t top = to_clear_.size();
    while (!stack.empty()) {
      uint32_t q = stack.back();
      stack.pop_back();
      CRef cr = reason_[var(q)];
      uint32_t* c = lits(cr);
      uint32_t sz = csize(cr);
      for (uint32_t i = 1; i < sz; ++i) {
        uint32_t v = var(c[i]);
        if (seen_[v] || level_[v] == 0) continue;
        if (reason_[v] != kNoReason && (abstract_level(v) & abstract)) {
          seen_[v] = 1;
          stack.push_back(c[i]);
          to_clear_.push_back(c[i]);
        } else {
          for (std::size_t k = top; k < to_clear_.size(); ++k) seen_[var(to_clear_[k])] = 0;
          to_clear_.resize(top);
          return false;
        }
      }
    }
    return true;
  }

  void analyze(CRef confl, std::vector<uint32_t>& learnt, int& bt_level, uint32_t& lbd_out) {
    int path = 0;
    uint32_t p = kNoLit;
    learnt.assign(1, 0);
    std::size_t index = trail_.size();
    do {
      if (is_learnt(confl)) bump_clause(confl);
      uint32_t* c = lits(confl);
      uint32_t sz = csize(confl);
      for (uint32_t j = (p == kNoLit ? 0 : 1); j < sz; ++j) {
        uint32_t q = c[j];
        uint32_t v = var(q);
        if (!seen_[v] && level_[v] > 0) {
          bump_var(v);
          seen_[v] = 1;
          if (level_[v] >= decision_level()) ++path;
          else learnt.push_back(q);
        }
      }
      while (!seen_[var(trail_[--index])]) {}
      p = trail_[index];
      confl = reason_[var(p)];
      seen_[var(p)] = 0;
      --path;
    } while (path > 0);
    learnt[0] = p ^ 1;

    to_clear_ = learnt;
    uint32_t abstract = 0;
    for (std::size_t i = 1; i < learnt.size(); ++i) abstract |= abstract_level(var(learnt[i]));
    std::size_t j = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      uint32_t v = var(learnt[i]);
      if (reason_[v] == kNoReason || !lit_redundant(learnt[i], abstract)) learnt[j++] = learnt[i];
    }
    learnt.resize(j);
    for (uint32_t l : to_clear_) seen_[var(l)] = 0;

    bt_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i) if (level_[var(learnt[i])] > level_[var(learnt[max_i])]) max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      bt_level = level_[var(learnt[1])];
    }
    ++stamp_;
    if (level_stamp_.size() < static_cast<std::size_t>(decision_level()) + 1) level_stamp_.resize(decision_level() + 1, 0);
    lbd_out = 0;
    for (uint32_t l : learnt) {
      int lv = level_[var(l)];
      if (level_stamp_[lv] != stamp_) { level_stamp_[lv] = stamp_; ++lbd_out; }
    }
  }

  // ---- activity heap ------------------------------------------------------

  bool heap_less(uint32_t a, uint32_t b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }

  void heap_up(std::size_t i) {
    uint32_t v = heap_[i];
    while (i > 0) {
      std::size_t parent = (i - 1) / 2;
      if (!heap_less(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_index_[heap_[i]] = static_cast<int>(i);
      i = parent;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<int>(i);
  }

  void heap_down(std::size_t i) {
    uint32_t v = heap_[i];
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= heap_.size()) break;
      if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
      if (!heap_less(heap_[child], v)) break;
      heap_[i] = heap_[child];
      heap_index_[heap_[i]] = static_cast<int>(i);
      i = child;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<int>(i);
  }

  void heap_insert(uint32_t v) {
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
  }

  uint32_t heap_pop() {
    uint32_t top = heap_[0];
    heap_index_[top] = -1;
    uint32_t last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_index_[last] = 0;
      heap_down(0);
    }
    return top;
  }

  void bump_var(uint32_t v) {
    if ((activity_[v] += var_inc_) > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_index_[v] >= 0) heap_up(static_cast<std::size_t>(heap_index_[v]));
  }

  void bump_clause(CRef c) {
    float a = cactivity(c) + static_cast<float>(cla_inc_);
    set_cactivity(c, a);
    if (a > 1e20f) {
      for (CRef l : learnts_) set_cactivity(l, cactivity(l) * 1e-20f);
      cla_inc_ *= 1e-20;
    }
  }

  // ---- search -------------------------------------------------------------

  static double luby(int x) {
    int size = 1, seq = 0;
    while (size < x + 1) { ++seq; size = 2 * size + 1; }
    while (size - 1 != x) { size = (size - 1) >> 1; --seq; x = x % size; }
    return std::pow(2.0, seq);
  }

  bool out_of_time() const {
    if (interrupt_ && interrupt_->load(std::memory_order_relaxed)) return true;
    return deadline_ != Clock::time_point::max() && Clock::now() >= deadline_;
  }

  bool locked(CRef c) {
    uint32_t v = var(lits(c)[0]);
    return reason_[v] == c && value(lits(c)[0]) == kTrue;
  }

  void reduce_db() {
    std::vector<CRef> cand;
    std::vector<CRef> keep;
    for (CRef c : learnts_) {
      if (lbd(c) <= 2 || locked(c)) keep.push_back(c);
      else cand.push_back(c);
    }
    std::sort(cand.begin(), cand.end(), [&](CRef a, CRef b) {
      if (lbd(a) != lbd(b)) return lbd(a) > lbd(b);
      return cactivity(a) < cactivity(b);
    });
    std::size_t drop = cand.size() / 2;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (i < drop) {
        arena_[cand[i] + 1] |= 2u;
        wasted_ += csize(cand[i]) + 3;
      } else {
        keep.push_back(cand[i]);
      }
    }
    learnts_ = std::move(keep);
    if (wasted_ > arena_.size() / 2) collect_garbage();
  }

  void collect_garbage() {
    std::vector<uint32_t> fresh;
    fresh.reserve(arena_.size() - wasted_);
    auto move = [&](CRef c) {
      CRef n = static_cast<CRef>(fresh.size());
      fresh.insert(fresh.end(), arena_.begin() + c, arena_.begin() + c + 3 + csize(c));
      return n;
    };
    std::vector<std::pair<CRef, CRef>> remap;
    for (CRef& c : clauses_) { CRef n = move(c); remap.emplace_back(c, n); c = n; }
    for (CRef& c : learnts_) { CRef n = move(c); remap.emplace_back(c, n); c = n; }
    std::sort(remap.begin(), remap.end());
    auto lookup = [&](CRef c) {
      auto it = std::lower_bound(remap.begin(), remap.end(), std::make_pair(c, CRef{0}));
      return (it != remap.end() && it->first == c) ? it->second : kNoReason;
    };
    for (auto& r : reason_) if (r != kNoReason) r = lookup(r);
    arena_ = std::move(fresh);
    wasted_ = 0;
    for (auto& w : watches_) w.clear();
    for (CRef c : clauses_) attach(c);
    for (CRef c : learnts_) attach(c);
  }

  Outcome search(double budget) {
    double conflicts = 0;
    std::vector<uint32_t> learnt;
    for (;;) {
      CRef confl = propagate();
      if (confl != kNoReason) {
        ++stats_.conflicts;
        ++conflicts;
        if (decision_level() == 0) { ok_ = false; return Outcome::kUnsat; }
        int bt;
        uint32_t lbd_value;
        analyze(confl, learnt, bt, lbd_value);
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          CRef cr = alloc(learnt, true, lbd_value);
          learnts_.push_back(cr);
          attach(cr);
          bump_clause(cr);
          enqueue(learnt[0], cr);
        }
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;
        if ((stats_.conflicts & 255) == 0 && out_of_time()) return Outcome::kStopped;
        continue;
      }
      if (conflicts >= budget) { cancel_until(0); return Outcome::kRestart; }
      if (stats_.conflicts >= next_reduce_) {
        next_reduce_ = stats_.conflicts + 2000 + 300 * (++reductions_);
        reduce_db();
      }
      uint32_t next = kNoLit;
      while (static_cast<std::size_t>(decision_level()) < assumptions_.size()) {
        uint32_t a = assumptions_[decision_level()];
        if (value(a) == kTrue) {
          trail_lim_.push_back(trail_.size());
        } else if (value(a) == kFalse) {
          return Outcome::kUnsat;
        } else {
          next = a;
          break;
        }
      }
      if (next == kNoLit) {
        ++stats_.decisions;
        if ((stats_.decisions & 4095) == 0 && out_of_time()) return Outcome::kStopped;
        while (!heap_.empty() && assigns_[heap_[0]] != kUndef) heap_pop();
        if (heap_.empty()) {
          model_ = assigns_;
          return Outcome::kSat;
        }
        uint32_t v = heap_pop();
        next = 2 * v + polarity_[v];
      }
      trail_lim_.push_back(trail_.size());
      enqueue(next, kNoReason);
    }
  }

  bool ok_ = true;
  bool restarts_ = true;
  std::vector<uint32_t> arena_;
  std::size_t wasted_ = 0;
  std::vector<CRef> clauses_;
  std::vector<CRef> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<int8_t> assigns_;
  std::vector<int8_t> model_;
  std::vector<int> level_;
  std::vector<CRef> reason_;
  std::vector<double> activity_;
  std::vector<uint8_t> polarity_;
  std::vector<uint8_t> seen_;
  std::vector<uint32_t> heap_;
  std::vector<int> heap_index_;
  std::vector<uint32_t> trail_;
  std::vector<std::size_t> trail_lim_;
  std::vector<uint32_t> assumptions_;
  std::vector<uint32_t> to_clear_;
  std::vector<uint64_t> level_stamp_;
  uint64_t stamp_ = 0;
  std::size_t qhead_ = 0;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  uint64_t next_reduce_ = 2000;
  uint64_t reductions_ = 0;
  std::size_t num_original_ = 0;
  Stats stats_;
  Clock::time_point deadline_ = Clock::time_point::max();
  const std::atomic<bool>* interrupt_ = nullptr;
};

}  // namespace camoforge::sat
