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

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "camoforge/netlist.hpp"

namespace camoforge {

// Output flips with probability 1 - correctness on every evaluation.
struct Probabilistic {
  double correctness = 1.0;
};

// Function drawn from `distribution` on every evaluation.
struct Polymorphic {
  std::vector<std::pair<GateFunction, double>> distribution;
};

struct BehaviorAnnotation {
  std::string gate;
  std::variant<Probabilistic, Polymorphic> mode;

  bool is_probabilistic() const { return std::holds_alternative<Probabilistic>(mode); }
  bool is_polymorphic() const { return std::holds_alternative<Polymorphic>(mode); }
};

using Annotations = std::vector<BehaviorAnnotation>;

inline constexpr double kDistributionTolerance = 1e-9;

inline void validate_annotation(const BehaviorAnnotation& a) {
  if (const auto* p = std::get_if<Probabilistic>(&a.mode)) {
    if (!(p->correctness >= 0.5 && p->correctness <= 1.0)) {
      throw std::invalid_argument("correctness of gate '" + a.gate + "' must lie in [0.5, 1], got " +
                                  std::to_string(p->correctness));
    }
    return;
  }
  const auto& d = std::get<Polymorphic>(a.mode).distribution;
  if (d.empty()) throw std::invalid_argument("empty distribution for gate '" + a.gate + "'");
  double sum = 0;
  for (const auto& [f, p] : d) {
    if (!(p >= 0)) throw std::invalid_argument("negative probability for gate '" + a.gate + "'");
    if (f.arity() != d.front().first.arity()) throw std::invalid_argument("mixed arities in distribution of '" + a.gate + "'");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDistributionTolerance) {
    throw std::invalid_argument("distribution of gate '" + a.gate + "' sums to " + std::to_string(sum));
  }
}

// Checks every annotation against the circuit: gate exists, arity fits, no gate annotated twice.
inline void validate_annotations(const Circuit& c, const Annotations& anns) {
  std::set<std::string> seen;
  for (const auto& a : anns) {
    validate_annotation(a);
    auto g = c.find_gate(a.gate);
    if (!g) throw std::invalid_argument("annotation refers to unknown gate '" + a.gate + "'");
    if (!seen.insert(a.gate).second) throw std::invalid_argument("gate '" + a.gate + "' annotated twice");
    if (const auto* p = std::get_if<Polymorphic>(&a.mode)) {
      if (p->distribution.front().first.arity() != c.gates()[*g].function.arity()) {
        throw std::invalid_argument("distribution arity does not match gate '" + a.gate + "'");
      }
    }
  }
}

inline std::string format_probability(double p) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  return buf;
}

// `#@ prob <gate> <correctness>` or `#@ poly <gate> <fn:prob,...>`.
inline std::string to_pragma(const BehaviorAnnotation& a) {
  if (const auto* p = std::get_if<Probabilistic>(&a.mode)) {
    return "#@ prob " + a.gate + " " + format_probability(p->correctness);
  }
  std::string s = "#@ poly " + a.gate + " ";
  const auto& d = std::get<Polymorphic>(a.mode).distribution;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) s += ",";
    s += function_name(d[i].first) + ":" + format_probability(d[i].second);
  }
  return s;
}

inline std::vector<std::string> to_pragmas(const Annotations& anns) {
  std::vector<std::string> out;
  out.reserve(anns.size());
  for (const auto& a : anns) out.push_back(to_pragma(a));
  return out;
}

// Parses the `prob`/`poly` pragmas among `pragmas`; other pragma kinds are skipped.
inline Annotations parse_annotation_pragmas(const std::vector<std::string>& pragmas) {
  Annotations out;
  for (const auto& line : pragmas) {
    std::istringstream in(line);
    std::string marker, kind, gate, body;
    in >> marker >> kind;
    if (marker != "#@" || (kind != "prob" && kind != "poly")) continue;
    if (!(in >> gate >> body)) throw std::invalid_argument("malformed pragma: " + line);
    std::string rest;
    if (in >> rest) throw std::invalid_argument("trailing text in pragma: " + line);
    if (kind == "prob") {
      std::size_t used = 0;
      double p = 0;
      try {
        p = std::stod(body, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad correctness in pragma: " + line);
      }
      if (used != body.size()) throw std::invalid_argument("bad correctness in pragma: " + line);
      out.push_back({gate, Probabilistic{p}});
    } else {
      Polymorphic poly;
      std::istringstream items(body);
      std::string item;
      while (std::getline(items, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("bad distribution entry '" + item + "'");
        double p;
        try {
          p = std::stod(item.substr(colon + 1));
        } catch (const std::exception&) {
          throw std::invalid_argument("bad probability in '" + item + "'");
        }
        poly.distribution.emplace_back(function_by_name(item.substr(0, colon)), p);
      }
      out.push_back({gate, std::move(poly)});
    }
    validate_annotation(out.back());
  }
  return out;
}

// Circuit pragmas with all prob/poly lines replaced by `anns`.
inline Circuit with_annotations(const Circuit& c, const Annotations& anns) {
  std::vector<std::string> pragmas;
  for (const auto& p : c.pragmas()) {
    std::istringstream in(p);
    std::string marker, kind;
    in >> marker >> kind;
    if (kind != "prob" && kind != "poly") pragmas.push_back(p);
  }
  for (auto& p : to_pragmas(anns)) pragmas.push_back(std::move(p));
  return c.with_pragmas(std::move(pragmas));
}

}  // namespace camoforge
