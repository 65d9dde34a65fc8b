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

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "camoforge/netlist.hpp"

namespace camoforge {

class ParseError : public NetlistError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : NetlistError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

class LineLexer {
 public:
  LineLexer(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string name() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',' || c == '=') break;
      ++pos_;
    }
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, pos_ + 1); }
  std::size_t column() const { return pos_ + 1; }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

inline std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

// Reads the ISCAS .bench format. DFF lines become sequential elements of the
// returned circuit; `#@` pragma lines are kept verbatim, other comments dropped.
// The extension `n = LUT 0x<table>(a, b, ...)` carries arbitrary functions.
inline Circuit parse_bench(std::string_view text) {
  std::vector<std::string> inputs, outputs, pragmas;
  std::vector<Gate> gates;
  std::vector<SequentialElement> flops;
  std::unordered_map<std::string, std::size_t> defined;  // net -> line

  auto define = [&](const std::string& net, std::size_t line, std::size_t col) {
    auto [it, inserted] = defined.emplace(net, line);
    if (!inserted) {
      throw ParseError("duplicate definition of '" + net + "' (first defined on line " + std::to_string(it->second) + ")",
                       line, col);
    }
  };

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::size_t first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line.substr(first).starts_with("#@")) {
      pragmas.emplace_back(line.substr(first));
      if (end == text.size()) break;
      continue;
    }
    std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);

    detail::LineLexer lex(line, line_no);
    if (lex.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    std::size_t col = lex.column();
    std::string head = lex.name();
    std::string head_upper = detail::upper(head);
    if (lex.peek('(') && (head_upper == "INPUT" || head_upper == "OUTPUT")) {
      lex.expect('(');
      std::size_t ncol = lex.column();
      std::string net = lex.name();
      lex.expect(')');
      if (!lex.at_end()) lex.fail("trailing characters");
      if (head_upper == "INPUT") {
        define(net, line_no, ncol);
        inputs.push_back(net);
      } else {
        outputs.push_back(net);
      }
    } else if (lex.peek('=')) {
      lex.expect('=');
      std::size_t fcol = lex.column();
      std::string fn = detail::upper(lex.name());
      std::string lut_table;
      if (fn == "LUT") lut_table = lex.name();
      lex.expect('(');
      std::vector<std::string> fanin;
      if (!lex.peek(')')) {
        fanin.push_back(lex.name());
        while (lex.peek(',')) {
          lex.expect(',');
          fanin.push_back(lex.name());
        }
      }
      lex.expect(')');
      if (!lex.at_end()) lex.fail("trailing characters");
      if (fanin.empty()) throw ParseError("gate '" + head + "' has no inputs", line_no, fcol);
      define(head, line_no, col);
      if (fn == "DFF") {
        if (fanin.size() != 1) throw ParseError("DFF takes exactly one input", line_no, fcol);
        flops.push_back({fanin[0], head});
        continue;
      }
      unsigned n = static_cast<unsigned>(fanin.size());
      GateFunction f;
      try {
        if (fn == "AND") f = GateFunction::and_(n);
        else if (fn == "NAND") f = GateFunction::nand(n);
        else if (fn == "OR") f = GateFunction::or_(n);
        else if (fn == "NOR") f = GateFunction::nor(n);
        else if (fn == "XOR") f = GateFunction::xor_(n);
        else if (fn == "XNOR") f = GateFunction::xnor(n);
        else if (fn == "NOT" || fn == "INV") f = GateFunction::from_family(GateFunction::Family::kNot, n);
        else if (fn == "BUFF" || fn == "BUF") f = GateFunction::from_family(GateFunction::Family::kBuf, n);
        else if (fn == "LUT") f = GateFunction::from_hex(n, lut_table);
        else throw ParseError("unknown gate type '" + fn + "'", line_no, fcol);
      } catch (const ParseError&) {
        throw;
      } catch (const NetlistError& e) {
        throw ParseError(e.what(), line_no, fcol);
      }
      gates.push_back(Gate{head, std::move(f), std::move(fanin)});
    } else {
      lex.fail("expected INPUT(...), OUTPUT(...) or '<net> = <GATE>(...)'");
    }
    if (end == text.size()) break;
  }
  if (outputs.empty()) throw NetlistError("no outputs declared");
  return Circuit(std::move(inputs), std::move(outputs), std::move(gates), std::move(flops), std::move(pragmas));
}

// Emits INPUT and OUTPUT lines, pragmas, flip-flops, then gates in topological order.
inline std::string write_bench(const Circuit& c) {
  std::ostringstream out;
  for (const auto& i : c.inputs()) out << "INPUT(" << i << ")\n";
  for (const auto& o : c.outputs()) out << "OUTPUT(" << o << ")\n";
  for (const auto& p : c.pragmas()) out << p << "\n";
  for (const auto& ff : c.flops()) out << ff.q_output << " = DFF(" << ff.d_input << ")\n";
  for (const auto& g : c.gates()) {
    std::string kw = g.function.bench_keyword();
    out << g.name << " = " << kw;
    if (kw == "LUT") out << " " << g.function.table_hex();
    out << "(";
    for (std::size_t i = 0; i < g.fanin.size(); ++i) out << (i ? ", " : "") << g.fanin[i];
    out << ")\n";
  }
  return out.str();
}

}  // namespace camoforge
