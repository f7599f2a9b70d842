// satdist: learning distributions over satisfying assignments
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "satdist/error.hpp"

namespace satdist {

/// Exact enumeration is refused above this many variables.
inline constexpr std::size_t kEnumerationGuard = 24;

/**
 * A point of the hypercube {-1,+1}^n.
 *
 * Assignments are ordered lexicographically with -1 < +1 and bit 0 most
 * significant, so index() = sum over i of (bit_i == +1) * 2^(n-1-i).
 * Index 0 is the all-minus point, index 2^n - 1 the all-plus point.
 */
class Assignment {
public:
  Assignment() = default;

  explicit Assignment(std::vector<std::int8_t> bits) : bits_(std::move(bits)) {
    for (std::int8_t b : bits_) {
      if (b != -1 && b != +1) throw ConfigError("assignment entries must be -1 or +1");
    }
  }

  static Assignment all_minus(std::size_t n) {
    Assignment a;
    a.bits_.assign(n, -1);
    return a;
  }

  static Assignment from_index(std::uint64_t index, std::size_t n) {
    Assignment a;
    a.bits_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      a.bits_[i] = (index >> (n - 1 - i)) & 1u ? +1 : -1;
    }
    return a;
  }

  /// Parse a string of '-' / '+' characters, e.g. "-++-".
  static Assignment from_string(std::string_view s) {
    std::vector<std::int8_t> bits;
    bits.reserve(s.size());
    for (char c : s) {
      if (c == '+')
        bits.push_back(+1);
      else if (c == '-')
        bits.push_back(-1);
      else
        throw ConfigError("assignment string may contain only '+' and '-'");
    }
    return Assignment(std::move(bits));
  }

  std::uint64_t index() const {
    std::uint64_t idx = 0;
    for (std::int8_t b : bits_) idx = (idx << 1) | (b > 0 ? 1u : 0u);
    return idx;
  }

  std::size_t size() const { return bits_.size(); }
  std::int8_t operator[](std::size_t i) const { return bits_[i]; }
  std::span<const std::int8_t> bits() const { return bits_; }

  std::string to_string() const {
    std::string s(bits_.size(), '-');
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] > 0) s[i] = '+';
    return s;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;

private:
  std::vector<std::int8_t> bits_;
};

/// Truth table: values[k] is true iff f(+1) at the assignment with index k.
struct TruthTable {
  std::size_t n = 0;
  std::vector<bool> values;  // length 2^n
};

/// CNF over variables 1..n, DIMACS literal convention (negative = negated).
/// An empty clause list is the empty conjunction (constant true); an empty
/// clause is unsatisfiable by definition.
struct Cnf {
  std::size_t n = 0;
  std::vector<std::vector<int>> clauses;
};

/// Linear threshold function: satisfied iff <weights, x> >= threshold.
/// The tie <w,x> = threshold counts as satisfying.
struct Ltf {
  std::vector<double> weights;
  double threshold = 0.0;
};

enum class FunctionFormat { dimacs, tt_hex, ltf };

inline const char* format_name(FunctionFormat fmt) {
  switch (fmt) {
    case FunctionFormat::dimacs: return "dimacs";
    case FunctionFormat::tt_hex: return "tt-hex";
    case FunctionFormat::ltf: return "ltf";
  }
  return "?";
}

inline FunctionFormat parse_format(std::string_view name) {
  if (name == "dimacs") return FunctionFormat::dimacs;
  if (name == "tt-hex" || name == "tt_hex" || name == "tthex") return FunctionFormat::tt_hex;
  if (name == "ltf") return FunctionFormat::ltf;
  throw ConfigError("unknown function format: " + std::string(name));
}

/**
 * A Boolean function f : {-1,+1}^n -> {-1,+1}, held as a truth table, a CNF,
 * or a linear threshold function. Evaluation maps satisfied to +1.
 */
class BooleanFunction {
public:
  static BooleanFunction from_truth_table(TruthTable tt) {
    if (tt.n > kEnumerationGuard) throw ConfigError("truth table dimension exceeds enumeration guard");
    if (tt.values.size() != (std::size_t{1} << tt.n))
      throw ConfigError("truth table length must be exactly 2^n");
    BooleanFunction f;
    f.n_ = tt.n;
    f.repr_ = std::move(tt);
    return f;
  }

  static BooleanFunction from_cnf(Cnf cnf) {
    if (cnf.n == 0) throw ConfigError("CNF dimension must be positive");
    for (const auto& clause : cnf.clauses) {
      for (int lit : clause) {
        const int v = lit < 0 ? -lit : lit;
        if (v < 1 || static_cast<std::size_t>(v) > cnf.n)
          throw ConfigError("CNF literal " + std::to_string(lit) + " out of range [1," +
                            std::to_string(cnf.n) + "]");
      }
    }
    BooleanFunction f;
    f.n_ = cnf.n;
    f.repr_ = std::move(cnf);
    return f;
  }

  static BooleanFunction from_ltf(Ltf ltf) {
    if (ltf.weights.empty()) throw ConfigError("LTF needs at least one weight");
    if (!std::isfinite(ltf.threshold)) throw ConfigError("LTF threshold must be finite");
    for (double w : ltf.weights)
      if (!std::isfinite(w)) throw ConfigError("LTF weights must be finite");
    BooleanFunction f;
    f.n_ = ltf.weights.size();
    f.repr_ = std::move(ltf);
    return f;
  }

  std::size_t dimension() const { return n_; }

  const char* kind() const {
    if (std::holds_alternative<TruthTable>(repr_)) return "truth-table";
    if (std::holds_alternative<Cnf>(repr_)) return "cnf";
    return "ltf";
  }

  /// f(x) in {-1,+1}.
  int eval(const Assignment& x) const {
    if (x.size() != n_)
      throw ConfigError("dimension mismatch: assignment has " + std::to_string(x.size()) +
                        " bits, function expects " + std::to_string(n_));
    return eval_bits(x.bits());
  }

  bool satisfied_by(const Assignment& x) const { return eval(x) > 0; }

  /// f at the assignment with the given index, without materializing it.
  int eval_index(std::uint64_t index) const {
    if (const auto* tt = std::get_if<TruthTable>(&repr_)) return tt->values[index] ? +1 : -1;
    scratch_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) scratch_[i] = (index >> (n_ - 1 - i)) & 1u ? +1 : -1;
    return eval_bits(scratch_);
  }

  /// Materialize the truth table (n <= 24).
  TruthTable to_truth_table() const {
    if (n_ > kEnumerationGuard)
      throw ConfigError("dimension too large for truth-table conversion (n > 24)");
    if (const auto* tt = std::get_if<TruthTable>(&repr_)) return *tt;
    TruthTable tt;
    tt.n = n_;
    tt.values.resize(std::size_t{1} << n_);
    for (std::uint64_t idx = 0; idx < tt.values.size(); ++idx) tt.values[idx] = eval_index(idx) > 0;
    return tt;
  }

  const Cnf* as_cnf() const { return std::get_if<Cnf>(&repr_); }
  const Ltf* as_ltf() const { return std::get_if<Ltf>(&repr_); }

private:
  BooleanFunction() = default;

  int eval_bits(std::span<const std::int8_t> x) const {
    if (const auto* tt = std::get_if<TruthTable>(&repr_)) {
      std::uint64_t idx = 0;
      for (std::int8_t b : x) idx = (idx << 1) | (b > 0 ? 1u : 0u);
      return tt->values[idx] ? +1 : -1;
    }
    if (const auto* cnf = std::get_if<Cnf>(&repr_)) {
      for (const auto& clause : cnf->clauses) {
        bool sat = false;
        for (int lit : clause) {
          const int v = lit < 0 ? -lit : lit;
          if ((lit > 0) == (x[static_cast<std::size_t>(v) - 1] > 0)) {
            sat = true;
            break;
          }
        }
        if (!sat) return -1;
      }
      return +1;
    }
    const auto& ltf = std::get<Ltf>(repr_);
    double dot = 0.0;
    for (std::size_t i = 0; i < ltf.weights.size(); ++i)
      dot += x[i] > 0 ? ltf.weights[i] : -ltf.weights[i];
    return dot >= ltf.threshold ? +1 : -1;
  }

  std::size_t n_ = 0;
  std::variant<TruthTable, Cnf, Ltf> repr_;
  mutable std::vector<std::int8_t> scratch_;
};

/**
 * The support of U_{f^-1(1)}: all satisfying assignments in lexicographic
 * order (-1 < +1), stored by index to stay compact at n = 24.
 */
class SatisfyingSet {
public:
  SatisfyingSet(std::size_t n, std::vector<std::uint64_t> indices)
      : n_(n), indices_(std::move(indices)) {}

  std::size_t dimension() const { return n_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::uint64_t index_at(std::size_t i) const { return indices_[i]; }
  Assignment assignment(std::size_t i) const { return Assignment::from_index(indices_[i], n_); }
  const std::vector<std::uint64_t>& indices() const { return indices_; }

private:
  std::size_t n_;
  std::vector<std::uint64_t> indices_;
};

/// Exact f^-1(1) in lexicographic order. Unsatisfiable f gives an empty set.
inline SatisfyingSet enumerate_satisfying(const BooleanFunction& f) {
  const std::size_t n = f.dimension();
  if (n > kEnumerationGuard)
    throw ConfigError("dimension too large for enumeration (n = " + std::to_string(n) + " > 24)");
  std::vector<std::uint64_t> indices;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t idx = 0; idx < total; ++idx)
    if (f.eval_index(idx) > 0) indices.push_back(idx);
  return SatisfyingSet(n, std::move(indices));
}

// ---------------------------------------------------------------------------
// Parsing and serialization
//
// dimacs:  standard DIMACS CNF ("p cnf <n> <m>", clauses 0-terminated).
// tt-hex:  the truth table as one big-endian hex integer whose bit of weight
//          2^k holds f at assignment index k; so the most significant bit is
//          the all-plus assignment and the least significant the all-minus
//          one. "8" with n = 2 is AND(x1,x2). Needs n >= 2 so the bit count
//          is a whole number of hex digits.
// ltf:     one line "w1 w2 ... wn ; theta".
// ---------------------------------------------------------------------------

namespace detail {

inline int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << v;
  return os.str();
}

}  // namespace detail

inline BooleanFunction parse_dimacs(std::istream& in) {
  std::string line;
  std::size_t n = 0, declared_clauses = 0;
  bool have_header = false;
  std::vector<std::vector<int>> clauses;
  std::vector<int> current;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first[0] == 'c') continue;
    if (first == "p") {
      std::string fmt;
      long long nn = -1, mm = -1;
      if (!(ls >> fmt >> nn >> mm) || fmt != "cnf" || nn < 1 || mm < 0)
        throw ConfigError("malformed DIMACS header: '" + line + "'");
      if (have_header) throw ConfigError("duplicate DIMACS header");
      have_header = true;
      n = static_cast<std::size_t>(nn);
      declared_clauses = static_cast<std::size_t>(mm);
      continue;
    }
    if (!have_header) throw ConfigError("DIMACS clause data before 'p cnf' header");
    // first token is a literal; rewind the stream over the whole line
    std::istringstream body(line);
    long long lit;
    while (body >> lit) {
      if (lit == 0) {
        clauses.push_back(current);
        current.clear();
        continue;
      }
      const long long v = lit < 0 ? -lit : lit;
      if (v > static_cast<long long>(n))
        throw ConfigError("DIMACS literal " + std::to_string(lit) + " out of range [1," +
                          std::to_string(n) + "]");
      current.push_back(static_cast<int>(lit));
    }
    if (!body.eof()) throw ConfigError("malformed DIMACS clause line: '" + line + "'");
  }
  if (!have_header) throw ConfigError("missing DIMACS 'p cnf' header");
  if (!current.empty()) throw ConfigError("DIMACS input ends inside an unterminated clause");
  if (clauses.size() != declared_clauses)
    throw ConfigError("DIMACS header declares " + std::to_string(declared_clauses) +
                      " clauses but " + std::to_string(clauses.size()) + " were given");
  return BooleanFunction::from_cnf(Cnf{n, std::move(clauses)});
}

inline BooleanFunction parse_tt_hex(std::string_view text) {
  std::string hex;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    hex.push_back(c);
  }
  if (hex.rfind("0x", 0) == 0 || hex.rfind("0X", 0) == 0) hex.erase(0, 2);
  if (hex.empty()) throw ConfigError("empty truth-table hex string");
  const std::size_t bits = 4 * hex.size();
  std::size_t n = 0;
  while ((std::size_t{1} << n) < bits) ++n;
  if ((std::size_t{1} << n) != bits || n < 2)
    throw ConfigError("truth-table length " + std::to_string(bits) +
                      " bits is not a power of two >= 4");
  if (n > kEnumerationGuard) throw ConfigError("truth table dimension exceeds enumeration guard");
  TruthTable tt;
  tt.n = n;
  tt.values.resize(bits);
  for (std::size_t j = 0; j < hex.size(); ++j) {
    const int d = detail::hex_digit(hex[j]);
    if (d < 0) throw ConfigError(std::string("invalid hex digit '") + hex[j] + "'");
    const std::size_t base = 4 * (hex.size() - 1 - j);  // weight of this digit's low bit
    for (std::size_t b = 0; b < 4; ++b) tt.values[base + b] = (d >> b) & 1;
  }
  return BooleanFunction::from_truth_table(std::move(tt));
}

inline BooleanFunction parse_ltf_text(std::string_view text) {
  std::string body(text);
  const auto semi = body.find(';');
  if (semi == std::string::npos) throw ConfigError("LTF text needs 'w1 ... wn ; theta'");
  std::istringstream ws(body.substr(0, semi));
  std::vector<double> weights;
  double v;
  while (ws >> v) weights.push_back(v);
  if (!ws.eof()) throw ConfigError("malformed LTF weight list");
  std::istringstream ts(body.substr(semi + 1));
  double theta;
  if (!(ts >> theta)) throw ConfigError("malformed LTF threshold");
  std::string rest;
  if (ts >> rest) throw ConfigError("trailing content after LTF threshold");
  return BooleanFunction::from_ltf(Ltf{std::move(weights), theta});
}

inline BooleanFunction parse_function(std::istream& in, FunctionFormat fmt) {
  if (fmt == FunctionFormat::dimacs) return parse_dimacs(in);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (fmt == FunctionFormat::tt_hex) return parse_tt_hex(text);
  return parse_ltf_text(text);
}

inline BooleanFunction parse_function(std::string_view text, FunctionFormat fmt) {
  std::istringstream in{std::string(text)};
  return parse_function(in, fmt);
}

inline std::string serialize_function(const BooleanFunction& f, FunctionFormat fmt) {
  std::ostringstream os;
  switch (fmt) {
    case FunctionFormat::dimacs: {
      const Cnf* cnf = f.as_cnf();
      if (!cnf) throw ConfigError("only CNF functions serialize to DIMACS");
      os << "p cnf " << cnf->n << ' ' << cnf->clauses.size() << '\n';
      for (const auto& clause : cnf->clauses) {
        for (int lit : clause) os << lit << ' ';
        os << "0\n";
      }
      break;
    }
    case FunctionFormat::tt_hex: {
      if (f.dimension() < 2) throw ConfigError("tt-hex needs n >= 2");
      const TruthTable tt = f.to_truth_table();
      const std::size_t digits = tt.values.size() / 4;
      std::string hex(digits, '0');
      for (std::size_t j = 0; j < digits; ++j) {
        const std::size_t base = 4 * (digits - 1 - j);
        int d = 0;
        for (std::size_t b = 0; b < 4; ++b)
          if (tt.values[base + b]) d |= 1 << b;
        hex[j] = "0123456789abcdef"[d];
      }
      os << hex << '\n';
      break;
    }
    case FunctionFormat::ltf: {
      const Ltf* ltf = f.as_ltf();
      if (!ltf) throw ConfigError("only LTF functions serialize to ltf text");
      for (std::size_t i = 0; i < ltf->weights.size(); ++i) {
        if (i) os << ' ';
        os << detail::format_double(ltf->weights[i]);
      }
      os << " ; " << detail::format_double(ltf->threshold) << '\n';
      break;
    }
  }
  return os.str();
}

}  // namespace satdist
