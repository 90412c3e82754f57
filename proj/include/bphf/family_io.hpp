#pragma once

// Line-oriented ASCII family files (bit-exact):
//   line 1:      BPHF 1
//   line 2:      n=<int> l=<int> M=<int> k=<int> kind=<perfect|splitter>
//   line 3:      T=<num>/<den> delta=<num>/<den>
//   lines 4..:   M lines of n space-separated integers in [0, l)
// Trailing garbage and out-of-range values are rejected with line numbers.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bphf/family.hpp"

namespace bphf {

inline const char* kFamilyMagic = "BPHF 1";

template <FamilyLike F>
void write_family(std::ostream& os, const F& family, const BalanceCertificate& cert) {
  if (cert.pattern.l != family.range_size())
    throw parameter_error("certificate pattern range does not match family");
  const char* kind = (cert.pattern.l == cert.pattern.k) ? "perfect" : "splitter";
  os << kFamilyMagic << '\n';
  os << "n=" << family.domain_size() << " l=" << family.range_size() << " M=" << family.size()
     << " k=" << cert.pattern.k << " kind=" << kind << '\n';
  os << "T=" << rat_to_string(cert.T) << " delta=" << rat_to_string(cert.delta) << '\n';
  std::vector<color_t> vals;
  for (std::uint64_t i = 0; i < family.size(); ++i) {
    family.extract(i, vals);
    for (int x = 0; x < family.domain_size(); ++x) {
      if (x) os << ' ';
      os << vals[static_cast<std::size_t>(x)];
    }
    os << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    std::size_t j = line.find(' ', i);
    if (j == std::string::npos) j = line.size();
    out.push_back(line.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

inline std::string expect_kv(const std::string& token, const std::string& key, std::size_t line) {
  if (token.size() <= key.size() + 1 || token.compare(0, key.size(), key) != 0 ||
      token[key.size()] != '=')
    throw parse_error(line, "expected " + key + "=<value>, got '" + token + "'");
  return token.substr(key.size() + 1);
}

inline long long parse_int_strict(const std::string& s, std::size_t line) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw parse_error(line, "malformed integer '" + s + "'");
  return v;
}

inline Rat parse_fraction_strict(const std::string& s, std::size_t line) {
  auto slash = s.find('/');
  if (slash == std::string::npos)
    throw parse_error(line, "expected <num>/<den>, got '" + s + "'");
  try {
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den <= 0) throw parameter_error("denominator must be positive");
    return Rat(num, den);
  } catch (const std::exception& e) {
    throw parse_error(line, "malformed rational '" + s + "': " + e.what());
  }
}

}  // namespace detail

inline CertifiedFamily<FunctionFamily> read_family(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;

  auto next_line = [&](const char* what) {
    if (!std::getline(is, line)) throw parse_error(lineno + 1, std::string("missing ") + what);
    ++lineno;
  };

  next_line("header");
  if (line != kFamilyMagic) throw parse_error(lineno, "bad magic, expected 'BPHF 1'");

  next_line("dimension line");
  auto toks = detail::split_tokens(line);
  if (toks.size() != 5) throw parse_error(lineno, "expected 5 fields: n= l= M= k= kind=");
  long long n = detail::parse_int_strict(detail::expect_kv(toks[0], "n", lineno), lineno);
  long long l = detail::parse_int_strict(detail::expect_kv(toks[1], "l", lineno), lineno);
  long long m = detail::parse_int_strict(detail::expect_kv(toks[2], "M", lineno), lineno);
  long long k = detail::parse_int_strict(detail::expect_kv(toks[3], "k", lineno), lineno);
  std::string kind = detail::expect_kv(toks[4], "kind", lineno);
  if (n < 1 || l < 1 || m < 1) throw parse_error(lineno, "n, l, M must be positive");
  if (k < 1 || k > n) throw parse_error(lineno, "k must satisfy 1 <= k <= n");
  if (kind != "perfect" && kind != "splitter")
    throw parse_error(lineno, "kind must be 'perfect' or 'splitter'");
  if (kind == "perfect" && l != k)
    throw parse_error(lineno, "kind=perfect requires l == k");

  next_line("certificate line");
  toks = detail::split_tokens(line);
  if (toks.size() != 2) throw parse_error(lineno, "expected 2 fields: T= delta=");
  Rat t = detail::parse_fraction_strict(detail::expect_kv(toks[0], "T", lineno), lineno);
  Rat delta = detail::parse_fraction_strict(detail::expect_kv(toks[1], "delta", lineno), lineno);
  if (t <= 0) throw parse_error(lineno, "T must be positive");
  if (delta < 1) throw parse_error(lineno, "delta must be >= 1");

  if (static_cast<unsigned long long>(m) * static_cast<unsigned long long>(n) >
      (1ull << 31))
    throw budget_error("family of " + std::to_string(m) + " x " + std::to_string(n) +
                       " entries exceeds the in-memory limit");
  std::vector<color_t> flat;
  flat.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
  for (long long i = 0; i < m; ++i) {
    next_line("function line");
    auto vals = detail::split_tokens(line);
    if (static_cast<long long>(vals.size()) != n)
      throw parse_error(lineno, "expected " + std::to_string(n) + " values, got " +
                                    std::to_string(vals.size()));
    for (const auto& v : vals) {
      long long c = detail::parse_int_strict(v, lineno);
      if (c < 0 || c >= l)
        throw parse_error(lineno, "value " + v + " out of range [0," + std::to_string(l) + ")");
      flat.push_back(static_cast<color_t>(c));
    }
  }
  if (std::getline(is, line)) throw parse_error(lineno + 1, "trailing garbage after last function");

  BalanceCertificate cert{std::move(t), std::move(delta),
                          SplitPattern::make(static_cast<int>(k), static_cast<int>(l))};
  return {FunctionFamily(static_cast<int>(n), static_cast<int>(l), std::move(flat)),
          std::move(cert)};
}

template <FamilyLike F>
void write_family_file(const std::string& path, const F& family, const BalanceCertificate& cert) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw parameter_error("cannot open '" + path + "' for writing");
  write_family(os, family, cert);
  os.flush();
  if (!os) throw parameter_error("write to '" + path + "' failed");
}

inline CertifiedFamily<FunctionFamily> read_family_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw parameter_error("cannot open '" + path + "' for reading");
  return read_family(is);
}

}  // namespace bphf
