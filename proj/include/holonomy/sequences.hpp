#pragma once

// Symmetry-breaking sign sequences and the acyclicity-certificate
// language used by the rectifier: the paperfolding-style lambda sequence
// with round marks, the Thue-parity variant mu, and the alpha sequence
// whose segment language admits short square violations.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace holonomy::seq {

// Signs are +1 / -1 throughout.
using Sign = int;

inline Sign lambda(std::int64_t k) {
  if (k <= 0) throw std::invalid_argument("lambda: k must be >= 1");
  std::uint64_t u = static_cast<std::uint64_t>(k);
  u >>= std::countr_zero(u);  // odd part
  return (u & 3u) == 1u ? +1 : -1;
}

// Round positions are k = 2^i (4^c + j^2), j < 2^c.
inline bool is_round(std::int64_t k, int c) {
  if (k <= 0 || c < 1 || c > 15) return false;
  const std::uint64_t base = 1ull << (2 * c);
  const std::uint64_t jmax = 1ull << c;
  std::uint64_t u = static_cast<std::uint64_t>(k);
  while (u >= base) {
    if (u < 2 * base) {
      std::uint64_t rem = u - base;
      auto j = static_cast<std::uint64_t>(std::llround(std::sqrt(double(rem))));
      for (std::uint64_t jj = (j > 0 ? j - 1 : 0); jj <= j + 1; ++jj)
        if (jj < jmax && jj * jj == rem) return true;
      return false;
    }
    if (u & 1u) return false;
    u >>= 1;
  }
  return false;
}

// lambda with the mark exception: positions right after a round k are
// forced to '-', producing window patterns impossible in the pure
// sequence.
inline Sign lambda_marked(std::int64_t k, int c = 2) {
  if (k <= 0) throw std::invalid_argument("lambda_marked: k must be >= 1");
  if (k >= 2 && is_round(k - 1, c)) return -1;
  return lambda(k);
}

inline Sign mu(std::int64_t k) {
  if (k < 0) throw std::invalid_argument("mu: k must be >= 0");
  int pc = std::popcount(static_cast<std::uint64_t>(k));
  return (pc % 2 == 1 && pc > 1) ? -1 : +1;
}

// Standard Thue-Morse parity, kept as an optional generator.
inline Sign thue(std::int64_t k) {
  if (k < 0) throw std::invalid_argument("thue: k must be >= 0");
  return std::popcount(static_cast<std::uint64_t>(k)) % 2 == 1 ? -1 : +1;
}

enum class GenKind { Lambda, LambdaMarked, Mu, Thue };

// Uniform evaluation facade for the CLI and the plugins.
struct SignSeq {
  GenKind kind = GenKind::Lambda;
  int c = 2;  // mark constant for lambda_marked

  Sign at(std::int64_t k) const {
    switch (kind) {
      case GenKind::Lambda: return lambda(k);
      case GenKind::LambdaMarked: return lambda_marked(k, c);
      case GenKind::Mu: return mu(k);
      case GenKind::Thue: return thue(k);
    }
    throw std::logic_error("unreachable");
  }
};

// ---------------------------------------------------------------------------
// alpha: per index k, the pair <alpha[k], mu(k)> where alpha[k] is the
// digit of k's binary string selected by k's own suffix structure, or a
// filler when the selector overshoots.

// Suffix s(k): pad binary(k) with leading "00", take the shortest suffix
// starting with "00" (the last occurrence of "00"), drop the "00", and
// read the remaining bits x as value("1"+x) + 2.
inline std::int64_t alpha_suffix(std::int64_t k) {
  if (k <= 0) throw std::invalid_argument("alpha_suffix: k must be >= 1");
  std::string chi;
  for (std::int64_t u = k; u > 0; u >>= 1) chi.push_back(char('0' + (u & 1)));
  std::reverse(chi.begin(), chi.end());
  std::string padded = "00" + chi;
  std::size_t pos = padded.rfind("00");
  std::string x = padded.substr(pos + 2);
  if (x.size() > 60) return std::numeric_limits<std::int64_t>::max();
  std::int64_t v = 1;
  for (char ch : x) v = (v << 1) | (ch - '0');
  return v + 2;
}

// Alphabet letter of the alpha sequence.
struct AlphaSym {
  std::uint8_t digit = 2;  // 0, 1, or the filler (2)
  Sign m = +1;

  bool operator==(const AlphaSym&) const = default;
  auto operator<=>(const AlphaSym&) const = default;
  char code() const {
    static const char tab[] = {'a', 'b', 'c', 'd', 'e', 'f'};
    return tab[digit * 2 + (m > 0 ? 0 : 1)];
  }
};

inline AlphaSym alpha(std::int64_t k) {
  if (k <= 0) throw std::invalid_argument("alpha: k must be >= 1");
  AlphaSym sym;
  sym.m = mu(k);
  std::int64_t n = 64 - std::countl_zero(static_cast<std::uint64_t>(k));
  std::int64_t j = alpha_suffix(k);
  if (j <= n) {
    // 1-based digit from the least significant end; low-bit-driven
    // probes keep short squares out of the segment language
    sym.digit = static_cast<std::uint8_t>((k >> (j - 1)) & 1);
  } else {
    sym.digit = 2;
  }
  return sym;
}

inline std::vector<AlphaSym> alpha_window(std::int64_t start, std::size_t len) {
  std::vector<AlphaSym> out;
  out.reserve(len);
  for (std::size_t t = 0; t < len; ++t) out.push_back(alpha(start + std::int64_t(t)));
  return out;
}

// Segment membership is decided against a position horizon: the alpha
// selector is driven by low bits of k, so factors of the lengths we ever
// query recur within the horizon. Backed by a suffix array over the
// generated stream, making queries O(|y| log H).
class AlphaIndex {
 public:
  explicit AlphaIndex(std::int64_t horizon = 1 << 20) : horizon_(horizon) {
    text_.resize(static_cast<std::size_t>(horizon));
    for (std::int64_t k = 1; k <= horizon; ++k)
      text_[static_cast<std::size_t>(k - 1)] = alpha(k).code();
    build_suffix_array();
  }

  std::int64_t horizon() const { return horizon_; }

  // First occurrence as a 1-based sequence index, or -1.
  std::int64_t find(const std::string& pat) const {
    if (pat.empty()) return 1;
    auto it = std::lower_bound(sa_.begin(), sa_.end(), pat,
                               [&](std::int32_t sa_pos, const std::string& p) {
                                 return text_.compare(sa_pos, p.size(), p) < 0;
                               });
    if (it == sa_.end()) return -1;
    if (text_.compare(*it, pat.size(), pat) != 0) return -1;
    return *it + 1;
  }

  bool contains(const std::string& pat) const { return find(pat) >= 0; }

  static std::string encode(const std::vector<AlphaSym>& w) {
    std::string s;
    s.reserve(w.size());
    for (const auto& sym : w) s.push_back(sym.code());
    return s;
  }

 private:
  void build_suffix_array() {
    const std::int32_t n = static_cast<std::int32_t>(text_.size());
    sa_.resize(n);
    std::vector<std::int32_t> rank(n), tmp(n), cnt;
    for (std::int32_t i = 0; i < n; ++i) rank[i] = static_cast<unsigned char>(text_[i]);
    // initial order: counting sort by first character
    cnt.assign(257, 0);
    for (std::int32_t i = 0; i < n; ++i) cnt[rank[i] + 1]++;
    for (std::int32_t i = 1; i <= 256; ++i) cnt[i] += cnt[i - 1];
    for (std::int32_t i = 0; i < n; ++i) sa_[cnt[rank[i]]++] = i;
    std::vector<std::int32_t> sa2(n);
    for (std::int32_t k = 1; k < n; k <<= 1) {
      // counting sort by second key then first key
      std::int32_t classes = *std::max_element(rank.begin(), rank.end()) + 2;
      cnt.assign(classes + 1, 0);
      std::int32_t p = 0;
      for (std::int32_t i = n - k; i < n; ++i) sa2[p++] = i;
      for (std::int32_t i : sa_)
        if (i >= k) sa2[p++] = i - k;
      for (std::int32_t i = 0; i < n; ++i) cnt[rank[i] + 1]++;
      for (std::int32_t i = 1; i <= classes; ++i) cnt[i] += cnt[i - 1];
      for (std::int32_t i : sa2) sa_[cnt[rank[i]]++] = i;
      tmp[sa_[0]] = 0;
      for (std::int32_t i = 1; i < n; ++i) {
        auto key = [&](std::int32_t x) {
          return std::pair<std::int32_t, std::int32_t>(
              rank[x], x + k < n ? rank[x + k] : -1);
        };
        tmp[sa_[i]] = tmp[sa_[i - 1]] + (key(sa_[i - 1]) < key(sa_[i]) ? 1 : 0);
      }
      rank = tmp;
      if (rank[sa_[n - 1]] == n - 1) break;
    }
  }

  std::int64_t horizon_;
  std::string text_;
  std::vector<std::int32_t> sa_;
};

inline const AlphaIndex& alpha_index() {
  static const AlphaIndex idx;
  return idx;
}

inline bool is_alpha_segment(const std::vector<AlphaSym>& y) {
  if (y.empty()) return true;
  return alpha_index().contains(AlphaIndex::encode(y));
}

// Shortest window of ss that is not an alpha segment, scanning lengths
// upward; the square lemma guarantees one exists for |s| > 2.
struct SquareViolation {
  bool found = false;
  std::size_t offset = 0;
  std::size_t length = 0;
  std::vector<AlphaSym> window;
};

inline SquareViolation find_square_violation(const std::vector<AlphaSym>& s) {
  SquareViolation out;
  if (s.size() <= 2) return out;
  std::vector<AlphaSym> ss(s);
  ss.insert(ss.end(), s.begin(), s.end());
  std::string text = AlphaIndex::encode(ss);
  const AlphaIndex& idx = alpha_index();
  const bool s_itself_ok = idx.contains(text.substr(0, s.size()));
  for (std::size_t len = 1; len <= ss.size(); ++len) {
    std::size_t lo = 0, hi = ss.size() - len;
    if (s_itself_ok) {
      // all windows inside one copy are segments; only seam crossers can fail
      lo = s.size() >= len ? s.size() - len + 1 : 0;
      hi = std::min(hi, s.size() - 1);
    }
    for (std::size_t off = lo; off <= hi; ++off) {
      if (!idx.contains(text.substr(off, len))) {
        out.found = true;
        out.offset = off;
        out.length = len;
        out.window.assign(ss.begin() + off, ss.begin() + off + len);
        return out;
      }
    }
  }
  return out;
}

// Decoder for lambda_marked windows: recovers the absolute offsets at
// which a window can sit, anchoring candidates on visible marks.
class MarkedDecoder {
 public:
  MarkedDecoder(int c, std::int64_t max_k) : c_(c), max_k_(max_k) {
    for (std::int64_t k = 1; k <= max_k + 2; ++k)
      if (is_round(k, c)) rounds_.push_back(k);
  }

  bool round(std::int64_t k) const {
    return std::binary_search(rounds_.begin(), rounds_.end(), k);
  }

  Sign at(std::int64_t k) const {
    if (k >= 2 && round(k - 1)) return -1;
    return lambda(k);
  }

  // marks visible in a window placed at offset k0 (mark flips + to -)
  std::vector<std::int64_t> visible_marks(std::int64_t k0, std::size_t len) const {
    std::vector<std::int64_t> out;
    for (std::int64_t r : rounds_) {
      std::int64_t m = r + 1;
      if (m >= k0 && m < k0 + std::int64_t(len) && lambda(m) == +1) out.push_back(m);
    }
    return out;
  }

  std::vector<std::int64_t> decode(const std::vector<Sign>& w) const {
    std::vector<std::int64_t> hits;
    if (w.empty()) return hits;
    std::vector<std::int64_t> cands;
    for (std::int64_t r : rounds_) {
      std::int64_t m = r + 1;
      if (lambda(m) != +1) continue;  // invisible mark, useless as anchor
      for (std::size_t t = 0; t < w.size(); ++t) {
        if (w[t] != -1) continue;
        std::int64_t k0 = m - std::int64_t(t);
        if (k0 >= 1 && k0 <= max_k_) cands.push_back(k0);
      }
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (std::int64_t k0 : cands) {
      bool ok = true;
      for (std::size_t t = 0; t < w.size() && ok; ++t)
        ok = at(k0 + std::int64_t(t)) == w[t];
      if (ok) hits.push_back(k0);
    }
    return hits;
  }

 private:
  int c_;
  std::int64_t max_k_;
  std::vector<std::int64_t> rounds_;
};

}  // namespace holonomy::seq
