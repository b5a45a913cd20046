// Right edge of oriented percolation started from infinite subsets of the ray
// {(-k, k) : k >= 0}, computed exactly.
//
// Column c holds the sites (c, j - c) for j = 0..n, one per diagonal D_j. The
// column state is the bitmask of those sites reachable from the start set. It
// only depends on the previous column and on 2n fresh edges (the right edges
// leaving column c-1 and the up edges inside column c), so the states form a
// Markov chain along c. Bit 0 is the start indicator of (c, -c).

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fpp/bypass.hpp"
#include "fpp/errors.hpp"

namespace fpp {

namespace {

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;

Rational power(const Rational& base, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

struct Chain {
  int n = 0;
  int states = 0;
  Mat start;    // transitions into a start column
  Mat nostart;  // transitions into a column without a start

  bool top(int s) const { return (s >> n) & 1; }
};

Chain build_chain(int n, const Rational& p) {
  Chain ch;
  ch.n = n;
  ch.states = 1 << (n + 1);
  ch.start.assign(ch.states, Vec(ch.states, Rational(0)));
  ch.nostart.assign(ch.states, Vec(ch.states, Rational(0)));
  const int edges = 2 * n;
  std::vector<Rational> weight(edges + 1);
  for (int k = 0; k <= edges; ++k) weight[k] = power(p, k) * power(1 - p, edges - k);
  for (int s = 0; s < ch.states; ++s) {
    for (int cfg = 0; cfg < (1 << edges); ++cfg) {
      // bits 0..n-1: right edge out of (previous column, diagonal j);
      // bits n..2n-1: up edge out of (this column, diagonal j).
      for (int st = 0; st < 2; ++st) {
        int next = st;
        for (int j = 1; j <= n; ++j) {
          const bool from_left = ((s >> (j - 1)) & 1) && ((cfg >> (j - 1)) & 1);
          const bool from_below = ((next >> (j - 1)) & 1) && ((cfg >> (n + j - 1)) & 1);
          if (from_left || from_below) next |= 1 << j;
        }
        (st ? ch.start : ch.nostart)[s][next] += weight[std::popcount(static_cast<unsigned>(cfg))];
      }
    }
  }
  return ch;
}

Vec row_times(const Vec& v, const Mat& m) {
  Vec out(v.size(), Rational(0));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) out[j] += v[i] * m[i][j];
  }
  return out;
}

Vec times_col(const Mat& m, const Vec& h) {
  Vec out(h.size(), Rational(0));
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (m[i][j] != 0) out[i] += m[i][j] * h[j];
    }
  }
  return out;
}

// Solves A x = b by Gauss-Jordan elimination.
Vec solve(Mat A, Vec b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && A[piv][col] == 0) ++piv;
    if (piv == n) throw std::logic_error("oracle: singular system");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    const Rational inv = 1 / A[col][col];
    for (std::size_t j = col; j < n; ++j) A[col][j] *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || A[r][col] == 0) continue;
      const Rational factor = A[r][col];
      for (std::size_t j = col; j < n; ++j) A[r][j] -= factor * A[col][j];
      b[r] -= factor * b[col];
    }
  }
  return b;
}

// pi T = pi with sum(pi) = 1.
Vec stationary(const Mat& T) {
  const std::size_t n = T.size();
  Mat A(n, Vec(n, Rational(0)));
  Vec b(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) A[i][j] = T[j][i] - (i == j ? 1 : 0);
  }
  for (std::size_t j = 0; j < n; ++j) A[n - 1][j] = 1;
  b[n - 1] = 1;
  return solve(A, b);
}

// M diag(top bit clear)
Mat mask_top(const Chain& ch, const Mat& M, bool keep_set) {
  Mat out = M;
  for (auto& row : out) {
    for (int j = 0; j < ch.states; ++j) {
      if (ch.top(j) != keep_set) row[j] = 0;
    }
  }
  return out;
}

// P(no top bit in the columns after the current one, all without starts).
Vec tail_escape(const Chain& ch) {
  const Mat q = mask_top(ch, ch.nostart, false);
  Vec h(ch.states, Rational(1));
  for (int k = 0; k <= ch.n + 1; ++k) h = times_col(q, h);
  return h;
}

Rational top_mass(const Chain& ch, const Vec& v, const Vec& h) {
  Rational acc = 0;
  for (int s = 0; s < ch.states; ++s) {
    if (ch.top(s)) acc += v[s] * h[s];
  }
  return acc;
}

void check_p(const Rational& p) {
  using boost::multiprecision::denominator;
  if (!(p > 0 && p <= 1)) throw DomainError("oracle: p must lie in (0, 1]");
  if (denominator(p) > 16) throw DomainError("oracle: p must have denominator <= 16");
}

}  // namespace

Rational expected_rightmost(int n, int m, const Rational& p, const std::vector<int>& holes) {
  if (n < 1 || n > 3) throw DomainError("oracle: n must lie in 1..3");
  if (m < 0 || m > 2) throw DomainError("oracle: m must lie in 0..2");
  check_p(p);
  for (int h : holes) {
    if (h > 0 || h < -16) throw DomainError("oracle: holes must be ray sites with -16 <= x <= 0");
  }
  const Chain ch = build_chain(n, p);
  // Every column <= L is a start column; L+1..m are listed explicitly.
  const int L = holes.empty() ? m : *std::min_element(holes.begin(), holes.end()) - 1;
  auto is_start = [&](int c) {
    return c <= m && std::find(holes.begin(), holes.end(), c) == holes.end();
  };
  auto T = [&](int c) -> const Mat& { return is_start(c) ? ch.start : ch.nostart; };

  // h[c - L] = P(no top bit after column c | state at c), for L <= c <= m.
  std::vector<Vec> h(static_cast<std::size_t>(m - L) + 1);
  h[m - L] = tail_escape(ch);
  for (int c = m - 1; c >= L; --c) h[c - L] = times_col(mask_top(ch, T(c + 1), false), h[c + 1 - L]);
  const Vec& hL = h[0];
  const Vec& h_tail = h[m - L];

  const Vec pi = stationary(ch.start);
  Vec piD1 = pi;
  for (int s = 0; s < ch.states; ++s) {
    if (!ch.top(s)) piD1[s] = 0;
  }
  // Columns s <= L: P(r_n = s) = pi D1 Q^{L-s} h_L with Q = T_start D0.
  const Mat Q = mask_top(ch, ch.start, false);
  Mat IQ(ch.states, Vec(ch.states, Rational(0)));
  for (int i = 0; i < ch.states; ++i) {
    for (int j = 0; j < ch.states; ++j) IQ[i][j] = (i == j ? 1 : 0) - Q[i][j];
  }
  const Vec x = solve(IQ, hL);
  const Vec y = solve(IQ, x);
  const Vec Qy = times_col(Q, y);
  Rational prob = 0, mean = 0;
  for (int s = 0; s < ch.states; ++s) {
    prob += piD1[s] * x[s];
    mean += piD1[s] * (Rational(L) * x[s] - Qy[s]);
  }
  // Columns after L, forward from the stationary law at L.
  Vec v = pi;
  for (int c = L + 1; c <= m + n + 1; ++c) {
    v = row_times(v, T(c));
    const Rational pc = top_mass(ch, v, c <= m ? h[c - L] : h_tail);
    prob += pc;
    mean += Rational(c) * pc;
  }
  if (prob != 1) throw std::logic_error("oracle: right-edge law does not sum to one");
  return mean;
}

OracleResult durrett_oracle(int n, int m, const Rational& p, const Rational& c1,
                            const Rational& c2, const std::vector<int>& holes) {
  if (m < 1) throw DomainError("oracle: m must lie in 1..2");
  const Rational c_f = c1 - c2;
  if (!(c_f > 0)) throw DomainError("oracle: need C_f = f(1,-1) > 0");
  OracleResult r;
  r.n = n;
  r.m = m;
  r.p = p;
  r.c_f = c_f;
  r.holes = holes;
  // On D_n the site (x, n - x) has f = C_f x + c2 n.
  auto f_of = [&](const Rational& ex) { return c_f * ex + c2 * n; };
  r.e_ray = f_of(expected_rightmost(n, 0, p, {}));
  r.e_ray_ext = f_of(expected_rightmost(n, m, p, {}));
  r.e_A = f_of(expected_rightmost(n, 0, p, holes));
  r.e_A_ext = f_of(expected_rightmost(n, m, p, holes));
  return r;
}

RightmostLaw rightmost_law_transfer(const std::vector<int>& start_x, int n, const Rational& p) {
  if (start_x.empty()) throw DomainError("rightmost_law_transfer: empty start set");
  if (n < 1 || n > 4) throw DomainError("rightmost_law_transfer: n must lie in 1..4");
  check_p(p);
  const Chain ch = build_chain(n, p);
  const int lo = *std::min_element(start_x.begin(), start_x.end());
  const int hi = *std::max_element(start_x.begin(), start_x.end());
  auto T = [&](int c) -> const Mat& {
    return std::find(start_x.begin(), start_x.end(), c) != start_x.end() ? ch.start : ch.nostart;
  };
  const int end = hi + n + 1;
  std::vector<Vec> h(static_cast<std::size_t>(end - lo) + 2);
  h[end - lo + 1] = tail_escape(ch);
  for (int c = end - 1; c >= lo - 1; --c)
    h[c - lo + 1] = times_col(mask_top(ch, T(c + 1), false), h[c - lo + 2]);

  RightmostLaw law;
  Vec v(ch.states, Rational(0));
  v[0] = 1;
  if (h[0][0] != 0) law[std::nullopt] = h[0][0];
  for (int c = lo; c <= end; ++c) {
    v = row_times(v, T(c));
    const Rational pc = top_mass(ch, v, h[c - lo + 1]);
    if (pc != 0) law[c] = pc;
  }
  return law;
}

RightmostLaw rightmost_law_enumerated(const std::vector<int>& start_x, int n, const Rational& p) {
  if (start_x.empty()) throw DomainError("rightmost_law_enumerated: empty start set");
  check_p(p);
  const int lo = *std::min_element(start_x.begin(), start_x.end());
  const int hi = *std::max_element(start_x.begin(), start_x.end());
  // Edges out of the sites (x, j - x) with j < n and lo <= x <= hi + j.
  struct E {
    int x, j;
    bool up;
  };
  std::vector<E> edges;
  for (int j = 0; j < n; ++j) {
    for (int x = lo; x <= hi + j; ++x) {
      edges.push_back({x, j, false});
      edges.push_back({x, j, true});
    }
  }
  if (edges.size() > 24) throw DomainError("rightmost_law_enumerated: more than 24 edges");
  const int E_count = static_cast<int>(edges.size());
  const int width = hi + n - lo + 1;
  auto index = [&](int x, int j, bool up) {
    for (int i = 0; i < E_count; ++i) {
      if (edges[i].x == x && edges[i].j == j && edges[i].up == up) return i;
    }
    return -1;
  };
  std::vector<int> right_idx(static_cast<std::size_t>(n) * width, -1), up_idx(right_idx);
  for (int j = 0; j < n; ++j) {
    for (int x = lo; x <= hi + j; ++x) {
      right_idx[j * width + (x - lo)] = index(x, j, false);
      up_idx[j * width + (x - lo)] = index(x, j, true);
    }
  }
  std::vector<Rational> weight(E_count + 1);
  for (int k = 0; k <= E_count; ++k) weight[k] = power(p, k) * power(1 - p, E_count - k);

  RightmostLaw law;
  std::vector<char> cur(width), next(width);
  for (long long cfg = 0; cfg < (1LL << E_count); ++cfg) {
    std::fill(cur.begin(), cur.end(), 0);
    for (int s : start_x) cur[s - lo] = 1;
    for (int j = 0; j < n; ++j) {
      std::fill(next.begin(), next.end(), 0);
      for (int x = lo; x <= hi + j; ++x) {
        if (!cur[x - lo]) continue;
        if ((cfg >> up_idx[j * width + (x - lo)]) & 1) next[x - lo] = 1;
        if ((cfg >> right_idx[j * width + (x - lo)]) & 1) next[x - lo + 1] = 1;
      }
      cur.swap(next);
    }
    std::optional<int> r;
    for (int i = width - 1; i >= 0; --i) {
      if (cur[i]) {
        r = lo + i;
        break;
      }
    }
    law[r] += weight[std::popcount(static_cast<unsigned long long>(cfg))];
  }
  for (auto it = law.begin(); it != law.end();) {
    if (it->second == 0)
      it = law.erase(it);
    else
      ++it;
  }
  return law;
}

namespace {

// Decimal integer text; leading zeros are dropped because cpp_int reads a
// leading 0 as an octal prefix.
boost::multiprecision::cpp_int decimal_int(const std::string& t) {
  if (t.empty() || t == "-" || t == "+") throw std::invalid_argument("empty integer");
  const bool negative = t[0] == '-';
  std::string body = t.substr(t[0] == '-' || t[0] == '+' ? 1 : 0);
  if (body.empty() || body.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("not an integer");
  body.erase(0, std::min(body.find_first_not_of('0'), body.size() - 1));
  boost::multiprecision::cpp_int v(body);
  return negative ? boost::multiprecision::cpp_int(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw ConfigError("parse_rational: empty value");
  try {
    if (const auto slash = s.find('/'); slash != std::string::npos) {
      const auto den = decimal_int(s.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator");
      return Rational(decimal_int(s.substr(0, slash)), den);
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(decimal_int(s));
    // Decimal: digits after the point become the denominator power of ten.
    const std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    boost::multiprecision::cpp_int den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::string digits = whole + frac;
    return Rational(decimal_int(digits == "-" || digits.empty() ? "0" : digits), den);
  } catch (const std::exception&) {
    throw ConfigError("parse_rational: cannot parse '" + text + "'");
  }
}

}  // namespace fpp
