#include "gpw/coxeter.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gpw {

SimpleGraph::SimpleGraph(int n) : n_(n), adj_(static_cast<std::size_t>(std::max(n, 0)), 0) {
  if (n < 0 || n > 64) throw std::invalid_argument("graph size must be in [0, 64]");
}

SimpleGraph SimpleGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  SimpleGraph g(n);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n)
      throw std::invalid_argument("edge endpoint out of range: " + std::to_string(a) + "-" + std::to_string(b));
    if (a == b) throw std::invalid_argument("self-loop at vertex " + std::to_string(a));
    g.adj_[static_cast<std::size_t>(a)] |= std::uint64_t{1} << b;
    g.adj_[static_cast<std::size_t>(b)] |= std::uint64_t{1} << a;
  }
  return g;
}

std::vector<std::pair<int, int>> SimpleGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      if (adjacent(a, b)) out.emplace_back(a, b);
  return out;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(w.letters[i]);
  }
  return s;
}

std::string to_string(const TripleSplit& s) {
  return "(" + to_string(s.w1) + ", " + to_string(s.w2) + ", " + to_string(s.w3) + ")";
}

std::string to_string(const RhoTuple& r) {
  return "(" + std::to_string(r.nl) + ", " + std::to_string(r.nr) + ", " + to_string(r.ul) + ", " +
         to_string(r.ur) + ", " + to_string(r.t) + ")";
}

Word normal_form(const SimpleGraph& g, const std::vector<Letter>& seq) {
  // Tits: appending x to a reduced word cancels iff some x can be reached
  // from the right end through letters commuting with x.
  std::vector<Letter> red;
  red.reserve(seq.size());
  for (Letter x : seq) {
    if (x < 0 || x >= g.size()) throw std::invalid_argument("letter out of range: " + std::to_string(x));
    bool cancelled = false;
    for (std::size_t j = red.size(); j-- > 0;) {
      if (red[j] == x) {
        red.erase(red.begin() + static_cast<std::ptrdiff_t>(j));
        cancelled = true;
        break;
      }
      if (!g.adjacent(red[j], x)) break;
    }
    if (!cancelled) red.push_back(x);
  }
  // Lex-least linear extension of the commutation order: repeatedly emit the
  // smallest letter that can be moved to the front.
  std::vector<Letter> out;
  out.reserve(red.size());
  while (!red.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < red.size(); ++i) {
      if (red[i] >= red[best]) continue;
      bool movable = true;
      for (std::size_t j = 0; j < i && movable; ++j) movable = g.adjacent(red[j], red[i]);
      if (movable) best = i;
    }
    out.push_back(red[best]);
    red.erase(red.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return Word(std::move(out));
}

Word multiply(const SimpleGraph& g, const Word& a, const Word& b) {
  std::vector<Letter> s = a.letters;
  s.insert(s.end(), b.letters.begin(), b.letters.end());
  return normal_form(g, s);
}

Word multiply(const SimpleGraph& g, const std::vector<Word>& ws) {
  std::vector<Letter> s;
  for (const auto& w : ws) s.insert(s.end(), w.letters.begin(), w.letters.end());
  return normal_form(g, s);
}

Word inverse(const SimpleGraph& g, const Word& w) {
  return normal_form(g, std::vector<Letter>(w.letters.rbegin(), w.letters.rend()));
}

bool is_reduced_product(const SimpleGraph& g, const std::vector<Word>& ws) {
  int total = 0;
  for (const auto& w : ws) total += w.length();
  return multiply(g, ws).length() == total;
}

bool starts_with(const SimpleGraph& g, const Word& w, const Word& u) {
  return multiply(g, inverse(g, u), w).length() == w.length() - u.length();
}

bool ends_with(const SimpleGraph& g, const Word& w, const Word& u) {
  return multiply(g, w, inverse(g, u)).length() == w.length() - u.length();
}

bool starts_with_letter(const SimpleGraph& g, const Word& w, Letter v) {
  for (Letter x : w.letters) {
    if (x == v) return true;
    if (!g.adjacent(x, v)) return false;
  }
  return false;
}

bool ends_with_letter(const SimpleGraph& g, const Word& w, Letter v) {
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    if (*it == v) return true;
    if (!g.adjacent(*it, v)) return false;
  }
  return false;
}

Word clique_prefix(const SimpleGraph& g, const Word& w) {
  std::vector<Letter> s;
  for (Letter v = 0; v < g.size(); ++v)
    if (starts_with_letter(g, w, v)) s.push_back(v);
  return Word(std::move(s));
}

Word clique_suffix(const SimpleGraph& g, const Word& w) {
  std::vector<Letter> s;
  for (Letter v = 0; v < g.size(); ++v)
    if (ends_with_letter(g, w, v)) s.push_back(v);
  return Word(std::move(s));
}

std::pair<Word, Word> clique_prefix_suffix(const SimpleGraph& g, const Word& w) {
  return {clique_prefix(g, w), clique_suffix(g, w)};
}

bool is_clique_word(const SimpleGraph& g, const Word& w) {
  for (int i = 0; i < w.length(); ++i)
    for (int j = i + 1; j < w.length(); ++j)
      if (!g.adjacent(w[i], w[j])) return false;
  return true;
}

std::vector<Word> cliques(const SimpleGraph& g) {
  std::vector<Word> out;
  const int n = g.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Letter> s;
    for (int v = 0; v < n; ++v)
      if ((mask >> v) & 1u) s.push_back(v);
    Word w(std::move(s));
    if (is_clique_word(g, w)) out.push_back(std::move(w));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Word> subcliques(const Word& t) {
  std::vector<Word> out;
  const int n = t.length();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<Letter> s;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) s.push_back(t[i]);
    out.emplace_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

int max_clique_size(const SimpleGraph& g) {
  int m = 0;
  for (const auto& c : cliques(g)) m = std::max(m, c.length());
  return m;
}

std::vector<Word> enumerate_words(const SimpleGraph& g, int D) {
  std::vector<Word> all{Word{}};
  std::vector<Word> layer{Word{}};
  for (int k = 0; k < D && !layer.empty(); ++k) {
    std::set<Word> next;
    for (const auto& w : layer)
      for (Letter v = 0; v < g.size(); ++v) {
        if (ends_with_letter(g, w, v)) continue;
        std::vector<Letter> s = w.letters;
        s.push_back(v);
        next.insert(normal_form(g, s));
      }
    layer.assign(next.begin(), next.end());
    all.insert(all.end(), layer.begin(), layer.end());
  }
  return all;  // layers are sorted and increase in length
}

bool in_left(const SimpleGraph& g, const Word& u, const Word& w) {
  return is_reduced_product(g, {u, w});
}
bool in_right(const SimpleGraph& g, const Word& u, const Word& w) {
  return is_reduced_product(g, {w, u});
}
bool in_left_tilde(const SimpleGraph& g, const Word& u, const Word& w) {
  return in_left(g, u, w) && clique_prefix(g, multiply(g, u, w)) == clique_prefix(g, u);
}
bool in_right_tilde(const SimpleGraph& g, const Word& u, const Word& w) {
  return in_right(g, u, w) && clique_suffix(g, multiply(g, w, u)) == clique_suffix(g, u);
}

WordSets word_sets(const SimpleGraph& g, const Word& u, int n, int D) {
  WordSets s;
  s.depth = D;
  for (const auto& w : enumerate_words(g, D)) {
    if (in_left(g, u, w)) {
      s.left.push_back(w);
      if (in_left_tilde(g, u, w)) {
        s.left_tilde.push_back(w);
        if (w.length() == n) s.left_tilde_n.push_back(w);
      }
    }
    if (in_right(g, u, w)) {
      s.right.push_back(w);
      if (in_right_tilde(g, u, w)) {
        s.right_tilde.push_back(w);
        if (w.length() == n) s.right_tilde_n.push_back(w);
      }
    }
  }
  return s;
}

namespace {

void collect_prefixes(const SimpleGraph& g, const Word& w, const Word& acc, std::set<Word>& out) {
  if (!out.insert(acc).second) return;
  for (Letter v : clique_prefix(g, w).letters) {
    Word rest = multiply(g, Word({v}), w);
    std::vector<Letter> s = acc.letters;
    s.push_back(v);
    collect_prefixes(g, rest, normal_form(g, s), out);
  }
}

// Words of exactly length n satisfying the right-tilde condition for u.
std::vector<Word> right_tilde_exact(const SimpleGraph& g, const Word& u, int n) {
  std::vector<Word> out;
  for (const auto& w : enumerate_words(g, n))
    if (w.length() == n && in_right_tilde(g, u, w)) out.push_back(w);
  return out;
}

}  // namespace

std::vector<TripleSplit> triple_splittings(const SimpleGraph& g, const Word& w) {
  std::set<Word> prefixes;
  collect_prefixes(g, w, Word{}, prefixes);
  std::set<TripleSplit> out;
  for (const auto& w1 : prefixes) {
    Word rest = multiply(g, inverse(g, w1), w);
    for (const auto& w2 : subcliques(clique_prefix(g, rest))) {
      Word w3 = multiply(g, w2, rest);  // w2 is an involution
      out.insert({w1, w2, w3});
    }
  }
  return {out.begin(), out.end()};
}

std::vector<TripleSplit> splittings_for_rho(const SimpleGraph& g, const Word& w, const RhoTuple& rho) {
  std::vector<TripleSplit> out;
  if (rho.length() != w.length()) return out;
  const Word ult = multiply(g, rho.ul, rho.t);
  const Word urt = multiply(g, rho.ur, rho.t);
  const auto vls = right_tilde_exact(g, ult, rho.nl);
  const auto vrs = right_tilde_exact(g, urt, rho.nr);
  std::set<TripleSplit> found;
  for (const auto& vl : vls)
    for (const auto& vr : vrs) {
      Word w1 = multiply(g, vl, rho.ul);
      Word w3 = inverse(g, multiply(g, vr, rho.ur));
      if (w1.length() + rho.t.length() + w3.length() != w.length()) continue;
      if (!is_reduced_product(g, {w1, rho.t, w3})) continue;
      if (multiply(g, {w1, rho.t, w3}) != w) continue;
      found.insert({w1, rho.t, w3});
    }
  return {found.begin(), found.end()};
}

RhoTuple rho_of_split(const SimpleGraph& g, const TripleSplit& s) {
  RhoTuple r;
  r.t = s.w2;
  r.ul = multiply(g, clique_suffix(g, multiply(g, s.w1, s.w2)), s.w2);
  r.ur = multiply(g, clique_suffix(g, multiply(g, inverse(g, s.w3), s.w2)), s.w2);
  r.nl = s.w1.length() - r.ul.length();
  r.nr = s.w3.length() - r.ur.length();
  return r;
}

std::vector<CliqueTriple> enumerate_clique_triples(const SimpleGraph& g) {
  const auto cl = cliques(g);
  std::vector<CliqueTriple> out;
  for (const auto& ul : cl)
    for (const auto& ur : cl)
      for (const auto& t : cl) {
        if (!is_reduced_product(g, {ul, t}) || !is_clique_word(g, multiply(g, ul, t))) continue;
        if (!is_reduced_product(g, {t, ur}) || !is_clique_word(g, multiply(g, t, ur))) continue;
        if (!is_reduced_product(g, {ul, t, ur})) continue;
        out.push_back({ul, ur, t});
      }
  std::sort(out.begin(), out.end());
  return out;
}

long c_gamma(const SimpleGraph& g) {
  long c = 0;
  for (const auto& tr : enumerate_clique_triples(g)) c += 1L << tr.t.length();
  return c;
}

std::vector<RhoTuple> enumerate_rho(const SimpleGraph& g, int d) {
  std::vector<RhoTuple> out;
  for (const auto& tr : enumerate_clique_triples(g)) {
    const int rest = d - tr.ul.length() - tr.ur.length() - tr.t.length();
    for (int nl = 0; nl <= rest; ++nl) out.push_back({nl, rest - nl, tr.ul, tr.ur, tr.t});
  }
  return out;
}

std::vector<int> shuffle_permutation(const SimpleGraph& g, const std::vector<Letter>& source) {
  const Word target = normal_form(g, source);
  if (target.length() != static_cast<int>(source.size()))
    throw std::invalid_argument("shuffle of a non-reduced product");
  std::vector<int> perm(source.size());
  std::vector<std::vector<int>> where(static_cast<std::size_t>(g.size()));
  for (std::size_t i = 0; i < source.size(); ++i) where[static_cast<std::size_t>(source[i])].push_back(static_cast<int>(i));
  std::vector<std::size_t> seen(static_cast<std::size_t>(g.size()), 0);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    auto x = static_cast<std::size_t>(target.letters[i]);
    perm[i] = where[x][seen[x]++];
  }
  return perm;
}

std::vector<int> shuffle_permutation(const SimpleGraph& g, const std::vector<Word>& legs) {
  std::vector<Letter> s;
  for (const auto& w : legs) s.insert(s.end(), w.letters.begin(), w.letters.end());
  return shuffle_permutation(g, s);
}

}  // namespace gpw
