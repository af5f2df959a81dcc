#pragma once

// Word combinatorics of right-angled Coxeter groups.
//
// Vertices of the graph are the letters 0..n-1; the vertex order is the
// integer order. Every group element is represented by its ShortLex-least
// reduced word.

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gpw {

using Letter = int;

class SimpleGraph {
 public:
  SimpleGraph() = default;
  explicit SimpleGraph(int n);

  // Throws std::invalid_argument on self-loops or out-of-range endpoints.
  static SimpleGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
  // Graph on the same vertices with no edges.
  SimpleGraph edgeless() const { return SimpleGraph(n_); }

  int size() const { return n_; }
  bool adjacent(Letter a, Letter b) const {
    return a != b && ((adj_[static_cast<std::size_t>(a)] >> b) & 1u) != 0;
  }
  std::vector<std::pair<int, int>> edges() const;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> adj_;
};

struct Word {
  std::vector<Letter> letters;

  Word() = default;
  explicit Word(std::vector<Letter> l) : letters(std::move(l)) {}

  int length() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }
  Letter operator[](int i) const { return letters[static_cast<std::size_t>(i)]; }

  bool operator==(const Word&) const = default;
  // ShortLex: shorter words first, then lexicographic.
  std::strong_ordering operator<=>(const Word& o) const {
    if (auto c = letters.size() <=> o.letters.size(); c != 0) return c;
    return letters <=> o.letters;
  }
};

// "e" for the identity, otherwise space separated letters.
std::string to_string(const Word& w);

Word normal_form(const SimpleGraph& g, const std::vector<Letter>& seq);
Word multiply(const SimpleGraph& g, const Word& a, const Word& b);
Word multiply(const SimpleGraph& g, const std::vector<Word>& ws);
Word inverse(const SimpleGraph& g, const Word& w);
bool is_reduced_product(const SimpleGraph& g, const std::vector<Word>& ws);

// |u^{-1} w| = |w| - |u|.
bool starts_with(const SimpleGraph& g, const Word& w, const Word& u);
bool ends_with(const SimpleGraph& g, const Word& w, const Word& u);
bool starts_with_letter(const SimpleGraph& g, const Word& w, Letter v);
bool ends_with_letter(const SimpleGraph& g, const Word& w, Letter v);

Word clique_prefix(const SimpleGraph& g, const Word& w);
Word clique_suffix(const SimpleGraph& g, const Word& w);
std::pair<Word, Word> clique_prefix_suffix(const SimpleGraph& g, const Word& w);

bool is_clique_word(const SimpleGraph& g, const Word& w);
// All clique words (including e), ShortLex sorted.
std::vector<Word> cliques(const SimpleGraph& g);
// All sub-clique words of a clique word t (including e and t).
std::vector<Word> subcliques(const Word& t);
int max_clique_size(const SimpleGraph& g);

// All group elements of length <= D, ShortLex sorted.
std::vector<Word> enumerate_words(const SimpleGraph& g, int D);

// Membership predicates for the one-sided word sets.
bool in_left(const SimpleGraph& g, const Word& u, const Word& w);         // |uw| = |u|+|w|
bool in_right(const SimpleGraph& g, const Word& u, const Word& w);        // |wu| = |w|+|u|
bool in_left_tilde(const SimpleGraph& g, const Word& u, const Word& w);   // and s_l(uw) = s_l(u)
bool in_right_tilde(const SimpleGraph& g, const Word& u, const Word& w);  // and s_r(wu) = s_r(u)

struct WordSets {
  int depth = 0;  // every set below is cut at length <= depth
  std::vector<Word> left, right, left_tilde, right_tilde, left_tilde_n, right_tilde_n;
};
WordSets word_sets(const SimpleGraph& g, const Word& u, int n, int D);

struct TripleSplit {
  Word w1, w2, w3;
  bool operator==(const TripleSplit&) const = default;
  auto operator<=>(const TripleSplit&) const = default;
};

struct CliqueTriple {
  Word ul, ur, t;
  bool operator==(const CliqueTriple&) const = default;
  auto operator<=>(const CliqueTriple&) const = default;
};

// (n_l, n_r, u_l, u_r, t)
struct RhoTuple {
  int nl = 0, nr = 0;
  Word ul, ur, t;
  int length() const { return nl + nr + ul.length() + ur.length() + t.length(); }
  bool operator==(const RhoTuple&) const = default;
  auto operator<=>(const RhoTuple&) const = default;
};

// (n_l, n_r, u_l, u_r, t, r) with r a sub-clique of t.
struct TauTuple {
  RhoTuple rho;
  Word r;
  bool operator==(const TauTuple&) const = default;
  auto operator<=>(const TauTuple&) const = default;
};

std::string to_string(const TripleSplit& s);
std::string to_string(const RhoTuple& r);

std::vector<TripleSplit> triple_splittings(const SimpleGraph& g, const Word& w);
// Built from the pattern w1 = v_l u_l, w2 = t, w3 = u_r^{-1} v_r^{-1}; does not
// go through rho_of_split.
std::vector<TripleSplit> splittings_for_rho(const SimpleGraph& g, const Word& w, const RhoTuple& rho);
// Recovery of the unique rho with split in S_w(rho).
RhoTuple rho_of_split(const SimpleGraph& g, const TripleSplit& s);

std::vector<CliqueTriple> enumerate_clique_triples(const SimpleGraph& g);
long c_gamma(const SimpleGraph& g);
// Every rho of total length d built from the clique triples.
std::vector<RhoTuple> enumerate_rho(const SimpleGraph& g, int d);

// Occurrence matching between a reduced concatenation of legs and the
// representative of its product: perm[i] is the source position of target
// position i. Throws std::invalid_argument if the concatenation is not reduced.
std::vector<int> shuffle_permutation(const SimpleGraph& g, const std::vector<Letter>& source);
std::vector<int> shuffle_permutation(const SimpleGraph& g, const std::vector<Word>& legs);

}  // namespace gpw
