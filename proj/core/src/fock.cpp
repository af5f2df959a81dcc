#include "gpw/fock.hpp"

#include <algorithm>
#include <cmath>

namespace gpw {

std::vector<int> mixed_digits(long idx, const std::vector<int>& radices) {
  std::vector<int> d(radices.size());
  for (std::size_t i = radices.size(); i-- > 0;) {
    d[i] = static_cast<int>(idx % radices[i]);
    idx /= radices[i];
  }
  return d;
}

long mixed_index(const std::vector<int>& digits, const std::vector<int>& radices) {
  long idx = 0;
  for (std::size_t i = 0; i < radices.size(); ++i) idx = idx * radices[i] + digits[i];
  return idx;
}

namespace {

std::vector<int> centered_radices(const FockSpace& fs, const Word& w) {
  std::vector<int> r;
  r.reserve(w.letters.size());
  for (Letter x : w.letters) r.push_back(fs.vertex(x).centered_dim());
  return r;
}

std::vector<Letter> prepend(Letter v, const Word& w) {
  std::vector<Letter> s;
  s.reserve(w.letters.size() + 1);
  s.push_back(v);
  s.insert(s.end(), w.letters.begin(), w.letters.end());
  return s;
}

int first_occurrence(const Word& w, Letter v) {
  for (int i = 0; i < w.length(); ++i)
    if (w[i] == v) return i;
  return -1;
}

// For w starting with v and t = v·w: t leg k ← w leg src[k].
std::vector<int> removal_map(const SimpleGraph& g, Letter v, const Word& t) {
  const auto perm = shuffle_permutation(g, prepend(v, t));
  std::vector<int> src(t.letters.size());
  for (std::size_t q = 0; q < perm.size(); ++q)
    if (perm[q] > 0) src[static_cast<std::size_t>(perm[q] - 1)] = static_cast<int>(q);
  return src;
}

}  // namespace

// ---------------------------------------------------------------- FockSpace

FockSpace::FockSpace(SimpleGraph g, std::vector<VertexSpace> vertices, int depth, long cap)
    : g_(std::move(g)), vertices_(std::move(vertices)), depth_(depth) {
  if (static_cast<int>(vertices_.size()) != g_.size()) throw std::invalid_argument("one vertex space per vertex");
  if (depth < 0) throw std::invalid_argument("negative depth");
  for (const auto& v : vertices_)
    if (v.dim < 1) throw std::invalid_argument("vertex Hilbert spaces must contain ξ");
  words_ = enumerate_words(g_, depth_);
  offsets_.push_back(0);
  len_end_.assign(static_cast<std::size_t>(depth_) + 1, 0);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    long b = 1;
    for (Letter x : words_[i].letters) b *= vertices_[static_cast<std::size_t>(x)].centered_dim();
    offsets_.push_back(offsets_.back() + b);
    if (offsets_.back() > cap) throw ResourceGuardError(offsets_.back(), cap);
    ids_.emplace(words_[i], static_cast<int>(i));
    for (int k = words_[i].length(); k <= depth_; ++k) len_end_[static_cast<std::size_t>(k)] = offsets_.back();
  }
  dim_ = offsets_.back();
  const int n = g_.size();
  trans_.resize(words_.size() * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const Word& w = words_[i];
    for (Letter v = 0; v < n; ++v) {
      Transition& tr = trans_[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(v)];
      tr.starts = starts_with_letter(g_, w, v);
      const auto s = prepend(v, w);
      const Word t = normal_form(g_, s);
      tr.target = word_id(t);
      if (tr.starts) {
        tr.pos = first_occurrence(w, v);
        tr.src = removal_map(g_, v, t);
      } else if (tr.target >= 0) {
        tr.src = shuffle_permutation(g_, s);
      }
    }
  }
}

int FockSpace::word_id(const Word& w) const {
  auto it = ids_.find(w);
  return it == ids_.end() ? -1 : it->second;
}

long FockSpace::index(int id, const std::vector<int>& mi) const {
  return offset(id) + mixed_index(mi, centered_radices(*this, word(id)));
}

std::vector<int> FockSpace::multi_index(int id, long local) const {
  return mixed_digits(local, centered_radices(*this, word(id)));
}

int FockSpace::word_of_index(long idx) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), idx);
  return static_cast<int>(it - offsets_.begin()) - 1;
}

long FockSpace::safe_dim(int len) const {
  if (len < 0) return 0;
  if (len >= depth_) return dim_;
  return len_end_[static_cast<std::size_t>(len)];
}

// ------------------------------------------------------- algebraic elements

int AlgebraicElement::max_length() const {
  int m = 0;
  for (const auto& t : terms) m = std::max(m, t.word.length());
  return m;
}

bool AlgebraicElement::homogeneous(int d) const {
  if (d != 0 && scalar != cd(0)) return false;
  for (const auto& t : terms)
    if (t.word.length() != d) return false;
  return true;
}

AlgebraicElement AlgebraicElement::degree_part(int d) const {
  AlgebraicElement out;
  if (d == 0) out.scalar = scalar;
  for (const auto& t : terms)
    if (t.word.length() == d) {
      if (d == 0)
        out.scalar += t.coef;
      else
        out.terms.push_back(t);
    }
  return out;
}

AlgebraicElement& AlgebraicElement::operator+=(const AlgebraicElement& o) {
  scalar += o.scalar;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

AlgebraicElement AlgebraicElement::scaled(cd c) const {
  AlgebraicElement out = *this;
  out.scalar *= c;
  for (auto& t : out.terms) t.coef *= c;
  return out;
}

PureTensor basis_generator(const FockSpace& fs, const Word& w, const std::vector<int>& mi) {
  PureTensor p;
  p.word = w;
  for (int i = 0; i < w.length(); ++i) {
    const auto& ops = fs.vertex(w[i]).basis_ops;
    if (ops.empty()) throw std::invalid_argument("vertex has no algebra basis");
    p.legs.push_back(ops[static_cast<std::size_t>(mi[static_cast<std::size_t>(i)] + 1)]);
  }
  return p;
}

std::vector<PureTensor> basis_generators(const FockSpace& fs, const Word& w) {
  std::vector<PureTensor> out;
  const auto rad = centered_radices(fs, w);
  long total = 1;
  for (int r : rad) total *= r;
  for (long l = 0; l < total; ++l) out.push_back(basis_generator(fs, w, mixed_digits(l, rad)));
  return out;
}

// --------------------------------------------------------------------- λ_v

void lambda_v_column(const FockSpace& fs, Letter v, const Mat& a, Part part, long idx,
                     const std::function<void(long, cd)>& f) {
  const int id = fs.word_of_index(idx);
  const auto mi = fs.multi_index(id, idx - fs.offset(id));
  const auto& tr = fs.transition(v, id);
  const int dv = fs.vertex(v).dim;
  if (!tr.starts) {
    if (part == Part::Full && a(0, 0) != cd(0)) f(idx, a(0, 0));
    if ((part == Part::Full || part == Part::Cre) && tr.target >= 0) {
      std::vector<int> nmi(tr.src.size());
      for (int j = 1; j < dv; ++j) {
        if (a(j, 0) == cd(0)) continue;
        for (std::size_t i = 0; i < nmi.size(); ++i)
          nmi[i] = tr.src[i] == 0 ? j - 1 : mi[static_cast<std::size_t>(tr.src[i] - 1)];
        f(fs.index(tr.target, nmi), a(j, 0));
      }
    }
    return;
  }
  const int i = mi[static_cast<std::size_t>(tr.pos)] + 1;
  if ((part == Part::Full || part == Part::Ann) && a(0, i) != cd(0)) {
    std::vector<int> nmi(tr.src.size());
    for (std::size_t k = 0; k < nmi.size(); ++k) nmi[k] = mi[static_cast<std::size_t>(tr.src[k])];
    f(fs.index(tr.target, nmi), a(0, i));
  }
  if (part == Part::Full || part == Part::Dia) {
    auto nmi = mi;
    for (int j = 1; j < dv; ++j) {
      if (a(j, i) == cd(0)) continue;
      nmi[static_cast<std::size_t>(tr.pos)] = j - 1;
      f(fs.index(id, nmi), a(j, i));
    }
  }
}

SpMat lambda_v_sparse(const FockSpace& fs, Letter v, const Mat& a, Part part) {
  std::vector<Eigen::Triplet<cd>> trip;
  for (long c = 0; c < fs.dim(); ++c)
    lambda_v_column(fs, v, a, part, c, [&](long r, cd x) { trip.emplace_back(r, c, x); });
  SpMat m(fs.dim(), fs.dim());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Mat lambda_v_apply(const FockSpace& fs, Letter v, const Mat& a, Part part, const Mat& in) {
  if (a.rows() != fs.vertex(v).dim || a.cols() != fs.vertex(v).dim)
    throw std::invalid_argument("vertex operator has the wrong size");
  Mat out = Mat::Zero(in.rows(), in.cols());
  for (long r = 0; r < in.rows(); ++r) {
    if (in.row(r).isZero(0.0)) continue;
    lambda_v_column(fs, v, a, part, r, [&](long t, cd x) { out.row(t) += x * in.row(r); });
  }
  return out;
}

Mat lambda_apply(const FockSpace& fs, const PureTensor& x, const Mat& in) {
  Mat cur = in;
  for (std::size_t i = x.legs.size(); i-- > 0;) cur = lambda_v_apply(fs, x.word.letters[i], x.legs[i], Part::Full, cur);
  return x.coef * cur;
}

Mat lambda_apply(const FockSpace& fs, const AlgebraicElement& x, const Mat& in) {
  Mat out = x.scalar * in;
  for (const auto& t : x.terms) out += lambda_apply(fs, t, in);
  return out;
}

Mat lambda(const FockSpace& fs, const PureTensor& x, long cols) {
  return lambda_apply(fs, x, Mat::Identity(fs.dim(), cols));
}

Mat lambda(const FockSpace& fs, const AlgebraicElement& x, long cols) {
  return lambda_apply(fs, x, Mat::Identity(fs.dim(), cols));
}

LambdaParts lambda_parts(const FockSpace& fs, const PureTensor& x, long cols) {
  auto run = [&](Part p) {
    Mat cur = Mat::Identity(fs.dim(), cols);
    for (std::size_t i = x.legs.size(); i-- > 0;) cur = lambda_v_apply(fs, x.word.letters[i], x.legs[i], p, cur);
    return Mat(x.coef * cur);
  };
  return {run(Part::Ann), run(Part::Dia), run(Part::Cre)};
}

Mat lambda_triple(const FockSpace& fs, const TripleSplit& om, const PureTensor& x, long cols) {
  const auto& g = fs.graph();
  if (multiply(g, {om.w1, om.w2, om.w3}) != x.word || !is_reduced_product(g, {om.w1, om.w2, om.w3}))
    throw std::invalid_argument("triple split does not match the word of the element");
  const auto perm = shuffle_permutation(g, std::vector<Word>{om.w1, om.w2, om.w3});
  const std::size_t n = perm.size();
  std::vector<const Mat*> op(n);
  std::vector<Letter> letter(n);
  for (std::size_t i = 0; i < n; ++i) {
    op[static_cast<std::size_t>(perm[i])] = &x.legs[i];
    letter[static_cast<std::size_t>(perm[i])] = x.word.letters[i];
  }
  const auto n1 = static_cast<std::size_t>(om.w1.length());
  const auto n2 = static_cast<std::size_t>(om.w2.length());
  Mat cur = Mat::Identity(fs.dim(), cols);
  for (std::size_t s = n; s-- > 0;) {
    const Part p = s < n1 ? Part::Cre : (s < n1 + n2 ? Part::Dia : Part::Ann);
    cur = lambda_v_apply(fs, letter[s], *op[s], p, cur);
  }
  return x.coef * cur;
}

// ------------------------------------------------------------------ shuffle

Vec shuffle(const FockSpace& fs, const std::vector<Word>& words, const std::vector<Vec>& vectors) {
  const auto& g = fs.graph();
  if (words.size() != vectors.size()) throw std::invalid_argument("one vector per word");
  std::vector<Letter> src;
  for (const auto& w : words) src.insert(src.end(), w.letters.begin(), w.letters.end());
  const auto perm = shuffle_permutation(g, src);  // throws if not reduced
  const Word target = normal_form(g, src);
  Vec t = Vec::Ones(1);
  for (const auto& v : vectors) {
    Vec n(t.size() * v.size());
    for (long i = 0; i < t.size(); ++i) n.segment(i * v.size(), v.size()) = t(i) * v;
    t = n;
  }
  std::vector<int> src_rad, tgt_rad;
  for (Letter x : src) src_rad.push_back(fs.vertex(x).centered_dim());
  for (Letter x : target.letters) tgt_rad.push_back(fs.vertex(x).centered_dim());
  Vec out = Vec::Zero(t.size());
  std::vector<int> td(perm.size());
  for (long i = 0; i < t.size(); ++i) {
    const auto sd = mixed_digits(i, src_rad);
    for (std::size_t k = 0; k < perm.size(); ++k) td[k] = sd[static_cast<std::size_t>(perm[k])];
    out(mixed_index(td, tgt_rad)) = t(i);
  }
  return out;
}

Mat word_projection(const FockSpace& fs, const std::function<bool(const Word&)>& pred, long cols) {
  Mat p = Mat::Zero(fs.dim(), cols);
  for (int id = 0; id < fs.word_count(); ++id) {
    if (!pred(fs.word(id))) continue;
    for (long i = fs.offset(id); i < fs.offset(id) + fs.block_dim(id) && i < cols; ++i) p(i, i) = 1;
  }
  return p;
}

bool in_middle_space(const SimpleGraph& g, const Word& u, int n, const Word& w) {
  for (const auto& w1 : enumerate_words(g, n)) {
    if (w1.length() != n || !in_right_tilde(g, u, w1)) continue;
    const Word w2 = multiply(g, inverse(g, multiply(g, w1, u)), w);
    if (w.length() == n + u.length() + w2.length() && in_left(g, u, w2)) return true;
  }
  return false;
}

Mat clique_unshuffle(const SimpleGraph& g, const std::vector<int>& dims, const Word& t) {
  if (!is_clique_word(g, t) || normal_form(g, t.letters) != t) throw std::invalid_argument("not a clique word");
  std::vector<int> full;
  for (Letter x : t.letters) full.push_back(dims[static_cast<std::size_t>(x)]);
  long total = 1;
  for (int d : full) total *= d;
  const auto subs = subcliques(t);
  std::map<Word, long> off;
  long o = 0;
  for (const auto& r : subs) {
    off[r] = o;
    long b = 1;
    for (Letter x : r.letters) b *= dims[static_cast<std::size_t>(x)] - 1;
    o += b;
  }
  Mat u = Mat::Zero(o, total);
  for (long c = 0; c < total; ++c) {
    const auto d = mixed_digits(c, full);
    std::vector<Letter> r;
    std::vector<int> mi, rad;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] != 0) {
        r.push_back(t.letters[i]);
        mi.push_back(d[i] - 1);
        rad.push_back(full[i] - 1);
      }
    u(off[Word(r)] + mixed_index(mi, rad), c) = 1;
  }
  return u;
}

// ------------------------------------------------------------ key vectors

KeyVector lambda_v_keys(const SimpleGraph& g, Letter v, const Mat& a, Part part, const KeyVector& in) {
  KeyVector out;
  const int dv = static_cast<int>(a.rows());
  for (const auto& [key, c] : in) {
    if (c == cd(0)) continue;
    const Word& w = key.word;
    if (!starts_with_letter(g, w, v)) {
      if (part == Part::Full && a(0, 0) != cd(0)) out[key] += a(0, 0) * c;
      if (part == Part::Full || part == Part::Cre) {
        const auto s = prepend(v, w);
        const Word t = normal_form(g, s);
        const auto perm = shuffle_permutation(g, s);
        BasisKey nk{t, std::vector<int>(perm.size())};
        for (int j = 1; j < dv; ++j) {
          if (a(j, 0) == cd(0)) continue;
          for (std::size_t i = 0; i < perm.size(); ++i)
            nk.mi[i] = perm[i] == 0 ? j - 1 : key.mi[static_cast<std::size_t>(perm[i] - 1)];
          out[nk] += a(j, 0) * c;
        }
      }
      continue;
    }
    const int p = first_occurrence(w, v);
    const int i = key.mi[static_cast<std::size_t>(p)] + 1;
    if ((part == Part::Full || part == Part::Ann) && a(0, i) != cd(0)) {
      const Word t = multiply(g, Word({v}), w);
      const auto src = removal_map(g, v, t);
      BasisKey nk{t, std::vector<int>(src.size())};
      for (std::size_t k = 0; k < src.size(); ++k) nk.mi[k] = key.mi[static_cast<std::size_t>(src[k])];
      out[nk] += a(0, i) * c;
    }
    if (part == Part::Full || part == Part::Dia) {
      BasisKey nk = key;
      for (int j = 1; j < dv; ++j) {
        if (a(j, i) == cd(0)) continue;
        nk.mi[static_cast<std::size_t>(p)] = j - 1;
        out[nk] += a(j, i) * c;
      }
    }
  }
  return out;
}

KeyVector lambda_keys(const SimpleGraph& g, const PureTensor& x, const KeyVector& in) {
  KeyVector cur = in;
  for (std::size_t i = x.legs.size(); i-- > 0;) cur = lambda_v_keys(g, x.word.letters[i], x.legs[i], Part::Full, cur);
  for (auto& [k, c] : cur) c *= x.coef;
  return cur;
}

double distance(const KeyVector& a, const KeyVector& b) {
  double s = 0;
  for (const auto& [k, c] : a) {
    auto it = b.find(k);
    s += std::norm(c - (it == b.end() ? cd(0) : it->second));
  }
  for (const auto& [k, c] : b)
    if (!a.count(k)) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace gpw
