#include "gpw/hecke.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <regex>
#include <stdexcept>

namespace gpw {

// ------------------------------------------------------------ Coxeter groups

FiniteCoxeter::FiniteCoxeter(std::vector<std::vector<int>> matrix) : m_(std::move(matrix)) {
  const int n = rank();
  if (n < 1 || n > 2) throw std::invalid_argument("supported Coxeter ranks are 1 and 2");
  for (int s = 0; s < n; ++s) {
    if (static_cast<int>(m_[static_cast<std::size_t>(s)].size()) != n) throw std::invalid_argument("Coxeter matrix is not square");
    if (m_[static_cast<std::size_t>(s)][static_cast<std::size_t>(s)] != 1) throw std::invalid_argument("Coxeter matrix needs a unit diagonal");
    for (int t = 0; t < n; ++t)
      if (m(s, t) != m(t, s)) throw std::invalid_argument("Coxeter matrix is not symmetric");
  }
  if (n == 2 && (m(0, 1) < 2 || m(0, 1) > 6)) throw std::invalid_argument("supported dihedral orders are 2..6");
  name_ = n == 1 ? "A1" : (m(0, 1) == 2 ? "A1xA1" : "I2(" + std::to_string(m(0, 1)) + ")");

  // Geometric representation: σ_s(x) = x − 2B(α_s, x) α_s, B(α_s, α_t) = −cos(π/m).
  Eigen::MatrixXd b(n, n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) b(s, t) = -std::cos(std::numbers::pi / m(s, t));
  std::vector<Eigen::MatrixXd> sigma;
  for (int s = 0; s < n; ++s) {
    Eigen::MatrixXd sg = Eigen::MatrixXd::Identity(n, n);
    for (int j = 0; j < n; ++j) sg(s, j) -= 2 * b(s, j);
    sigma.push_back(sg);
  }
  auto key = [](const Eigen::MatrixXd& x) {
    std::vector<long> k;
    for (long i = 0; i < x.size(); ++i) k.push_back(std::lround(x.data()[i] * 1e8));
    return k;
  };
  std::vector<Eigen::MatrixXd> elems{Eigen::MatrixXd::Identity(n, n)};
  std::map<std::vector<long>, int> ids{{key(elems[0]), 0}};
  words_.push_back({});
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int w = queue.front();
    queue.pop_front();
    for (int s = 0; s < n; ++s) {
      Eigen::MatrixXd y = sigma[static_cast<std::size_t>(s)] * elems[static_cast<std::size_t>(w)];
      auto k = key(y);
      if (ids.count(k)) continue;
      ids.emplace(k, static_cast<int>(elems.size()));
      std::vector<int> word{s};
      const auto& tail = words_[static_cast<std::size_t>(w)];
      word.insert(word.end(), tail.begin(), tail.end());
      words_.push_back(std::move(word));
      elems.push_back(std::move(y));
      queue.push_back(static_cast<int>(elems.size()) - 1);
      if (elems.size() > 64) throw std::invalid_argument("Coxeter group is too large");
    }
  }
  left_.assign(static_cast<std::size_t>(n), std::vector<int>(elems.size()));
  for (int s = 0; s < n; ++s)
    for (std::size_t w = 0; w < elems.size(); ++w)
      left_[static_cast<std::size_t>(s)][w] = ids.at(key(sigma[static_cast<std::size_t>(s)] * elems[w]));
}

FiniteCoxeter FiniteCoxeter::parse(const std::string& name) {
  if (name == "A1") return a1();
  if (name == "A1xA1") return a1xa1();
  static const std::regex dihedral_re(R"(I2\((\d+)\))");
  std::smatch m;
  if (std::regex_match(name, m, dihedral_re)) return dihedral(std::stoi(m[1].str()));
  throw std::invalid_argument("unknown Coxeter type '" + name + "'");
}

int FiniteCoxeter::element(const std::vector<int>& letters) const {
  int w = 0;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) w = left_multiply(*it, w);
  return w;
}

bool FiniteCoxeter::conjugate(int s, int t) const {
  // In rank ≤ 2, distinct generators are conjugate iff m(s,t) is odd.
  return s == t || m(s, t) % 2 == 1;
}

// ------------------------------------------------------------ Hecke algebras

HeckeAlgebra::HeckeAlgebra(FiniteCoxeter w, std::vector<double> q) : w_(std::move(w)), q_(std::move(q)) {
  const int n = w_.rank();
  if (static_cast<int>(q_.size()) != n) throw std::invalid_argument("need one Hecke parameter per generator");
  for (int s = 0; s < n; ++s) {
    if (!(q_[static_cast<std::size_t>(s)] > 0)) throw std::invalid_argument("Hecke parameters must be positive");
    for (int t = 0; t < n; ++t)
      if (w_.conjugate(s, t) && q_[static_cast<std::size_t>(s)] != q_[static_cast<std::size_t>(t)])
        throw std::invalid_argument("conjugate generators need equal Hecke parameters");
  }
  const int d = w_.order();
  for (int s = 0; s < n; ++s) {
    const double qs = q_[static_cast<std::size_t>(s)];
    Mat g = Mat::Zero(d, d);
    for (int x = 0; x < d; ++x) {
      const int sx = w_.left_multiply(s, x);
      g(sx, x) += std::sqrt(qs);
      if (w_.length(sx) < w_.length(x)) g(x, x) += qs - 1;
    }
    gens_.push_back(std::move(g));
  }
}

Mat HeckeAlgebra::product(const std::vector<int>& letters) const {
  Mat p = Mat::Identity(dim(), dim());
  for (int s : letters) p = p * generator(s);
  return p;
}

Mat HeckeAlgebra::t_w(int w) const { return product(w_.reduced_word(w)); }

double HeckeAlgebra::q_w(int w) const {
  double r = 1;
  for (int s : w_.reduced_word(w)) r *= q_[static_cast<std::size_t>(s)];
  return r;
}

double HeckeAlgebra::quadratic_residual(int s) const {
  const Mat& t = generator(s);
  const double qs = q_[static_cast<std::size_t>(s)];
  const Mat id = Mat::Identity(dim(), dim());
  return opnorm((t - qs * id) * (t + id));
}

double HeckeAlgebra::braid_residual(int s, int t) const {
  const int m = w_.m(s, t);
  std::vector<int> a, b;
  for (int i = 0; i < m; ++i) {
    a.push_back(i % 2 == 0 ? s : t);
    b.push_back(i % 2 == 0 ? t : s);
  }
  return opnorm(product(a) - product(b));
}

double HeckeAlgebra::faithfulness_margin() const {
  Mat cols(dim(), dim());
  for (int w = 0; w < dim(); ++w) cols.col(w) = t_w(w).col(0) / std::sqrt(q_w(w));
  Eigen::JacobiSVD<Mat> svd(cols);
  return svd.singularValues().minCoeff();
}

VertexSpace HeckeAlgebra::vertex_space() const {
  VertexSpace vs;
  vs.dim = dim();
  for (int w = 0; w < dim(); ++w) vs.basis_ops.push_back(t_w(w) / std::sqrt(q_w(w)));
  return vs;
}

HeckeAlgebra hecke_vertex(const FiniteCoxeter& w, const std::vector<double>& q) { return HeckeAlgebra(w, q); }

// ------------------------------------------------------------ graph product

namespace {

AlgebraicElement embed(Letter v, const Mat& a) {
  const cd phi = a(0, 0);
  AlgebraicElement x = AlgebraicElement::identity(phi);
  Mat c = a - phi * Mat::Identity(a.rows(), a.cols());
  if (c.norm() > 0) x.terms.push_back(PureTensor{1.0, Word({v}), {c}});
  return x;
}

}  // namespace

AlgebraicElement hecke_generator(const std::vector<HeckeAlgebra>& vertices, Letter v, int s) {
  return embed(v, vertices[static_cast<std::size_t>(v)].generator(s));
}

bool HeckeReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass()) return false;
  return true;
}

std::string HeckeReport::failures() const {
  std::string out;
  for (const auto& c : checks)
    if (!c.pass()) out += (out.empty() ? "" : ", ") + c.name;
  return out;
}

HeckeReport verify_hecke_graph_product(const SimpleGraph& g, const std::vector<HeckeAlgebra>& vertices, int depth,
                                       double tol) {
  if (static_cast<int>(vertices.size()) != g.size()) throw std::invalid_argument("need one Hecke algebra per vertex");
  std::vector<VertexSpace> spaces;
  for (const auto& h : vertices) spaces.push_back(h.vertex_space());
  const FockSpace fs(g, spaces, depth);
  const long dim = fs.dim();
  HeckeReport rep;
  for (const auto& h : vertices) rep.faithfulness.push_back(h.faithfulness_margin());

  // λ(T_s) as full matrices; products are exact on the leading block whose
  // length leaves room for every factor.
  std::map<std::pair<Letter, int>, Mat> lam;
  for (Letter v = 0; v < g.size(); ++v)
    for (int s = 0; s < vertices[static_cast<std::size_t>(v)].group().rank(); ++s)
      lam[{v, s}] = lambda(fs, hecke_generator(vertices, v, s), dim);
  const Mat id = Mat::Identity(dim, dim);
  auto gen_name = [](Letter v, int s) { return "T(" + std::to_string(v) + "," + std::to_string(s) + ")"; };

  for (const auto& [key, l] : lam) {
    const auto [v, s] = key;
    const double q = vertices[static_cast<std::size_t>(v)].q()[static_cast<std::size_t>(s)];
    const long c = fs.safe_dim(depth - 2);
    const double r = c > 0 ? opnorm(l * l.leftCols(c) - (q - 1) * l.leftCols(c) - q * id.leftCols(c)) : 0.0;
    rep.checks.push_back({"quadratic " + gen_name(v, s), r, tol, c});
    if (q == 1.0) {
      const long c1 = fs.safe_dim(depth - 1);
      const double u = c1 > 0 ? opnorm(l.leftCols(c1).adjoint() * l.leftCols(c1) - id.topLeftCorner(c1, c1)) : 0.0;
      rep.checks.push_back({"unitary " + gen_name(v, s), u, tol, c1});
    }
  }
  for (const auto& [ka, la] : lam)
    for (const auto& [kb, lb] : lam) {
      if (!(ka < kb) || !g.adjacent(ka.first, kb.first)) continue;
      const long c = fs.safe_dim(depth - 2);
      const double r = c > 0 ? opnorm(la * lb.leftCols(c) - lb * la.leftCols(c)) : 0.0;
      rep.checks.push_back({"commute " + gen_name(ka.first, ka.second) + " " + gen_name(kb.first, kb.second), r, tol, c});
    }
  for (Letter v = 0; v < g.size(); ++v) {
    const auto& h = vertices[static_cast<std::size_t>(v)];
    for (int s = 0; s < h.group().rank(); ++s)
      for (int t = s + 1; t < h.group().rank(); ++t) {
        const int m = h.group().m(s, t);
        const long c = fs.safe_dim(depth - m);
        double r = 0;
        if (c > 0) {
          Mat a = id.leftCols(c), b = id.leftCols(c);
          for (int i = m; i-- > 0;) {
            a = lam.at({v, i % 2 == 0 ? s : t}) * a;
            b = lam.at({v, i % 2 == 0 ? t : s}) * b;
          }
          r = opnorm(a - b);
        }
        rep.checks.push_back({"braid " + gen_name(v, s) + " " + gen_name(v, t), r, tol, c});
      }
    double st = 0;
    for (int w = 0; w < h.dim(); ++w) {
      const Mat tw = h.t_w(w);
      const Mat l = lambda(fs, embed(v, tw), 1);
      st = std::max(st, std::abs(vacuum_state(l) - h.state(tw)));
    }
    rep.checks.push_back({"vertex state " + std::to_string(v), st, tol, 1});
  }
  return rep;
}

}  // namespace gpw
