#include "fsnet/network.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace fsnet {

namespace {

// union-find for the connectivity check
struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Graph::Graph(int node_count, std::vector<Edge> fixed_edges,
             std::pair<int, int> dynamic_edge)
    : m_(node_count) {
  if (m_ < 2) throw std::invalid_argument("graph needs at least 2 nodes");
  auto check_node = [&](int v) {
    if (v < 0 || v >= m_)
      throw std::invalid_argument("node index out of range: " +
                                  std::to_string(v));
  };
  check_node(dynamic_edge.first);
  check_node(dynamic_edge.second);
  if (dynamic_edge.first == dynamic_edge.second)
    throw std::invalid_argument("dynamic edge is a self-loop");

  // relabel so the dynamic edge becomes (0,1)
  fwd_.assign(m_, -1);
  fwd_[dynamic_edge.first] = 0;
  fwd_[dynamic_edge.second] = 1;
  int next = 2;
  for (int v = 0; v < m_; ++v)
    if (fwd_[v] < 0) fwd_[v] = next++;
  inv_.assign(m_, 0);
  for (int v = 0; v < m_; ++v) inv_[fwd_[v]] = v;
  relabeled_ = dynamic_edge != std::make_pair(0, 1);

  std::set<std::pair<int, int>> seen{{0, 1}};
  DisjointSet dsu(m_);
  dsu.unite(0, 1);
  fixed_.reserve(fixed_edges.size());
  for (const Edge& e : fixed_edges) {
    check_node(e.i);
    check_node(e.j);
    if (e.i == e.j) throw std::invalid_argument("self-loop in fixed edges");
    if (!(e.w > 0.0))
      throw std::invalid_argument("fixed edge weight must be positive");
    int a = fwd_[e.i], b = fwd_[e.j];
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second)
      throw std::invalid_argument("duplicate edge");
    fixed_.push_back({a, b, e.w});
    dsu.unite(a, b);
  }
  std::sort(fixed_.begin(), fixed_.end(), [](const Edge& l, const Edge& r) {
    return std::tie(l.i, l.j) < std::tie(r.i, r.j);
  });
  for (int v = 1; v < m_; ++v)
    if (dsu.find(v) != dsu.find(0))
      throw std::invalid_argument("graph is not connected");
}

Graph Graph::triangle(double w13, double w23) {
  return Graph(3, {{0, 2, w13}, {1, 2, w23}}, {0, 1});
}

Graph Graph::ring(int n) {
  if (n < 3) throw std::invalid_argument("ring needs at least 3 nodes");
  std::vector<Edge> edges;
  for (int v = 1; v < n; ++v) edges.push_back({v, (v + 1) % n, 1.0});
  return Graph(n, std::move(edges), {0, 1});
}

Graph Graph::star(int n) {
  if (n < 3) throw std::invalid_argument("star needs at least 3 nodes");
  std::vector<Edge> edges;
  for (int v = 0; v < n - 1; ++v) edges.push_back({v, n - 1, 1.0});
  return Graph(n, std::move(edges), {0, 1});
}

Graph Graph::complete(int n) {
  if (n < 3) throw std::invalid_argument("complete graph needs at least 3 nodes");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!(i == 0 && j == 1)) edges.push_back({i, j, 1.0});
  return Graph(n, std::move(edges), {0, 1});
}

bool Graph::is_unit_triangle() const {
  return m_ == 3 && fixed_.size() == 2 && fixed_[0].w == 1.0 &&
         fixed_[1].w == 1.0;
}

Eigen::VectorXd Graph::to_internal_order(const Eigen::VectorXd& x) const {
  if (x.size() != m_) throw std::invalid_argument("state dimension mismatch");
  Eigen::VectorXd out(m_);
  for (int v = 0; v < m_; ++v) out[fwd_[v]] = x[v];
  return out;
}

Eigen::VectorXd Graph::to_external_order(const Eigen::VectorXd& x) const {
  if (x.size() != m_) throw std::invalid_argument("state dimension mismatch");
  Eigen::VectorXd out(m_);
  for (int v = 0; v < m_; ++v) out[v] = x[fwd_[v]];
  return out;
}

DynamicWeight::DynamicWeight(double w_star_, double alpha1_, double alpha2_,
                             std::optional<CubicTerms> cubic_, bool uses_y_)
    : w_star(w_star_),
      alpha1(alpha1_),
      alpha2(alpha2_),
      cubic(cubic_),
      uses_y(uses_y_) {
  if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0))
    throw std::invalid_argument("coupling gains must be nonnegative");
  if (alpha1 < alpha2)
    throw std::invalid_argument(
        "coupling gains must satisfy alpha1 >= alpha2 (nu >= 0)");
}

double evaluate_weight(const DynamicWeight& w, double x1, double x2,
                       double y) {
  double v = w.w_star + (w.uses_y ? y : 0.0) + w.alpha1 * x1 + w.alpha2 * x2;
  if (w.cubic)
    v += w.cubic->alpha3 * x1 * x1 * x1 + w.cubic->alpha4 * x2 * x2 * x2;
  return v;
}

Eigen::MatrixXd build_laplacian(const Graph& g, const DynamicWeight& w,
                                const Eigen::VectorXd& x, double y) {
  const int m = g.node_count();
  if (x.size() != m) throw std::invalid_argument("state dimension mismatch");
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  const double wd = evaluate_weight(w, x[0], x[1], y);
  L(0, 1) = L(1, 0) = -wd;
  for (const Edge& e : g.fixed_edges()) {
    L(e.i, e.j) = L(e.j, e.i) = -e.w;
  }
  // diagonal = negative sum of the off-diagonal row entries, accumulated in
  // increasing column order so that row sums vanish exactly in floating point
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j)
      if (j != i) acc += L(i, j);
    L(i, i) = -acc;
  }
  return L;
}

SpectrumReport laplacian_spectrum(const Eigen::MatrixXd& L,
                                  double kernel_tol) {
  if (L.rows() != L.cols()) throw std::invalid_argument("matrix not square");
  if (kernel_tol < 0.0)
    kernel_tol = 1e-9 * std::max(1.0, L.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L,
                                                    Eigen::EigenvaluesOnly);
  SpectrumReport rep;
  rep.eigenvalues = es.eigenvalues();  // ascending
  rep.kernel_dim = 0;
  for (int i = 0; i < rep.eigenvalues.size(); ++i)
    if (std::abs(rep.eigenvalues[i]) <= kernel_tol) ++rep.kernel_dim;
  // signed gap: smallest-magnitude eigenvalue outside the kernel band; for a
  // Laplacian the candidates are the extremes of the non-kernel set
  rep.spectral_gap = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < rep.eigenvalues.size(); ++i) {
    const double lam = rep.eigenvalues[i];
    if (std::abs(lam) > kernel_tol && std::abs(lam) < best) {
      best = std::abs(lam);
      rep.spectral_gap = lam;
    }
  }
  return rep;
}

double critical_weight_star(double w13, double w23) {
  if (!(w13 > 0.0) || !(w23 > 0.0))
    throw std::invalid_argument("fixed triangle weights must be positive");
  return -w13 * w23 / (w13 + w23);
}

CriticalMode critical_weight_numeric(const Graph& g) {
  const int m = g.node_count();
  // basis of the orthogonal complement of the consensus direction
  const Eigen::MatrixXd P = consensus_coordinates(m);
  const Eigen::MatrixXd Q = P.bottomRows(m - 1);

  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(m);

  auto lambda_min = [&](double w) {
    DynamicWeight dw(w, 0.0, 0.0, std::nullopt, false);
    const Eigen::MatrixXd L = build_laplacian(g, dw, x0, 0.0);
    const Eigen::MatrixXd Ld = Q * L * Q.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ld,
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
  };

  // lambda_min is concave in w (a minimum of affine functions), positive when
  // every weight is positive, and tends to -inf as w -> -inf: one root.
  double hi = 1.0;
  if (!(lambda_min(hi) > 0.0))
    throw std::runtime_error("deflated Laplacian not positive at w=1");
  double lo = -1.0;
  while (lambda_min(lo) > 0.0) {
    lo *= 2.0;
    if (lo < -1e12) throw std::runtime_error("critical weight not bracketed");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (lambda_min(mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  const double w_star = 0.5 * (lo + hi);

  DynamicWeight dw(w_star, 0.0, 0.0, std::nullopt, false);
  const Eigen::MatrixXd L = build_laplacian(g, dw, x0, 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q * L * Q.transpose());
  Eigen::VectorXd mode = Q.transpose() * es.eigenvectors().col(0);
  mode.normalize();
  int imax = 0;
  for (int i = 1; i < m; ++i)
    if (std::abs(mode[i]) > std::abs(mode[imax])) imax = i;
  if (mode[imax] < 0.0) mode = -mode;
  return {w_star, mode};
}

Eigen::Vector3d TriangleDiagonalization::beta(double alpha1,
                                              double alpha2) const {
  const double s = alpha1 + alpha2;
  return {std::sqrt(3.0) / 3.0 * s, -std::sqrt(6.0) / 6.0 * s,
          std::sqrt(2.0) / 2.0 * (alpha2 - alpha1)};
}

TriangleDiagonalization triangle_diagonalization() {
  const double s3 = std::sqrt(3.0) / 3.0;
  const double s6 = std::sqrt(6.0) / 6.0;
  const double s2 = std::sqrt(2.0) / 2.0;
  TriangleDiagonalization td;
  td.T << s3, -s6, -s2,  //
      s3, -s6, s2,       //
      s3, 2.0 * s6, 0.0;
  return td;
}

Eigen::MatrixXd consensus_coordinates(int m) {
  if (m < 2) throw std::invalid_argument("need at least 2 nodes");
  Eigen::MatrixXd P(m, m);
  P.row(0).setConstant(1.0 / std::sqrt(double(m)));
  int rows = 1;
  // Gram-Schmidt over the standard basis vectors, in order
  for (int k = 0; k < m && rows < m; ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(m, k);
    for (int r = 0; r < rows; ++r) v -= P.row(r).dot(v) * P.row(r).transpose();
    const double n = v.norm();
    if (n < 1e-12) continue;  // linearly dependent on earlier rows
    v /= n;
    // sign convention: leading nonzero entry positive
    for (int i = 0; i < m; ++i) {
      if (std::abs(v[i]) > 1e-12) {
        if (v[i] < 0.0) v = -v;
        break;
      }
    }
    P.row(rows++) = v.transpose();
  }
  if (rows != m) throw std::runtime_error("orthonormalization failed");
  return P;
}

}  // namespace fsnet
