#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

namespace fsnet {

// One undirected fixed-weight edge; node indices are 0-based.
struct Edge {
  int i;
  int j;
  double w;
};

// Simple connected undirected graph with strictly positive fixed edge weights
// and one distinguished edge whose weight is state-dependent.
//
// Internally nodes are relabeled so that the dynamic edge is (0,1); all
// matrices and state vectors produced by this library use the internal
// labeling. to_internal_order / to_external_order translate vectors.
class Graph {
 public:
  Graph(int node_count, std::vector<Edge> fixed_edges,
        std::pair<int, int> dynamic_edge);

  // Triangle on {0,1,2}: dynamic edge (0,1), fixed edges (0,2) and (1,2)
  // with weights w13, w23.
  static Graph triangle(double w13 = 1.0, double w23 = 1.0);
  // Cycle 0-1-...-n-1-0 with unit weights; the (0,1) cycle edge is dynamic.
  static Graph ring(int n);
  // Hub n-1 connected to leaves 0..n-2 with unit weights; dynamic edge
  // between the two leaves 0 and 1.
  static Graph star(int n);
  // All pairs with unit weights; (0,1) dynamic.
  static Graph complete(int n);

  int node_count() const { return m_; }
  // Fixed edges in internal labels, i < j, dynamic edge excluded.
  const std::vector<Edge>& fixed_edges() const { return fixed_; }
  std::pair<int, int> dynamic_edge() const { return {0, 1}; }

  // True iff this is the triangle with both fixed weights equal to 1
  // (the only topology the cluster-set switching logic applies to).
  bool is_unit_triangle() const;

  int to_internal(int external_node) const { return fwd_[external_node]; }
  int to_external(int internal_node) const { return inv_[internal_node]; }
  bool relabeled() const { return relabeled_; }
  Eigen::VectorXd to_internal_order(const Eigen::VectorXd& x_external) const;
  Eigen::VectorXd to_external_order(const Eigen::VectorXd& x_internal) const;

 private:
  int m_ = 0;
  std::vector<Edge> fixed_;
  std::vector<int> fwd_, inv_;
  bool relabeled_ = false;
};

// cubic coupling terms alpha3*x1^3 + alpha4*x2^3 (optional)
struct CubicTerms {
  double alpha3 = 0.0;
  double alpha4 = 0.0;
};

// Parameters of the state-dependent edge weight
//   w(x1,x2,y) = w_star + [uses_y]*y + alpha1*x1 + alpha2*x2 (+ cubic terms),
// where x1, x2 are the states of the dynamic edge's endpoints.
// Standing assumption: alpha1 >= alpha2 >= 0 (nu := alpha1 - alpha2 >= 0).
class DynamicWeight {
 public:
  DynamicWeight(double w_star, double alpha1, double alpha2,
                std::optional<CubicTerms> cubic = std::nullopt,
                bool uses_y = true);

  double w_star;
  double alpha1;
  double alpha2;
  std::optional<CubicTerms> cubic;
  bool uses_y;

  double nu() const { return alpha1 - alpha2; }
};

double evaluate_weight(const DynamicWeight& w, double x1, double x2, double y);

struct SpectrumReport {
  Eigen::VectorXd eigenvalues;  // ascending
  int kernel_dim = 0;           // eigenvalues with |lambda| <= kernel tolerance
  double spectral_gap = 0.0;    // smallest eigenvalue outside the kernel
                                // (signed; 0 if all eigenvalues are in the kernel)
};

// Weighted Laplacian in internal labels: off-diagonals -w_ij, diagonal set so
// that every row sums to zero. x is the full state vector (internal order).
Eigen::MatrixXd build_laplacian(const Graph& g, const DynamicWeight& w,
                                const Eigen::VectorXd& x, double y);

// Symmetric eigendecomposition of a Laplacian. kernel_tol < 0 selects the
// default tolerance 1e-9 * max(1, max|L_ij|).
SpectrumReport laplacian_spectrum(const Eigen::MatrixXd& L,
                                  double kernel_tol = -1.0);

// Critical dynamic-edge weight of the triangle with fixed weights w13, w23:
// the w at which the Laplacian acquires a second kernel direction.
double critical_weight_star(double w13, double w23);

struct CriticalMode {
  double w_star;
  Eigen::VectorXd mode;  // unit vector orthogonal to 1, largest-|entry| > 0
};

// Critical dynamic-edge weight for an arbitrary graph, located by bisection
// on the smallest eigenvalue of the Laplacian deflated to the complement of
// the consensus direction (that eigenvalue is a minimum of affine functions
// of w, hence concave with a single sign change).
CriticalMode critical_weight_numeric(const Graph& g);

// Orthogonal eigenbasis of the unit-triangle Laplacian: T^T L T =
// diag{0, 3, 2w+1} for every value of the dynamic weight w. beta gives the
// coefficients of the weight function in the rotated coordinates X = T^T x:
// w = w_star + y + beta1 X1 + beta2 X2 + beta3 X3.
struct TriangleDiagonalization {
  Eigen::Matrix3d T;
  Eigen::Vector3d beta(double alpha1, double alpha2) const;
};

TriangleDiagonalization triangle_diagonalization();

// Orthonormal basis adapted to consensus: first row 1^T/sqrt(m), remaining
// rows complete it by Gram-Schmidt over the standard basis, each normalized
// to have a positive leading (first nonzero) entry.
Eigen::MatrixXd consensus_coordinates(int m);

}  // namespace fsnet
