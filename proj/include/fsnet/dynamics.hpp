#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>

#include "fsnet/network.hpp"

namespace fsnet {

struct FastSlowState {
  Eigen::VectorXd x;  // fast network state, internal node order
  double y = 0.0;     // slow variable
  double t = 0.0;
};

// Slow drift g, whitelisted shapes so that every run is reproducible from a
// config file: g = -1, g = -1 + k1*a^2, or g = -1 + beta*a, where a is the
// state of the first dynamic-edge endpoint.
enum class DriftKind { Constant, QuadraticA, LinearA };

struct Drift {
  DriftKind kind = DriftKind::Constant;
  double k1 = 0.0;    // QuadraticA
  double beta = 0.0;  // LinearA

  double operator()(double a) const {
    switch (kind) {
      case DriftKind::QuadraticA:
        return -1.0 + k1 * a * a;
      case DriftKind::LinearA:
        return -1.0 + beta * a;
      default:
        return -1.0;
    }
  }
};

struct ModelParams {
  Graph graph;
  DynamicWeight weight;
  double epsilon;  // time-scale separation, 0 <= eps < 1 (0 = layer problem)
  Drift drift;

  ModelParams(Graph g, DynamicWeight w, double eps, Drift d = {});
};

// Right side of the full fast-slow system: (-L(x,y)x, eps*g). The Laplacian
// diagonal is the negative sum of the off-diagonal row entries in increasing
// column order, so stored row sums cancel exactly; the resulting drift of
// 1^T x under fixed-step integration stays at rounding level (~1e-15 over
// 1e6 steps) instead of accumulating a systematic bias.
Eigen::VectorXd full_field(const FastSlowState& s, const ModelParams& p);

// Planar system on the invariant cluster set near the non-hyperbolic point:
// a' = -2(y + nu*a)*a, y' = eps*drift_value. Pure formula; accepts any nu
// (the layer symmetry property evaluates it at -nu).
std::pair<double, double> reduced_planar_field(double a, double y, double nu,
                                               double eps, double drift_value);

// Geometry of the singular limit for the triangle. Coordinates follow the
// convention sigma0 = (2/3) * (sum of all node states): the consensus state
// is then (sigma0/2) * 1.
struct SingularReport {
  double nu = 0.0;
  bool clustering_present = false;  // nu > 0
  double sigma0 = 0.0;
  Eigen::Vector3d p_x;   // non-hyperbolic point, fast coordinates
  double p_y = 0.0;      // non-hyperbolic point, slow coordinate
  double w_star_graph = 0.0;   // critical dynamic-edge weight of the topology
  double lambda_n_slope = 0.0; // consensus-branch eigenvalue = slope*(y - p_y)
  double lambda_m_slope = 0.0; // clustering-branch eigenvalue (= -lambda_n)
  double clustering_ratio = 0.0;  // on the clustering branch, x2 = ratio * x1
};

SingularReport singular_analysis(const ModelParams& p, double sigma0 = 0.0);

// Asymptotic clustering state on the triangle for fixed y (requires nu > 0):
// ( -(1/2 + alpha2*sigma0 + y)/(alpha1 - alpha2),
//    (1/2 + alpha1*sigma0 + y)/(alpha1 - alpha2),
//    sigma0/2 ).
std::array<double, 3> clustering_limit(double y, double alpha1, double alpha2,
                                       double sigma0);

// Distance to the invariant cluster set of the unit triangle,
// |x3 - (x1+x2)/2|. Triangle states only (m = 3).
double distance_to_A(const FastSlowState& s);

// Distance to the consensus subspace, ||x - mean(x)*1||_2 (any m).
double consensus_distance(const Eigen::VectorXd& x);

}  // namespace fsnet
