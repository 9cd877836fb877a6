#include "fsnet/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace fsnet {

ModelParams::ModelParams(Graph g, DynamicWeight w, double eps, Drift d)
    : graph(std::move(g)), weight(w), epsilon(eps), drift(d) {
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in [0, 1)");
}

Eigen::VectorXd full_field(const FastSlowState& s, const ModelParams& p) {
  const int m = p.graph.node_count();
  if (s.x.size() != m)
    throw std::invalid_argument("state dimension mismatch");
  const Eigen::MatrixXd L = build_laplacian(p.graph, p.weight, s.x, s.y);
  Eigen::VectorXd out(m + 1);
  // row-major mat-vec, accumulation order fixed so row sums cancel exactly
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += L(i, j) * s.x[j];
    out[i] = -acc;
  }
  out[m] = p.epsilon * p.drift(s.x[0]);
  return out;
}

std::pair<double, double> reduced_planar_field(double a, double y, double nu,
                                               double eps,
                                               double drift_value) {
  return {-2.0 * (y + nu * a) * a, eps * drift_value};
}

SingularReport singular_analysis(const ModelParams& p, double sigma0) {
  if (p.graph.node_count() != 3)
    throw std::invalid_argument("analysis implemented for triangle only");
  double w13 = 1.0, w23 = 1.0;
  for (const Edge& e : p.graph.fixed_edges()) {
    if (e.i == 0 && e.j == 2) w13 = e.w;
    if (e.i == 1 && e.j == 2) w23 = e.w;
  }

  SingularReport rep;
  rep.nu = p.weight.nu();
  rep.clustering_present = rep.nu > 0.0;
  rep.sigma0 = sigma0;
  rep.w_star_graph = critical_weight_star(w13, w23);
  rep.p_x.setConstant(0.5 * sigma0);
  // the dynamic weight at consensus equals the critical topology weight:
  // w_star + y + (alpha1+alpha2)*sigma0/2 = w_star_graph
  rep.p_y = rep.w_star_graph - p.weight.w_star -
            0.5 * (p.weight.alpha1 + p.weight.alpha2) * sigma0;
  rep.lambda_n_slope = -3.0 * (w13 + w23) / (w13 + 2.0 * w23);
  rep.lambda_m_slope = -rep.lambda_n_slope;
  rep.clustering_ratio = -(2.0 * w13 + w23) / (w13 + 2.0 * w23);
  return rep;
}

std::array<double, 3> clustering_limit(double y, double alpha1, double alpha2,
                                       double sigma0) {
  const double nu = alpha1 - alpha2;
  if (nu == 0.0)
    throw std::invalid_argument("clustering manifold tangent to fast foliation");
  return {-(0.5 + alpha2 * sigma0 + y) / nu, (0.5 + alpha1 * sigma0 + y) / nu,
          0.5 * sigma0};
}

double distance_to_A(const FastSlowState& s) {
  if (s.x.size() != 3)
    throw std::invalid_argument("cluster-set distance defined for m = 3 only");
  return std::abs(s.x[2] - 0.5 * (s.x[0] + s.x[1]));
}

double consensus_distance(const Eigen::VectorXd& x) {
  const double mean = x.mean();
  double acc = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    const double d = x[i] - mean;
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace fsnet
