#include "corrmine/ball_graph.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace corrmine {

namespace {

// Static k-d tree over the columns of a d x m matrix, median split along the
// widest box dimension. Points are pre-rotated to principal axes by the
// caller so early coordinates carry most of the spread; range queries then
// prune on exact box distances with early-exit accumulation. An optional
// batch-accept radius takes whole subtrees without per-point checks.
class KdTree {
 public:
  explicit KdTree(const Matrix& points) : points_(points) {
    const Index m = points_.cols();
    perm_.resize(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) perm_[static_cast<std::size_t>(i)] = i;
    if (m > 0) root_ = build(0, m);
  }

  void query(const Vector& q, double r2_prune, double r2_accept_all,
             std::vector<Index>& out) const {
    if (root_ >= 0) search(root_, q, r2_prune, r2_accept_all, out);
  }

 private:
  struct Node {
    Index begin = 0, end = 0;
    int left = -1, right = -1;
    Vector box_lo, box_hi;
    bool leaf() const { return left < 0; }
  };

  static constexpr Index kLeafSize = 32;

  int build(Index begin, Index end) {
    Node node;
    node.begin = begin;
    node.end = end;
    node.box_lo = points_.col(perm_[static_cast<std::size_t>(begin)]);
    node.box_hi = node.box_lo;
    for (Index k = begin + 1; k < end; ++k) {
      const auto col = points_.col(perm_[static_cast<std::size_t>(k)]);
      node.box_lo = node.box_lo.cwiseMin(col);
      node.box_hi = node.box_hi.cwiseMax(col);
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= kLeafSize) return id;

    Index split_dim = 0;
    (node.box_hi - node.box_lo).maxCoeff(&split_dim);
    const Index mid = begin + (end - begin) / 2;
    std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                     [&](Index a, Index b) {
                       return points_(split_dim, a) < points_(split_dim, b);
                     });
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    return id;
  }

  void search(int id, const Vector& q, double r2_prune, double r2_accept_all,
              std::vector<Index>& out) const {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    double min2 = 0.0;
    for (Index d = 0; d < q.size(); ++d) {
      const double below = node.box_lo(d) - q(d);
      const double above = q(d) - node.box_hi(d);
      const double gap = below > above ? below : above;
      if (gap > 0.0) {
        min2 += gap * gap;
        if (min2 > r2_prune) return;
      }
    }
    if (r2_accept_all > 0.0) {
      double max2 = 0.0;
      for (Index d = 0; d < q.size(); ++d) {
        const double far = std::max(q(d) - node.box_lo(d), node.box_hi(d) - q(d));
        max2 += far * far;
      }
      if (max2 <= r2_accept_all) {
        for (Index k = node.begin; k < node.end; ++k) {
          out.push_back(perm_[static_cast<std::size_t>(k)]);
        }
        return;
      }
    }
    if (node.leaf()) {
      for (Index k = node.begin; k < node.end; ++k) {
        const Index idx = perm_[static_cast<std::size_t>(k)];
        const double* point = points_.col(idx).data();
        const double* query_pt = q.data();
        double dist2 = 0.0;
        bool inside = true;
        for (Index d = 0; d < q.size(); ++d) {
          const double diff = point[d] - query_pt[d];
          dist2 += diff * diff;
          if (dist2 > r2_prune) {
            inside = false;
            break;
          }
        }
        if (inside) out.push_back(idx);
      }
      return;
    }
    search(node.left, q, r2_prune, r2_accept_all, out);
    search(node.right, q, r2_prune, r2_accept_all, out);
  }

  const Matrix& points_;
  std::vector<Index> perm_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

void validate_rho(double rho) {
  if (!(rho >= 0.0) || !(rho <= 1.0)) {
    fail(errc::domain_error, "ball graph threshold rho must lie in [0, 1]");
  }
}

}  // namespace

EdgeGraph ball_graph(const Matrix& unit_columns, double rho, const BallGraphMode& mode) {
  validate_rho(rho);
  if (mode.eps < 0.0) fail(errc::domain_error, "approximation slack eps must be >= 0");
  const Index p = unit_columns.cols();
  const Index dim = unit_columns.rows();

  // Rotate to principal axes: distances are preserved and the tree splits on
  // the directions that actually spread the points.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(unit_columns * unit_columns.transpose());
  Matrix rotation(dim, dim);
  for (Index d = 0; d < dim; ++d) {
    rotation.col(d) = eig.eigenvectors().col(dim - 1 - d);  // descending spread
  }
  const Matrix rotated = rotation.transpose() * unit_columns;

  // doubled point set {+u_j, -u_j}: one index handles both mirror distances
  Matrix doubled(dim, 2 * p);
  doubled.leftCols(p) = rotated;
  doubled.rightCols(p) = -rotated;
  const KdTree tree(doubled);

  const double r2 = 2.0 * (1.0 - rho);
  const double slack = 1.0 + mode.eps;
  // exact mode: tiny inflation so borderline pairs reach the dot-product test
  const double r2_prune = mode.exact() ? r2 * (1.0 + 1e-9) + 1e-300 : r2 * slack * slack;
  const double r2_accept = mode.exact() ? 0.0 : r2_prune;

  EdgeGraph graph;
  graph.p = p;
  graph.threshold_used =
      mode.exact() ? rho : std::max(0.0, 1.0 - slack * slack * (1.0 - rho) - 1e-9);

  std::vector<Index> hits;
  std::vector<Index> candidates;
  for (Index i = 0; i < p; ++i) {
    hits.clear();
    candidates.clear();
    tree.query(rotated.col(i), r2_prune, r2_accept, hits);
    for (Index idx : hits) {
      const Index j = idx % p;
      if (j > i) candidates.push_back(j);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (Index j : candidates) {
      // decide on the same dot product the dense path computes
      const double w = unit_columns.col(i).dot(unit_columns.col(j));
      if (mode.exact() && !(std::abs(w) >= rho)) continue;
      graph.edges.push_back({i, j, w});
    }
  }
  return graph;
}

EdgeGraph ball_graph(const UnitSphereMatrix& u, double rho, const BallGraphMode& mode) {
  return ball_graph(u.columns(), rho, mode);
}

EdgeGraph ball_graph_brute_force(const Matrix& unit_columns, double rho) {
  validate_rho(rho);
  const Index p = unit_columns.cols();
  EdgeGraph graph;
  graph.p = p;
  graph.threshold_used = rho;
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      const double w = unit_columns.col(i).dot(unit_columns.col(j));
      if (std::abs(w) >= rho) graph.edges.push_back({i, j, w});
    }
  }
  return graph;
}

}  // namespace corrmine
