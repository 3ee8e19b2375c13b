#include "ergo/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ergo::lp {

namespace {

using Cell = std::pair<Eigen::Index, Eigen::Index>;

void check_balanced(const Eigen::MatrixXd& cost, const Eigen::VectorXd& supply, const Eigen::VectorXd& demand) {
  if (cost.rows() != supply.size() || cost.cols() != demand.size())
    throw std::invalid_argument("transportation: cost shape does not match marginals");
  if (supply.size() == 0 || demand.size() == 0) throw std::invalid_argument("transportation: empty marginal");
  if ((supply.array() < 0).any() || (demand.array() < 0).any())
    throw std::invalid_argument("transportation: negative marginal weight");
  if (std::abs(supply.sum() - demand.sum()) > 1e-10)
    throw std::invalid_argument("transportation: infeasible marginals (total masses differ)");
}

// Flows on a spanning tree of the bipartite graph, by peeling leaves.
Eigen::MatrixXd tree_flows(const std::vector<Cell>& edges, const Eigen::VectorXd& supply,
                           const Eigen::VectorXd& demand) {
  const Eigen::Index n = supply.size(), m = demand.size();
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(n, m);
  Eigen::VectorXd rest(n + m);
  rest << supply, demand;
  std::vector<int> degree(static_cast<std::size_t>(n + m), 0);
  std::vector<std::vector<std::size_t>> incident(static_cast<std::size_t>(n + m));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [i, j] = edges[e];
    ++degree[static_cast<std::size_t>(i)];
    ++degree[static_cast<std::size_t>(n + j)];
    incident[static_cast<std::size_t>(i)].push_back(e);
    incident[static_cast<std::size_t>(n + j)].push_back(e);
  }
  std::vector<bool> used(edges.size(), false);
  std::vector<Eigen::Index> leaves;
  for (Eigen::Index v = 0; v < n + m; ++v)
    if (degree[static_cast<std::size_t>(v)] == 1) leaves.push_back(v);
  while (!leaves.empty()) {
    const Eigen::Index leaf = leaves.back();
    leaves.pop_back();
    if (degree[static_cast<std::size_t>(leaf)] != 1) continue;
    std::size_t e = 0;
    for (auto k : incident[static_cast<std::size_t>(leaf)])
      if (!used[k]) e = k;
    used[e] = true;
    const auto [i, j] = edges[e];
    const Eigen::Index other = leaf < n ? n + j : i;
    const double f = rest(leaf);
    flow(i, j) = f;
    rest(leaf) = 0.0;
    rest(other) -= f;
    --degree[static_cast<std::size_t>(leaf)];
    if (--degree[static_cast<std::size_t>(other)] == 1) leaves.push_back(other);
  }
  return flow;
}

// u_0 = 0 and C_ij = u_i + v_j on tree edges.
void tree_potentials(const Eigen::MatrixXd& cost, const std::vector<Cell>& edges, Eigen::VectorXd& u,
                     Eigen::VectorXd& v) {
  const Eigen::Index n = cost.rows(), m = cost.cols();
  std::vector<std::vector<std::size_t>> incident(static_cast<std::size_t>(n + m));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    incident[static_cast<std::size_t>(edges[e].first)].push_back(e);
    incident[static_cast<std::size_t>(n + edges[e].second)].push_back(e);
  }
  u = Eigen::VectorXd::Zero(n);
  v = Eigen::VectorXd::Zero(m);
  std::vector<bool> seen(static_cast<std::size_t>(n + m), false);
  std::queue<Eigen::Index> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    const Eigen::Index node = q.front();
    q.pop();
    for (auto e : incident[static_cast<std::size_t>(node)]) {
      const auto [i, j] = edges[e];
      const Eigen::Index other = node < n ? n + j : i;
      if (seen[static_cast<std::size_t>(other)]) continue;
      seen[static_cast<std::size_t>(other)] = true;
      if (node < n)
        v(j) = cost(i, j) - u(i);
      else
        u(i) = cost(i, j) - v(j);
      q.push(other);
    }
  }
}

// Union-find with rollback for the spanning-tree search.
struct RollbackDsu {
  std::vector<Eigen::Index> parent, size;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> history;
  explicit RollbackDsu(Eigen::Index n) : parent(static_cast<std::size_t>(n)), size(static_cast<std::size_t>(n), 1) {
    for (Eigen::Index k = 0; k < n; ++k) parent[static_cast<std::size_t>(k)] = k;
  }
  Eigen::Index find(Eigen::Index x) const {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  }
  bool unite(Eigen::Index a, Eigen::Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size[static_cast<std::size_t>(a)] < size[static_cast<std::size_t>(b)]) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    size[static_cast<std::size_t>(a)] += size[static_cast<std::size_t>(b)];
    history.emplace_back(a, b);
    return true;
  }
  void undo() {
    const auto [a, b] = history.back();
    history.pop_back();
    parent[static_cast<std::size_t>(b)] = b;
    size[static_cast<std::size_t>(a)] -= size[static_cast<std::size_t>(b)];
  }
};

}  // namespace

double plan_value(const Eigen::MatrixXd& cost, const Eigen::MatrixXd& flow) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < flow.rows(); ++i)
    for (Eigen::Index j = 0; j < flow.cols(); ++j)
      if (flow(i, j) != 0.0) s += cost(i, j) * flow(i, j);
  return s;
}

double spanning_tree_count(Eigen::Index n, Eigen::Index m) {
  return std::pow(static_cast<double>(n), static_cast<double>(m - 1)) *
         std::pow(static_cast<double>(m), static_cast<double>(n - 1));
}

Solution vertex_enumeration(const Eigen::MatrixXd& cost, const Eigen::VectorXd& supply,
                            const Eigen::VectorXd& demand) {
  check_balanced(cost, supply, demand);
  const Eigen::Index n = cost.rows(), m = cost.cols();
  const Eigen::Index cells = n * m, need = n + m - 1;
  constexpr double feas_tol = 1e-12;

  Solution best;
  best.method = "vertex-enumeration";
  best.value = std::numeric_limits<double>::infinity();
  std::vector<Cell> edges, best_edges;
  RollbackDsu dsu(n + m);

  auto evaluate = [&] {
    ++best.work;
    Eigen::MatrixXd flow = tree_flows(edges, supply, demand);
    if (flow.minCoeff() < -feas_tol) return;
    flow = flow.cwiseMax(0.0);
    const double val = plan_value(cost, flow);
    if (val < best.value) {
      best.value = val;
      best.flow = std::move(flow);
      best_edges = edges;
    }
  };
  auto dfs = [&](auto&& self, Eigen::Index cell) -> void {
    const auto chosen = static_cast<Eigen::Index>(edges.size());
    if (chosen == need) {
      evaluate();
      return;
    }
    if (cells - cell < need - chosen) return;
    const Eigen::Index i = cell / m, j = cell % m;
    if (dsu.unite(i, n + j)) {
      edges.emplace_back(i, j);
      self(self, cell + 1);
      edges.pop_back();
      dsu.undo();
    }
    self(self, cell + 1);
  };
  dfs(dfs, 0);
  if (best_edges.empty() && need > 0) throw std::runtime_error("vertex_enumeration: no feasible vertex");
  tree_potentials(cost, best_edges, best.u, best.v);
  return best;
}

Solution transportation_simplex(const Eigen::MatrixXd& cost, const Eigen::VectorXd& supply,
                                const Eigen::VectorXd& demand) {
  check_balanced(cost, supply, demand);
  const Eigen::Index n = cost.rows(), m = cost.cols();
  const double eps = 1e-12 * (1.0 + cost.cwiseAbs().maxCoeff());

  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(n, m);
  std::vector<Cell> basis;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> basic =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, m, false);
  {
    // Northwest corner: exactly n + m - 1 cells, degenerate zeros included.
    Eigen::VectorXd s = supply, d = demand;
    Eigen::Index i = 0, j = 0;
    while (true) {
      const double q = std::min(s(i), d(j));
      flow(i, j) = q;
      basic(i, j) = true;
      basis.emplace_back(i, j);
      s(i) -= q;
      d(j) -= q;
      if (i == n - 1 && j == m - 1) break;
      if ((s(i) <= d(j) && i < n - 1) || j == m - 1)
        ++i;
      else
        ++j;
    }
  }

  Solution sol;
  sol.method = "transportation-simplex";
  int degenerate_run = 0;
  bool bland = false;
  const long long max_pivots = 1000000;
  for (;; ++sol.work) {
    if (sol.work > max_pivots) throw std::runtime_error("transportation_simplex: pivot limit reached");
    tree_potentials(cost, basis, sol.u, sol.v);

    // Pricing.
    Eigen::Index ei = -1, ej = -1;
    double best_r = -eps;
    for (Eigen::Index i = 0; i < n && !(bland && ei >= 0); ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        if (basic(i, j)) continue;
        const double r = cost(i, j) - sol.u(i) - sol.v(j);
        if (r < best_r) {
          best_r = r;
          ei = i;
          ej = j;
          if (bland) break;
        }
      }
    }
    if (ei < 0) break;

    // Path in the basis tree from column ej back to row ei.
    std::vector<std::vector<std::size_t>> incident(static_cast<std::size_t>(n + m));
    for (std::size_t e = 0; e < basis.size(); ++e) {
      incident[static_cast<std::size_t>(basis[e].first)].push_back(e);
      incident[static_cast<std::size_t>(n + basis[e].second)].push_back(e);
    }
    const auto start = static_cast<std::size_t>(n + ej), goal = static_cast<std::size_t>(ei);
    std::vector<long> via(static_cast<std::size_t>(n + m), -1);
    std::vector<bool> seen(static_cast<std::size_t>(n + m), false);
    std::queue<std::size_t> q;
    q.push(start);
    seen[start] = true;
    while (!q.empty() && !seen[goal]) {
      const std::size_t node = q.front();
      q.pop();
      for (auto e : incident[node]) {
        const auto [i, j] = basis[e];
        const std::size_t other = node < static_cast<std::size_t>(n) ? static_cast<std::size_t>(n + j)
                                                                     : static_cast<std::size_t>(i);
        if (seen[other]) continue;
        seen[other] = true;
        via[other] = static_cast<long>(e);
        q.push(other);
      }
    }
    std::vector<std::size_t> path;  // edges from goal back to start
    for (std::size_t node = goal; node != start;) {
      const auto e = static_cast<std::size_t>(via[node]);
      path.push_back(e);
      const auto [i, j] = basis[e];
      node = node < static_cast<std::size_t>(n) ? static_cast<std::size_t>(n + j) : static_cast<std::size_t>(i);
    }
    std::reverse(path.begin(), path.end());  // now starts at column ej

    // Alternating signs: -, +, -, ... starting next to the entering cell.
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leave = path.front();
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const auto [i, j] = basis[path[k]];
      const double f = flow(i, j);
      const bool better = f < theta || (bland && f == theta && basis[path[k]] < basis[leave]);
      if (better) {
        theta = f;
        leave = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      const auto [i, j] = basis[path[k]];
      flow(i, j) += (k % 2 == 0 ? -theta : theta);
    }
    flow(ei, ej) = theta;
    const auto [li, lj] = basis[leave];
    flow(li, lj) = 0.0;
    basic(li, lj) = false;
    basic(ei, ej) = true;
    basis[leave] = {ei, ej};

    if (theta <= 0.0) {
      if (++degenerate_run > 50) bland = true;
    } else {
      degenerate_run = 0;
    }
  }
  sol.flow = flow.cwiseMax(0.0);
  sol.value = plan_value(cost, sol.flow);
  return sol;
}

}  // namespace ergo::lp
