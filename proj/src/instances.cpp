#include "hcg/instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hcg {

namespace {

using json = nlohmann::json;

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

void validate_graph(const Graph& g, bool need_edges) {
  if (g.n <= 0) throw std::invalid_argument("graph: empty node set");
  if (need_edges && g.edges.empty())
    throw std::invalid_argument("graph: no edges");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : g.edges) {
    if (e.i < 1 || e.j < 1 || e.i > g.n || e.j > g.n)
      throw std::invalid_argument("graph: edge index out of range");
    if (e.i == e.j) throw std::invalid_argument("graph: self-loop");
    if (e.i >= e.j) throw std::invalid_argument("graph: edges must have i < j");
    if (!seen.emplace(e.i, e.j).second)
      throw std::invalid_argument("graph: duplicate edge");
  }
}

bool connected(const Graph& g) {
  if (g.n == 0) return false;
  std::vector<std::vector<int>> adj(static_cast<size_t>(g.n) + 1);
  for (const auto& e : g.edges) {
    adj[static_cast<size_t>(e.i)].push_back(e.j);
    adj[static_cast<size_t>(e.j)].push_back(e.i);
  }
  std::vector<char> vis(static_cast<size_t>(g.n) + 1, 0);
  std::queue<int> q;
  q.push(1);
  vis[1] = 1;
  int count = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    ++count;
    for (int v : adj[static_cast<size_t>(u)])
      if (!vis[static_cast<size_t>(v)]) {
        vis[static_cast<size_t>(v)] = 1;
        q.push(v);
      }
  }
  return count == g.n;
}

// Shortest-path distances from node 1 under edge lengths sqrt(d^2).
std::vector<double> dijkstra_from_one(const Graph& g) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::pair<int, double>>> adj(
      static_cast<size_t>(g.n) + 1);
  for (const auto& e : g.edges) {
    const double len = std::sqrt(e.w);
    adj[static_cast<size_t>(e.i)].emplace_back(e.j, len);
    adj[static_cast<size_t>(e.j)].emplace_back(e.i, len);
  }
  std::vector<double> dist(static_cast<size_t>(g.n) + 1, inf);
  dist[1] = 0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.emplace(0.0, 1);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<size_t>(u)]) continue;
    for (auto [v, len] : adj[static_cast<size_t>(u)]) {
      const double nd = d + len;
      if (nd < dist[static_cast<size_t>(v)]) {
        dist[static_cast<size_t>(v)] = nd;
        pq.emplace(nd, v);
      }
    }
  }
  return dist;
}

}  // namespace

Graph parse_gset(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  Graph g;
  long m = -1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    if (m < 0) {
      long nn;
      if (!(ls >> nn >> m) || nn <= 0 || m < 0)
        throw std::invalid_argument("parse_gset: malformed header at line " +
                                    std::to_string(lineno));
      std::string extra;
      if (ls >> extra)
        throw std::invalid_argument("parse_gset: trailing tokens at line " +
                                    std::to_string(lineno));
      g.n = static_cast<int>(nn);
      continue;
    }
    int i, j;
    double w;
    if (!(ls >> i >> j >> w))
      throw std::invalid_argument("parse_gset: malformed edge at line " +
                                  std::to_string(lineno));
    if (i > j) std::swap(i, j);
    g.edges.push_back({i, j, w});
  }
  if (m < 0) throw std::invalid_argument("parse_gset: missing header");
  if (static_cast<long>(g.edges.size()) != m)
    throw std::invalid_argument("parse_gset: edge count mismatch");
  validate_graph(g, false);
  return g;
}

Graph random_mixing_graph(int n, int m, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_mixing_graph: n < 2");
  if (m < n - 1) throw std::invalid_argument("random_mixing_graph: m < n-1");
  const long max_edges = static_cast<long>(n) * (n - 1) / 2;
  if (m > max_edges)
    throw std::invalid_argument("random_mixing_graph: m exceeds complete graph");
  std::mt19937_64 rng(seed);
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i + 1;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::set<std::pair<int, int>> used;
  Graph g;
  g.n = n;
  for (int k = 1; k < n; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    int a = perm[static_cast<size_t>(k)];
    int b = perm[static_cast<size_t>(pick(rng))];
    if (a > b) std::swap(a, b);
    used.emplace(a, b);
    g.edges.push_back({a, b, 0.0});
  }
  std::uniform_int_distribution<int> node(1, n);
  while (static_cast<int>(g.edges.size()) < m) {
    int a = node(rng), b = node(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!used.emplace(a, b).second) continue;
    g.edges.push_back({a, b, 0.0});
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (auto& e : g.edges) e.w = 1.0 - unif(rng);  // Uniform(0,1]
  std::sort(g.edges.begin(), g.edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  return g;
}

ConicInstance build_maxcut(const Graph& g) {
  validate_graph(g, true);
  const int n = g.n;
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges) {
    const int i = e.i - 1, j = e.j - 1;
    lap(i, i) += e.w;
    lap(j, j) += e.w;
    lap(i, j) -= e.w;
    lap(j, i) -= e.w;
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(i, i * n + i, 1.0);   // X_ii
    trip.emplace_back(i, static_cast<int>(nn), -1.0);  // -t
  }
  SparseRowMatrix rows(n, nn + 1);
  rows.setFromTriplets(trip.begin(), trip.end());

  ConicInstance inst;
  inst.kind = InstanceKind::MaxCut;
  inst.n = n;
  inst.graph = g;
  inst.problem.barrier =
      BarrierSpec::affine_inequality(std::move(rows), Eigen::VectorXd::Zero(n));
  inst.problem.nu = static_cast<double>(n);
  inst.problem.c_g = Eigen::VectorXd::Zero(nn + 1);
  inst.problem.c_g.head(nn) = flatten(-0.25 * lap);
  inst.problem.set =
      FeasibleSetSpec::spectrahedron(n, static_cast<double>(n))
          .with_pinned({{nn, 1.0}});
  inst.problem.x0 = Eigen::VectorXd::Zero(nn + 1);
  inst.problem.x0.head(nn) =
      flatten(Eigen::MatrixXd(0.5 * Eigen::MatrixXd::Identity(n, n)));
  inst.problem.x0[nn] = 1.0;
  inst.meta.name = "maxcut";
  inst.meta.maximize = true;
  return inst;
}

ConicInstance build_packing(const std::vector<Eigen::MatrixXd>& a,
                            const Eigen::MatrixXd& c, double rho) {
  if (a.empty()) throw std::invalid_argument("build_packing: no constraints");
  if (rho <= 0) throw std::invalid_argument("build_packing: rho <= 0");
  const Eigen::Index n = c.rows();
  if (c.cols() != n) throw std::invalid_argument("build_packing: C not square");
  const Eigen::Index nn = n * n;
  double max_tr = 0;
  std::vector<Eigen::Triplet<double>> trip;
  for (size_t k = 0; k < a.size(); ++k) {
    const auto& ak = a[k];
    if (ak.rows() != n || ak.cols() != n)
      throw std::invalid_argument("build_packing: A_i dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ak, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, ak.norm()))
      throw std::invalid_argument("build_packing: A_i not PSD");
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index cc = 0; cc < n; ++cc)
        if (ak(r, cc) != 0.0)
          trip.emplace_back(static_cast<int>(k), static_cast<int>(cc * n + r),
                            ak(r, cc));
    trip.emplace_back(static_cast<int>(k), static_cast<int>(nn), -1.0);
    max_tr = std::max(max_tr, ak.trace());
  }
  SparseRowMatrix rows(static_cast<int>(a.size()), nn + 1);
  rows.setFromTriplets(trip.begin(), trip.end());

  ConicInstance inst;
  inst.kind = InstanceKind::Packing;
  inst.n = static_cast<int>(n);
  inst.problem.barrier = BarrierSpec::affine_inequality(
      std::move(rows), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(a.size())));
  inst.problem.nu = static_cast<double>(a.size());
  inst.problem.c_g = Eigen::VectorXd::Zero(nn + 1);
  inst.problem.c_g.head(nn) = flatten(c);
  inst.problem.set =
      FeasibleSetSpec::spectrahedron(n, rho).with_pinned({{nn, 1.0}});
  double eps = 0.9 * rho / static_cast<double>(n);
  if (max_tr > 0) eps = std::min(eps, 0.5 / max_tr);  // keeps all slacks >= 1/2
  inst.problem.x0 = Eigen::VectorXd::Zero(nn + 1);
  inst.problem.x0.head(nn) =
      flatten(Eigen::MatrixXd(eps * Eigen::MatrixXd::Identity(n, n)));
  inst.problem.x0[nn] = 1.0;
  inst.meta.name = "packing";
  return inst;
}

ConicInstance build_covering(const std::vector<Eigen::MatrixXd>& a, double rho) {
  if (a.empty()) throw std::invalid_argument("build_covering: no matrices");
  if (rho <= 0) throw std::invalid_argument("build_covering: rho <= 0");
  const Eigen::Index n = a.front().rows();
  const Eigen::Index m = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::MatrixXd> coeffs;
  coeffs.reserve(a.size() + 1);
  for (const auto& ak : a) {
    if (ak.rows() != n || ak.cols() != n)
      throw std::invalid_argument("build_covering: A_i dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ak, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, ak.norm()))
      throw std::invalid_argument("build_covering: A_i not PSD");
    sum += ak;
    coeffs.push_back(ak);
  }
  coeffs.push_back(-Eigen::MatrixXd::Identity(n, n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sum, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin <= 0)
    throw std::invalid_argument("build_covering: sum of A_i not positive definite");
  double beta = 2.0 / lmin;
  if (static_cast<double>(m) * beta > 0.95 * rho) {
    const double beta2 = 0.95 * rho / static_cast<double>(m);
    if (beta2 * lmin < 1.2)
      throw std::invalid_argument(
          "build_covering: rho too small for a strictly interior start; "
          "enlarge rho");
    beta = beta2;
  }

  ConicInstance inst;
  inst.kind = InstanceKind::Covering;
  inst.n = static_cast<int>(n);
  inst.problem.barrier =
      BarrierSpec::log_det_affine(Eigen::MatrixXd::Zero(n, n), std::move(coeffs));
  inst.problem.nu = static_cast<double>(n);
  inst.problem.c_g = Eigen::VectorXd::Zero(m + 1);
  inst.problem.c_g.head(m).setOnes();
  inst.problem.set =
      FeasibleSetSpec::scaled_simplex(m, rho).with_pinned({{m, 1.0}});
  inst.problem.x0 = Eigen::VectorXd::Constant(m + 1, beta);
  inst.problem.x0[m] = 1.0;
  inst.meta.name = "covering";
  return inst;
}

ConicInstance build_mixing(const Graph& g_in, bool normalize) {
  Graph g = g_in;
  validate_graph(g, true);
  if (g.n < 2) throw std::invalid_argument("build_mixing: need n >= 2");
  for (const auto& e : g.edges)
    if (!(e.w > 0)) throw std::invalid_argument("build_mixing: d^2 must be > 0");
  if (!connected(g)) throw std::invalid_argument("build_mixing: graph disconnected");

  double scale = 1.0;
  if (normalize) {
    double total = 0;
    for (const auto& e : g.edges) total += e.w;
    scale = static_cast<double>(g.n) * g.n / total;
    for (auto& e : g.edges) e.w *= scale;
  }

  const int n = g.n;
  const Eigen::Index p = n - 1;
  const Eigen::Index pp = p * p;
  const auto red = [](int v) { return v - 2; };  // node (>1) -> 0-based index

  std::vector<Eigen::Triplet<double>> trip;
  MixingData mix;
  for (size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    const int row = static_cast<int>(k);
    MixingData::Edge me;
    me.d2 = e.w;
    if (e.i == 1) {
      const Eigen::Index b = red(e.j);
      me.b = static_cast<int>(b);
      trip.emplace_back(row, static_cast<int>(b * p + b), 1.0);
    } else {
      const Eigen::Index ai = red(e.i), b = red(e.j);
      me.a = static_cast<int>(ai);
      me.b = static_cast<int>(b);
      trip.emplace_back(row, static_cast<int>(ai * p + ai), 1.0);
      trip.emplace_back(row, static_cast<int>(b * p + b), 1.0);
      trip.emplace_back(row, static_cast<int>(ai * p + b), -1.0);
      trip.emplace_back(row, static_cast<int>(b * p + ai), -1.0);
    }
    trip.emplace_back(row, static_cast<int>(pp), -e.w);  // -t*d^2
    mix.edges.push_back(me);
  }
  SparseRowMatrix rows(static_cast<int>(g.edges.size()), pp + 1);
  rows.setFromTriplets(trip.begin(), trip.end());

  const std::vector<double> dist = dijkstra_from_one(g);
  double alpha = 0;
  for (int j = 2; j <= n; ++j)
    alpha += dist[static_cast<size_t>(j)] * dist[static_cast<size_t>(j)];
  mix.alpha = alpha;

  double mu_edge1 = std::numeric_limits<double>::infinity();
  double mu_inner = std::numeric_limits<double>::infinity();
  for (const auto& e : g.edges) {
    if (e.i == 1)
      mu_edge1 = std::min(mu_edge1, e.w);
    else
      mu_inner = std::min(mu_inner, e.w / 2.0);
  }
  double mu = 0.5 * std::min(mu_edge1, mu_inner);
  mu = std::min(mu, 0.9 * alpha / static_cast<double>(p));

  ConicInstance inst;
  inst.kind = InstanceKind::Mixing;
  inst.n = static_cast<int>(p);
  inst.graph = g;
  inst.mixing = std::move(mix);
  inst.problem.barrier = BarrierSpec::affine_inequality(
      std::move(rows),
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.edges.size())));
  inst.problem.nu = static_cast<double>(g.edges.size());
  Eigen::MatrixXd obj =
      Eigen::MatrixXd::Identity(p, p) -
      Eigen::MatrixXd::Constant(p, p, 1.0 / static_cast<double>(n));
  inst.problem.c_g = Eigen::VectorXd::Zero(pp + 1);
  inst.problem.c_g.head(pp) = flatten(-obj);  // maximize <obj, X>
  inst.problem.set =
      FeasibleSetSpec::spectrahedron(p, alpha).with_pinned({{pp, 1.0}});
  inst.problem.x0 = Eigen::VectorXd::Zero(pp + 1);
  inst.problem.x0.head(pp) =
      flatten(Eigen::MatrixXd(mu * Eigen::MatrixXd::Identity(p, p)));
  inst.problem.x0[pp] = 1.0;
  inst.meta.name = "mixing";
  inst.meta.maximize = true;
  inst.meta.weight_scale = scale;
  return inst;
}

std::vector<std::string> builtin_names() {
  return {"maxcut-edge",       "maxcut-triangle", "covering-1x1",
          "covering-identity-10", "packing-identity-2", "mixing-edge",
          "mixing-path3"};
}

ConicInstance build_builtin(const std::string& name) {
  if (name == "maxcut-edge") {
    ConicInstance inst = build_maxcut(Graph{2, {{1, 2, 1.0}}});
    inst.meta.name = name;
    inst.meta.opt_ref = 1.0;
    inst.meta.opt_provenance = "grid over X12 with unit diagonal";
    return inst;
  }
  if (name == "maxcut-triangle") {
    ConicInstance inst =
        build_maxcut(Graph{3, {{1, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}}});
    inst.meta.name = name;
    inst.meta.opt_ref = 2.25;
    inst.meta.opt_provenance = "parameterized off-diagonal grid with PSD test";
    return inst;
  }
  if (name == "covering-1x1") {
    ConicInstance inst =
        build_covering({Eigen::MatrixXd::Constant(1, 1, 2.0)}, 3.0);
    inst.meta.name = name;
    inst.meta.opt_ref = 0.5;
    inst.meta.opt_provenance = "1-D closed form, infimum at the boundary";
    return inst;
  }
  if (name == "covering-identity-10") {
    std::vector<Eigen::MatrixXd> a;
    for (int i = 0; i < 10; ++i) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(10, 10);
      e(i, i) = 1.0;
      a.push_back(e);
    }
    ConicInstance inst = build_covering(a, 20.0);
    inst.meta.name = name;
    inst.meta.opt_ref = 10.0;
    inst.meta.opt_provenance = "coordinatewise forcing x_i >= 1";
    return inst;
  }
  if (name == "packing-identity-2") {
    ConicInstance inst = build_packing({Eigen::MatrixXd::Identity(2, 2)},
                                       -Eigen::MatrixXd::Identity(2, 2), 2.0);
    inst.meta.name = name;
    inst.meta.opt_ref = -1.0;
    inst.meta.opt_provenance = "single scalar constraint tr X <= 1";
    return inst;
  }
  if (name == "mixing-edge") {
    ConicInstance inst = build_mixing(Graph{2, {{1, 2, 1.0}}}, false);
    inst.meta.name = name;
    inst.meta.opt_ref = 0.5;
    inst.meta.opt_provenance = "1-D closed form";
    return inst;
  }
  if (name == "mixing-path3") {
    ConicInstance inst =
        build_mixing(Graph{3, {{1, 2, 1.0}, {2, 3, 1.0}}}, false);
    inst.meta.name = name;
    inst.meta.opt_ref = 2.0;
    inst.meta.opt_provenance = "grid over (X11, X22, X12) with PSD test";
    return inst;
  }
  throw std::invalid_argument("unknown builtin instance: " + name);
}

double feasibility_margin(const ConicInstance& inst, const Eigen::VectorXd& x) {
  const ProblemData& d = inst.problem;
  if (x.size() != d.barrier.dim())
    throw std::invalid_argument("feasibility_margin: dimension mismatch");
  double m = std::numeric_limits<double>::infinity();
  switch (d.barrier.kind()) {
    case BarrierSpec::Kind::AffineInequality: {
      Eigen::VectorXd slacks = d.barrier.offsets() - d.barrier.rows() * x;
      m = std::min(m, slacks.minCoeff());
      break;
    }
    case BarrierSpec::Kind::LogDetAffine: {
      Eigen::MatrixXd mm = d.barrier.constant_term() + d.barrier.map_linear(x);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mm,
                                                        Eigen::EigenvaluesOnly);
      m = std::min(m, es.eigenvalues().minCoeff());
      break;
    }
    case BarrierSpec::Kind::Product:
      break;
  }
  m = std::min(m, d.set.margin(x));
  return m;
}

namespace {
double sym_min_eig(const Eigen::MatrixXd& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}
}  // namespace

std::pair<Eigen::MatrixXd, RepairReport> repair_maxcut_solution(
    const Eigen::MatrixXd& x) {
  if (x.rows() != x.cols())
    throw std::invalid_argument("repair_maxcut_solution: not square");
  if ((x - x.transpose()).norm() > 1e-10 * std::max(1.0, x.norm()))
    throw std::invalid_argument("repair_maxcut_solution: not symmetric");
  RepairReport rep;
  const double lmin = sym_min_eig(x);
  rep.margin_before = std::min(lmin, 1.0 - x.diagonal().maxCoeff());
  rep.shift = std::min(0.0, lmin);
  Eigen::MatrixXd shifted =
      x - rep.shift * Eigen::MatrixXd::Identity(x.rows(), x.cols());
  rep.alpha = std::max(1.0, shifted.diagonal().maxCoeff());
  Eigen::MatrixXd out = shifted / rep.alpha;
  rep.margin_after = std::min(sym_min_eig(out), 1.0 - out.diagonal().maxCoeff());
  return {std::move(out), rep};
}

std::pair<Eigen::MatrixXd, RepairReport> repair_mixing_solution(
    const Eigen::MatrixXd& x, const ConicInstance& inst) {
  if (inst.kind != InstanceKind::Mixing)
    throw std::invalid_argument("repair_mixing_solution: not a mixing instance");
  if (x.rows() != x.cols() || x.rows() != inst.n)
    throw std::invalid_argument("repair_mixing_solution: dimension mismatch");
  if ((x - x.transpose()).norm() > 1e-10 * std::max(1.0, x.norm()))
    throw std::invalid_argument("repair_mixing_solution: not symmetric");
  if (sym_min_eig(x) < -1e-9 * std::max(1.0, x.norm()))
    throw std::invalid_argument("repair_mixing_solution: input not PSD");

  const auto edge_value = [&](const MixingData::Edge& e,
                              const Eigen::MatrixXd& m) {
    if (e.a < 0) return m(e.b, e.b);
    return m(e.a, e.a) + m(e.b, e.b) - 2.0 * m(e.a, e.b);
  };
  const auto margin = [&](const Eigen::MatrixXd& m) {
    double v = sym_min_eig(m);
    for (const auto& e : inst.mixing.edges)
      v = std::min(v, e.d2 - edge_value(e, m));
    return v;
  };

  RepairReport rep;
  rep.margin_before = margin(x);
  Eigen::MatrixXd out = x;
  constexpr long kMaxSteps = 100000;
  for (;;) {
    double gamma = 0;
    const MixingData::Edge* worst = nullptr;
    for (const auto& e : inst.mixing.edges) {
      const double viol = (edge_value(e, out) - e.d2) / e.d2;
      if (viol > gamma) {
        gamma = viol;
        worst = &e;
      }
    }
    if (!worst || gamma <= 1e-12) break;
    if (rep.steps >= kMaxSteps)
      throw std::runtime_error("repair_mixing_solution: did not terminate");
    int node = worst->b;
    if (worst->a >= 0 && out(worst->a, worst->a) > out(worst->b, worst->b))
      node = worst->a;
    // divide every entry of the node's row or column once by (1+gamma)
    const double f = 1.0 / (1.0 + gamma);
    out.row(node) *= f;
    out.col(node) *= f;
    out(node, node) /= f;  // hit twice above, the rule divides it once
    ++rep.steps;
  }
  rep.margin_after = margin(out);
  return {std::move(out), rep};
}

void save_instance_file(const std::string& path, const Graph& g,
                        InstanceKind kind, std::uint64_t seed, bool normalize) {
  if (kind != InstanceKind::MaxCut && kind != InstanceKind::Mixing)
    throw std::invalid_argument("save_instance_file: only graph-based kinds");
  validate_graph(g, true);
  json doc;
  doc["schema"] = 1;
  doc["kind"] = kind == InstanceKind::MaxCut ? "maxcut" : "mixing";
  doc["n"] = g.n;
  json edges = json::array(), weights = json::array();
  for (const auto& e : g.edges) {
    edges.push_back(json::array({e.i, e.j}));
    weights.push_back(e.w);
  }
  doc["edges"] = std::move(edges);
  doc["weights"] = std::move(weights);
  doc["seed"] = seed;
  doc["normalize"] = normalize;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_instance_file: cannot open " + path);
  out << doc.dump(2) << "\n";
}

ConicInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_instance_file: cannot open " + path);
  json doc = json::parse(in);
  if (doc.value("schema", 0) != 1)
    throw std::runtime_error("load_instance_file: unsupported schema");
  Graph g;
  g.n = doc.at("n").get<int>();
  const auto& edges = doc.at("edges");
  const auto& weights = doc.at("weights");
  if (edges.size() != weights.size())
    throw std::runtime_error("load_instance_file: edges/weights mismatch");
  for (size_t k = 0; k < edges.size(); ++k)
    g.edges.push_back({edges[k][0].get<int>(), edges[k][1].get<int>(),
                       weights[k].get<double>()});
  const std::string kind = doc.at("kind").get<std::string>();
  ConicInstance inst;
  if (kind == "maxcut")
    inst = build_maxcut(g);
  else if (kind == "mixing")
    inst = build_mixing(g, doc.value("normalize", true));
  else
    throw std::runtime_error("load_instance_file: unknown kind " + kind);
  inst.meta.name = kind + "-file";
  return inst;
}

}  // namespace hcg
