#include "grbb/process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "grbb/combinatorics.hpp"

namespace grbb {

namespace {

void fill_compositions(std::vector<Count>& current, std::size_t pos, std::uint64_t left,
                       std::vector<OccupancyVector>& out) {
  if (pos + 1 == current.size()) {
    current[pos] = static_cast<Count>(left);
    out.emplace_back(current);
    return;
  }
  for (std::uint64_t v = left + 1; v-- > 0;) {
    current[pos] = static_cast<Count>(v);
    fill_compositions(current, pos + 1, left - v, out);
  }
}

double log_factorial(std::uint64_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

struct Outcome {
  std::vector<Count> add;
  double prob;
};

// Every reassignment of `balls` balls into `bins` bins with its probability.
std::vector<Outcome> reassignment_outcomes(ReassignmentLaw law, std::size_t bins, std::uint64_t balls) {
  std::vector<Outcome> out;
  const auto comps = compositions(bins, balls);
  switch (law) {
    case ReassignmentLaw::FermiDirac: {
      const double w = 1.0 / binomial(bins, balls);
      for (const auto& c : comps) {
        const auto v = c.counts();
        if (std::all_of(v.begin(), v.end(), [](Count x) { return x <= 1; })) out.push_back({c.vector(), w});
      }
      break;
    }
    case ReassignmentLaw::MaxwellBoltzmann: {
      const double log_cells = static_cast<double>(balls) * std::log(static_cast<double>(bins));
      for (const auto& c : comps) {
        double lw = log_factorial(balls) - log_cells;
        for (Count x : c.counts()) lw -= log_factorial(x);
        out.push_back({c.vector(), std::exp(lw)});
      }
      break;
    }
    case ReassignmentLaw::BoseEinstein: {
      const double w = 1.0 / static_cast<double>(comps.size());
      for (const auto& c : comps) out.push_back({c.vector(), w});
      break;
    }
  }
  return out;
}

// Closed communicating classes via iterative Tarjan.
std::vector<std::vector<std::size_t>> closed_classes(const TransitionMatrix& m) {
  const std::size_t n = m.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> order(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (order[root] != kUnset) continue;
    std::vector<std::pair<std::size_t, std::size_t>> work{{root, 0}};
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!work.empty()) {
      auto& [v, edge] = work.back();
      if (edge < m.rows[v].size()) {
        const std::size_t w = m.rows[v][edge++].first;
        if (order[w] == kUnset) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          work.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      const std::size_t done = v;
      work.pop_back();
      if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
      if (low[done] == order[done]) {
        std::vector<std::size_t> members;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = components.size();
          members.push_back(w);
        } while (w != done);
        components.push_back(std::move(members));
      }
    }
  }

  std::vector<std::vector<std::size_t>> closed;
  for (std::size_t c = 0; c < components.size(); ++c) {
    bool leaks = false;
    for (std::size_t v : components[c]) {
      for (const auto& [w, p] : m.rows[v]) {
        if (p > 0.0 && comp[w] != c) leaks = true;
      }
    }
    if (!leaks) closed.push_back(components[c]);
  }
  return closed;
}

double tv_vectors(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

}  // namespace

void grbb_step_in_place(ReassignmentLaw law, OccupancyVector& state, Rng& rng) {
  std::uint64_t mobile = 0;
  for (auto& c : state.counts()) {
    if (c > 0) {
      --c;
      ++mobile;
    }
  }
  add_occupancy_sample(law, mobile, state.counts(), rng);
}

OccupancyVector grbb_step(ReassignmentLaw law, const OccupancyVector& state, Rng& rng) {
  OccupancyVector next = state;
  grbb_step_in_place(law, next, rng);
  return next;
}

std::vector<Pmf> grbb_trajectory(ReassignmentLaw law, const OccupancyVector& init, std::size_t steps,
                                 Rng& rng) {
  std::vector<Pmf> out;
  out.reserve(steps + 1);
  OccupancyVector state = init;
  out.push_back(empirical_measure(state.counts()));
  for (std::size_t t = 0; t < steps; ++t) {
    grbb_step_in_place(law, state, rng);
    out.push_back(empirical_measure(state.counts()));
  }
  return out;
}

std::vector<OccupancyVector> compositions(std::size_t bins, std::uint64_t balls) {
  if (bins == 0) throw std::invalid_argument("at least one bin is required");
  std::vector<OccupancyVector> out;
  std::vector<Count> current(bins, 0);
  fill_compositions(current, 0, balls, out);
  return out;
}

std::size_t TransitionMatrix::index_of(const OccupancyVector& state) const {
  const auto it = index.find(state);
  if (it == index.end()) throw std::out_of_range("state is not part of the transition matrix");
  return it->second;
}

TransitionMatrix exact_transition_matrix(ReassignmentLaw law, std::size_t bins, std::uint64_t balls,
                                         std::size_t max_states) {
  if (bins == 0) throw std::invalid_argument("at least one bin is required");
  const double count = binomial(balls + bins - 1, balls);
  if (count > static_cast<double>(max_states)) {
    throw std::length_error("state space exceeds the exact-analysis guard");
  }
  TransitionMatrix m{law, compositions(bins, balls), {}, {}};
  for (std::size_t i = 0; i < m.states.size(); ++i) m.index.emplace(m.states[i], i);

  const std::uint64_t max_mobile = std::min<std::uint64_t>(bins, balls);
  std::vector<std::vector<Outcome>> outcomes(max_mobile + 1);
  for (std::uint64_t k = 0; k <= max_mobile; ++k) outcomes[k] = reassignment_outcomes(law, bins, k);

  m.rows.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::vector<Count> base = m.states[i].vector();
    std::uint64_t mobile = 0;
    for (auto& c : base) {
      if (c > 0) {
        --c;
        ++mobile;
      }
    }
    std::map<std::size_t, double> row;
    for (const auto& o : outcomes[mobile]) {
      std::vector<Count> next = base;
      for (std::size_t b = 0; b < bins; ++b) next[b] += o.add[b];
      row[m.index_of(OccupancyVector(std::move(next)))] += o.prob;
    }
    m.rows[i].assign(row.begin(), row.end());
  }
  return m;
}

std::vector<double> propagate(const TransitionMatrix& matrix, const std::vector<double>& dist) {
  std::vector<double> next(matrix.size(), 0.0);
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (dist[i] == 0.0) continue;
    for (const auto& [j, p] : matrix.rows[i]) next[j] += dist[i] * p;
  }
  return next;
}

std::vector<double> distribution_after(const TransitionMatrix& matrix, std::size_t start, std::size_t steps) {
  std::vector<double> dist(matrix.size(), 0.0);
  dist.at(start) = 1.0;
  for (std::size_t t = 0; t < steps; ++t) dist = propagate(matrix, dist);
  return dist;
}

std::vector<double> stationary_exact(const TransitionMatrix& matrix) {
  const auto classes = closed_classes(matrix);
  if (classes.size() != 1) {
    throw std::domain_error("chain has no unique stationary distribution (" +
                            std::to_string(classes.size()) + " closed classes)");
  }
  auto members = classes.front();
  std::sort(members.begin(), members.end());
  const auto n = static_cast<Eigen::Index>(members.size());
  std::vector<Eigen::Index> local(matrix.size(), -1);
  for (Eigen::Index i = 0; i < n; ++i) local[members[static_cast<std::size_t>(i)]] = i;

  // Solve (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const auto& [j, p] : matrix.rows[members[static_cast<std::size_t>(i)]]) {
      const Eigen::Index lj = local[j];
      if (lj != n - 1) triplets.emplace_back(lj, i, p);
    }
    if (i != n - 1) triplets.emplace_back(i, i, -1.0);
    triplets.emplace_back(n - 1, i, 1.0);
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.compute(a);
  if (solver.info() != Eigen::Success) throw std::runtime_error("stationary solve failed");
  const Eigen::VectorXd x = solver.solve(rhs);

  std::vector<double> pi(matrix.size(), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) pi[members[static_cast<std::size_t>(i)]] = std::max(0.0, x(i));
  const auto next = propagate(matrix, pi);
  double residual = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) residual += std::abs(next[i] - pi[i]);
  if (residual > 1e-10) throw std::runtime_error("stationary residual above 1e-10");
  return pi;
}

std::size_t exact_mixing_time(const TransitionMatrix& matrix, std::optional<std::size_t> start, double eps) {
  constexpr std::size_t kMaxSteps = 1000000;
  const auto pi = stationary_exact(matrix);
  std::vector<std::size_t> starts;
  if (start) {
    starts.push_back(*start);
  } else {
    for (std::size_t i = 0; i < matrix.size(); ++i) starts.push_back(i);
  }
  std::size_t worst = 0;
  for (std::size_t s : starts) {
    std::vector<double> dist(matrix.size(), 0.0);
    dist.at(s) = 1.0;
    std::size_t t = 0;
    while (tv_vectors(dist, pi) > eps) {
      if (++t > kMaxSteps) throw std::runtime_error("mixing time exceeds step limit");
      dist = propagate(matrix, dist);
    }
    worst = std::max(worst, t);
  }
  return worst;
}

}  // namespace grbb
