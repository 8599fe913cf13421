#include <algorithm>
#include <set>

#include "doctest.h"
#include "meetwalk/error.hpp"
#include "meetwalk/meeting_ctmc.hpp"
#include "meetwalk/meeting_dtmc.hpp"
#include "meetwalk/product_space.hpp"
#include "oracles.hpp"
#include "random_chains.hpp"

using namespace meetwalk;

namespace {

TransitionMatrix swap2() {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 1, 0;
  return TransitionMatrix(m);
}

RateMatrix unit_rate2() {
  Eigen::MatrixXd q(2, 2);
  q << -1, 1, 1, -1;
  return RateMatrix(q);
}

std::set<std::size_t> successors(const KroneckerProductGraph& g, std::size_t s) {
  std::set<std::size_t> out;
  g.for_each_successor(s, [&](std::size_t t, double) { out.insert(t); });
  return out;
}

std::set<std::size_t> successors(const KroneckerSumGraph& g, std::size_t s) {
  std::set<std::size_t> out;
  g.for_each_successor(s, [&](std::size_t t, double) { out.insert(t); });
  return out;
}

bool all_true(const std::vector<char>& v) {
  return std::all_of(v.begin(), v.end(), [](char c) { return c != 0; });
}

}  // namespace

TEST_CASE("flatten and unflatten are inverse") {
  gen::Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen::integer(rng, 1, 6);
    const int l = gen::integer(rng, 1, 3);
    const int m = gen::integer(rng, 1, 3);
    const ProductIndex index(n, l, m);
    for (std::size_t s = 0; s < index.state_count(); ++s) {
      CHECK(index.flatten(index.unflatten(s)) == s);
    }
    std::vector<int> tuple(static_cast<std::size_t>(l + m));
    for (int& v : tuple) v = gen::integer(rng, 0, n - 1);
    CHECK(index.unflatten(index.flatten(tuple)) == tuple);
  }
  const ProductIndex idx(3, 1, 2);
  CHECK(idx.flatten(std::vector<int>{0, 0, 1}) == 1);
  CHECK(idx.flatten(std::vector<int>{1, 0, 0}) == 9);
  CHECK(idx.stride(0) == 9);
  CHECK_THROWS_AS(idx.flatten(std::vector<int>{0, 3, 0}), ValidationError);
  CHECK_THROWS_AS(idx.flatten(std::vector<int>{0, 0}), ValidationError);
}

TEST_CASE("meeting set") {
  const ProductIndex pair(4, 1, 1);
  const auto mask = pair.meeting_mask();
  for (std::size_t s = 0; s < mask.size(); ++s) CHECK((mask[s] != 0) == (s % 5 == 0));

  gen::Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = gen::integer(rng, 1, 4);
    const int l = gen::integer(rng, 1, 2);
    const int m = gen::integer(rng, 1, 2);
    const ProductIndex index(n, l, m);
    const auto ours = index.meeting_mask();
    const auto ref = oracle::meeting_states(n, l, m);
    for (std::size_t s = 0; s < ours.size(); ++s) CHECK((ours[s] != 0) == ref[s]);
  }
  // Two pursuers sharing a node is not a meeting.
  const ProductIndex group(3, 2, 1);
  CHECK_FALSE(group.is_meeting(std::vector<int>{0, 0, 1}));
  CHECK(group.is_meeting(std::vector<int>{0, 1, 1}));
}

TEST_CASE("state budget") {
  CHECK_THROWS_WITH_AS(ProductIndex(10, 4, 4), doctest::Contains("exceeds the state budget"), BudgetError);
  CHECK_NOTHROW(ProductIndex(10, 3, 4));
  CHECK_THROWS_AS(ProductIndex(4, 1, 1, 15), BudgetError);
  CHECK_NOTHROW(ProductIndex(4, 1, 1, 16));
  const std::vector<TransitionMatrix> p{TransitionMatrix::identity(5)};
  SolverOptions tiny;
  tiny.state_budget = 24;
  CHECK_THROWS_AS(meeting_times(p[0], p[0], tiny), BudgetError);
  CHECK_THROWS_AS(ProductIndex(2, 20, 20), ValidationError);
}

TEST_CASE("product adjacency") {
  gen::Rng rng(5);
  const TransitionMatrix single = gen::random_transition(rng, 5, 0.4);
  const std::vector<TransitionMatrix> solo{single};
  const KroneckerProductGraph own(solo, solo);
  // One pursuer and one evader on the same chain: the (i, i) -> (j, k) edges
  // exist iff both factor entries are positive.
  for (std::size_t s = 0; s < own.state_count(); ++s) {
    const auto l = own.index().unflatten(s);
    for (std::size_t t = 0; t < own.state_count(); ++t) {
      const auto r = own.index().unflatten(t);
      CHECK(successors(own, s).count(t) == ((single(l[0], r[0]) > 0 && single(l[1], r[1]) > 0) ? 1u : 0u));
    }
  }

  const std::vector<TransitionMatrix> sw{swap2()};
  const KroneckerProductGraph swaps(sw, sw);
  CHECK(successors(swaps, 1) == std::set<std::size_t>{2});
  CHECK(successors(swaps, 2) == std::set<std::size_t>{1});

  // Transition probabilities equal the dense Kronecker product.
  for (int trial = 0; trial < 20; ++trial) {
    const int n = gen::integer(rng, 1, 3);
    std::vector<TransitionMatrix> ps{gen::random_transition(rng, n, 0.5), gen::random_transition(rng, n, 0.5)};
    std::vector<TransitionMatrix> es{gen::random_transition(rng, n, 0.5)};
    const KroneckerProductGraph g(ps, es);
    std::vector<Eigen::MatrixXd> all = gen::dense(ps);
    all.push_back(es[0].to_dense());
    const Eigen::MatrixXd k = oracle::kron(all);
    Eigen::MatrixXd ours = Eigen::MatrixXd::Zero(k.rows(), k.cols());
    for (std::size_t s = 0; s < g.state_count(); ++s) {
      g.for_each_successor(s, [&](std::size_t t, double p) { ours(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) += p; });
    }
    CHECK((ours - k).cwiseAbs().maxCoeff() < 1e-15);

    Eigen::VectorXd x = Eigen::VectorXd::Random(k.rows());
    Eigen::VectorXd y(k.rows());
    g.apply(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
            std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
    CHECK((y - k * x).cwiseAbs().maxCoeff() < 1e-13);

    for (std::size_t t = 0; t < g.state_count(); ++t) {
      std::set<std::size_t> pred;
      g.for_each_predecessor(t, [&](std::size_t s) { pred.insert(s); });
      for (std::size_t s = 0; s < g.state_count(); ++s) {
        CHECK((pred.count(s) == 1) == (k(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) > 0));
      }
    }
  }
}

TEST_CASE("kronecker sum adjacency") {
  const std::vector<RateMatrix> q{unit_rate2()};
  const KroneckerSumGraph g(q, q);
  // (1,2) -> (2,2) and (1,1)
  CHECK(successors(g, 1) == std::set<std::size_t>{0, 3});
  CHECK(g.exit_rate(1) == 2.0);

  gen::Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = gen::integer(rng, 1, 3);
    std::vector<RateMatrix> ps{gen::random_rate(rng, n, 0.5)};
    std::vector<RateMatrix> es{gen::random_rate(rng, n, 0.5), gen::random_rate(rng, n, 0.5)};
    const KroneckerSumGraph sum(ps, es);
    std::vector<Eigen::MatrixXd> all = gen::dense(ps);
    for (const auto& e : gen::dense(es)) all.push_back(e);
    const Eigen::MatrixXd k = oracle::kron_sum(all);
    const Eigen::MatrixXd joint = Eigen::MatrixXd(joint_generator(sum));
    CHECK((joint - k).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(joint.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + joint.cwiseAbs().maxCoeff()));
    for (std::size_t s = 0; s < sum.state_count(); ++s) {
      const auto from = sum.index().unflatten(s);
      for (std::size_t t : successors(sum, s)) {
        const auto to = sum.index().unflatten(t);
        int changed = 0;
        for (std::size_t c = 0; c < from.size(); ++c) changed += from[c] != to[c];
        CHECK(changed == 1);
      }
    }
    Eigen::VectorXd x = Eigen::VectorXd::Random(k.rows());
    Eigen::VectorXd y(k.rows());
    sum.apply(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
              std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
    CHECK((y - k * x).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("reaches_meeting_set") {
  const std::vector<TransitionMatrix> sw{swap2()};
  const auto r = reaches_meeting_set(sw, sw);
  CHECK(r == std::vector<char>{1, 0, 0, 1});

  gen::Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen::integer(rng, 1, 3);
    std::vector<TransitionMatrix> ps{gen::random_transition(rng, n, 0.3)};
    std::vector<TransitionMatrix> es{gen::random_transition(rng, n, 0.3)};
    if (trial % 3 == 0) es.push_back(gen::random_transition(rng, n, 0.3));
    std::vector<Eigen::MatrixXd> all = gen::dense(ps);
    for (const auto& e : gen::dense(es)) all.push_back(e);
    const auto ref =
        oracle::reaches(oracle::kron(all), oracle::meeting_states(n, 1, static_cast<int>(es.size())));
    const auto ours = reaches_meeting_set(ps, es);
    for (std::size_t s = 0; s < ref.size(); ++s) CHECK((ours[s] != 0) == ref[s]);
  }

  const std::vector<RateMatrix> frozen{RateMatrix(Eigen::MatrixXd::Zero(2, 2))};
  const auto c = reaches_meeting_set(KroneckerSumGraph(frozen, frozen));
  CHECK(c == std::vector<char>{1, 0, 0, 1});
}

TEST_CASE("is_convergent") {
  CHECK(is_convergent(Eigen::MatrixXd::Constant(1, 1, 0.5)));
  Eigen::MatrixXd perm(2, 2);
  perm << 0, 1, 1, 0;
  CHECK_FALSE(is_convergent(perm));
  Eigen::MatrixXd chain(2, 2);
  chain << 0, 1, 0, 0.9;
  CHECK(is_convergent(chain));
  CHECK_THROWS_AS(is_convergent(Eigen::MatrixXd::Constant(1, 1, -0.1)), ValidationError);
  CHECK_THROWS_AS(is_convergent(Eigen::MatrixXd::Constant(1, 1, 1.1)), ValidationError);

  gen::Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = gen::integer(rng, 1, 4);
    const TransitionMatrix a = gen::random_transition(rng, n, 0.35);
    const TransitionMatrix b = gen::random_transition(rng, n, 0.35);
    const std::vector<TransitionMatrix> ps{a}, es{b};
    const SparseRowMatrix masked = masked_product_matrix(KroneckerProductGraph(ps, es));
    const Eigen::MatrixXd dense(masked);
    CHECK(is_convergent(masked) == (oracle::spectral_radius(dense) < 1.0 - 1e-9));
  }
}

TEST_CASE("reachability, convergence and finite solve coincide") {
  gen::Rng rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = gen::integer(rng, 1, 5);
    const TransitionMatrix a = gen::random_transition(rng, n, gen::uniform(rng, 0.1, 0.5));
    const TransitionMatrix b = gen::random_transition(rng, n, gen::uniform(rng, 0.1, 0.5));
    const std::vector<TransitionMatrix> ps{a}, es{b};
    const KroneckerProductGraph g(ps, es);
    const bool reach = all_true(reaches_meeting_set(g));
    CHECK(reach == is_convergent(masked_product_matrix(g)));
    CHECK(reach == meeting_times(a, b).all_finite());
  }
}

TEST_CASE("walks to the meeting set have equal length in every factor") {
  gen::Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = gen::integer(rng, 2, 5);
    const std::vector<TransitionMatrix> ps{gen::random_transition(rng, n, 0.3)};
    const std::vector<TransitionMatrix> es{gen::random_transition(rng, n, 0.3)};
    const KroneckerProductGraph g(ps, es);
    const auto meeting = g.index().meeting_mask();
    const auto reach = reaches_meeting_set(g);
    for (std::size_t s = 0; s < g.state_count(); ++s) {
      if (!reach[s]) continue;
      // Forward BFS for a shortest path, then replay it coordinate-wise.
      std::vector<long> parent(g.state_count(), -1);
      std::vector<std::size_t> queue{s};
      parent[s] = static_cast<long>(s);
      std::size_t found = meeting[s] ? s : g.state_count();
      for (std::size_t head = 0; head < queue.size() && found == g.state_count(); ++head) {
        g.for_each_successor(queue[head], [&](std::size_t t, double) {
          if (parent[t] >= 0) return;
          parent[t] = static_cast<long>(queue[head]);
          queue.push_back(t);
          if (meeting[t] && found == g.state_count()) found = t;
        });
      }
      REQUIRE(found < g.state_count());
      std::vector<std::size_t> path{found};
      while (path.back() != s) path.push_back(static_cast<std::size_t>(parent[path.back()]));
      std::reverse(path.begin(), path.end());
      for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const auto from = g.index().unflatten(path[k]);
        const auto to = g.index().unflatten(path[k + 1]);
        CHECK(ps[0](from[0], to[0]) > 0);
        CHECK(es[0](from[1], to[1]) > 0);
      }
      const auto end = g.index().unflatten(found);
      CHECK(end[0] == end[1]);
    }
  }
}

TEST_CASE("finiteness certificate") {
  const std::vector<TransitionMatrix> sw{swap2()};
  const KroneckerProductGraph g(sw, sw);
  const auto fin = finite_states(g, reaches_meeting_set(g));
  const FinitenessCertificate cert = make_certificate(g.index(), fin);
  CHECK_FALSE(cert.all_finite);
  CHECK(cert.infinite_count == 2);
  CHECK(cert.infinite_states == std::vector<std::vector<int>>{{0, 1}, {1, 0}});

  const std::vector<TransitionMatrix> id{TransitionMatrix::identity(12)};
  const KroneckerProductGraph big(id, id);
  const FinitenessCertificate capped = make_certificate(big.index(), finite_states(big, reaches_meeting_set(big)));
  CHECK(capped.infinite_count == 132);
  CHECK(capped.infinite_states.size() == FinitenessCertificate::kMaxListed);
}
