#include <cmath>

#include "doctest.h"
#include "meetwalk/error.hpp"
#include "meetwalk/meeting_ctmc.hpp"
#include "meetwalk/product_space.hpp"
#include "oracles.hpp"
#include "random_chains.hpp"

using namespace meetwalk;

namespace {

RateMatrix flip() {
  Eigen::MatrixXd q(2, 2);
  q << -1, 1, 1, -1;
  return RateMatrix(q);
}

RateMatrix frozen(int n) { return RateMatrix(Eigen::MatrixXd::Zero(n, n)); }

void check_against_oracle(const MeetingTimeResult& r, const std::vector<double>& ref, double tol) {
  REQUIRE(r.state_count() == ref.size());
  for (std::size_t s = 0; s < ref.size(); ++s) {
    const auto v = r.value(s);
    CHECK(v.has_value() == std::isfinite(ref[s]));
    if (v && std::isfinite(ref[s])) CHECK(std::abs(*v - ref[s]) <= tol * (1.0 + std::abs(ref[s])));
  }
}

}  // namespace

TEST_CASE("two-agent examples") {
  const MeetingTimeResult r = ctmc_meeting_times(flip(), flip());
  CHECK(*r.value(std::vector<int>{0, 1}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(*r.value(std::vector<int>{1, 0}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(*r.value(std::vector<int>{0, 0}) == 0.0);
  CHECK(*r.value(std::vector<int>{1, 1}) == 0.0);
  CHECK(r.time_model() == TimeModel::continuous);

  const MeetingTimeResult still = ctmc_meeting_times(frozen(2), frozen(2));
  CHECK_FALSE(still.value(std::vector<int>{0, 1}).has_value());
  CHECK(*still.value(std::vector<int>{1, 1}) == 0.0);

  CHECK_THROWS_AS(ctmc_meeting_times(flip(), frozen(3)), ValidationError);
}

TEST_CASE("boundary and sign") {
  gen::Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen::integer(rng, 1, 6);
    const RateMatrix a = gen::random_rate(rng, n, 0.3);
    const RateMatrix b = gen::random_rate(rng, n, 0.3);
    const MeetingTimeResult r = ctmc_meeting_times(a, b);
    const ProductIndex idx(n, 1, 1);
    for (std::size_t s = 0; s < r.state_count(); ++s) {
      if (idx.is_meeting(s)) {
        CHECK(r.value(s) == 0.0);
      } else if (const auto v = r.value(s)) {
        CHECK(*v > 0.0);
      }
    }
  }
}

TEST_CASE("agreement with the jump-chain oracle") {
  gen::Rng rng(32);
  int partial = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = gen::integer(rng, 1, 5);
    const RateMatrix a = gen::random_rate(rng, n, gen::uniform(rng, 0.1, 0.6));
    const RateMatrix b = gen::random_rate(rng, n, gen::uniform(rng, 0.1, 0.6));
    const MeetingTimeResult r = ctmc_meeting_times(a, b);
    check_against_oracle(r, oracle::ctmc_meeting_times({a.to_dense()}, {b.to_dense()}), 1e-9);
    if (!r.all_finite()) ++partial;
    if (r.max_finite() && r.max_finite() > 0.0) CHECK(r.residual() <= 1e-9);
  }
  CHECK(partial > 10);
}

TEST_CASE("iterative solver agrees with the dense path") {
  SolverOptions iterative;
  iterative.dense_limit = 0;
  gen::Rng rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = gen::integer(rng, 2, 7);
    const RateMatrix a = gen::random_rate(rng, n, 0.35);
    const RateMatrix b = gen::random_rate(rng, n, 0.35);
    const MeetingTimeResult dense = ctmc_meeting_times(a, b);
    const MeetingTimeResult iter = ctmc_meeting_times(a, b, iterative);
    CHECK(iter.residual() <= 1e-9);
    for (std::size_t s = 0; s < dense.state_count(); ++s) {
      REQUIRE(dense.is_finite(s) == iter.is_finite(s));
      if (dense.is_finite(s)) CHECK(std::abs(*dense.value(s) - *iter.value(s)) <= 1e-7 * (1.0 + *dense.value(s)));
    }
  }
}

TEST_CASE("rate scaling") {
  gen::Rng rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen::integer(rng, 1, 5);
    const RateMatrix a = gen::random_rate(rng, n, 0.4);
    const RateMatrix b = gen::random_rate(rng, n, 0.4);
    const double c = std::exp(gen::uniform(rng, -3.0, 3.0));
    const MeetingTimeResult base = ctmc_meeting_times(a, b);
    const MeetingTimeResult fast = ctmc_meeting_times(a.scaled(c), b.scaled(c));
    for (std::size_t s = 0; s < base.state_count(); ++s) {
      REQUIRE(base.is_finite(s) == fast.is_finite(s));
      if (base.is_finite(s)) CHECK(std::abs(*fast.value(s) * c - *base.value(s)) <= 1e-9 * *base.value(s));
    }
  }
}

TEST_CASE("joint generator rows sum to zero") {
  gen::Rng rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = gen::integer(rng, 1, 4);
    std::vector<RateMatrix> fs;
    for (int k = gen::integer(rng, 2, 3); k > 0; --k) fs.push_back(gen::random_rate(rng, n, 0.5));
    const std::span<const RateMatrix> all(fs);
    const KroneckerSumGraph g(all.first(1), all.subspan(1));
    const Eigen::MatrixXd q(joint_generator(g));
    CHECK(q.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((q - oracle::kron_sum(gen::dense(fs))).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("singular system exactly when a state cannot reach the meeting set") {
  gen::Rng rng(36);
  int singular = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = gen::integer(rng, 1, 4);
    const RateMatrix a = gen::random_rate(rng, n, gen::uniform(rng, 0.05, 0.5));
    const RateMatrix b = gen::random_rate(rng, n, gen::uniform(rng, 0.05, 0.5));
    const Eigen::MatrixXd q = oracle::kron_sum({a.to_dense(), b.to_dense()});
    const auto meeting = oracle::meeting_states(n, 1, 1);
    const Eigen::Index size = q.rows();
    Eigen::MatrixXd e = Eigen::MatrixXd::Identity(size, size);
    for (Eigen::Index s = 0; s < size; ++s) {
      if (meeting[static_cast<std::size_t>(s)]) e(s, s) = 0.0;
    }
    const Eigen::MatrixXd system = e * (Eigen::MatrixXd::Identity(size, size) - q) - Eigen::MatrixXd::Identity(size, size);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    lu.setThreshold(1e-10);
    const bool invertible = lu.rank() == size;
    const MeetingTimeResult r = ctmc_meeting_times(a, b);
    CHECK(invertible == r.all_finite());
    if (!invertible) ++singular;
  }
  CHECK(singular > 20);
  CHECK(singular < 280);
}

TEST_CASE("group meeting times") {
  const std::vector<RateMatrix> two{flip(), flip()};
  const std::vector<RateMatrix> one{flip()};
  const MeetingTimeResult g = ctmc_group_meeting_times(two, one);
  CHECK(*g.value(std::vector<int>{0, 0, 1}) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(*g.value(std::vector<int>{0, 1, 1}) == 0.0);
  CHECK(*g.value(std::vector<int>{1, 0, 0}) == 0.0);

  gen::Rng rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = gen::integer(rng, 1, 6);
    const RateMatrix a = gen::random_rate(rng, n, 0.35);
    const RateMatrix b = gen::random_rate(rng, n, 0.35);
    const MeetingTimeResult pair = ctmc_meeting_times(a, b);
    const MeetingTimeResult grp = ctmc_group_meeting_times(std::vector{a}, std::vector{b});
    for (std::size_t s = 0; s < pair.state_count(); ++s) {
      REQUIRE(pair.is_finite(s) == grp.is_finite(s));
      if (pair.is_finite(s)) CHECK(std::abs(*pair.value(s) - *grp.value(s)) <= 1e-12 * (1.0 + *pair.value(s)));
    }
  }

  for (int trial = 0; trial < 80; ++trial) {
    const int n = gen::integer(rng, 1, 3);
    std::vector<RateMatrix> ps, es;
    const int l = gen::integer(rng, 1, 2);
    for (int k = 0; k < l; ++k) ps.push_back(gen::random_rate(rng, n, 0.4));
    for (int k = gen::integer(rng, 1, 3 - l + 1); k > 0; --k) es.push_back(gen::random_rate(rng, n, 0.4));
    check_against_oracle(ctmc_group_meeting_times(ps, es), oracle::ctmc_meeting_times(gen::dense(ps), gen::dense(es)),
                         1e-9);
  }

  CHECK_THROWS_AS(ctmc_group_meeting_times(std::vector<RateMatrix>(6, flip()), std::vector<RateMatrix>(20, flip())),
                  BudgetError);
}

TEST_CASE("single-chain hitting times") {
  const std::vector<int> second{1};
  const auto h = ctmc_hitting_times(flip(), second);
  REQUIRE(h.size() == 2);
  CHECK(*h[0] == doctest::Approx(1.0));
  CHECK(*h[1] == 0.0);

  gen::Rng rng(38);
  const std::vector<int> all{0, 1, 2};
  for (const auto& v : ctmc_hitting_times(gen::random_rate(rng, 3, 0.5), all)) CHECK(v == 0.0);

  Eigen::MatrixXd q(3, 3);
  q << -1, 1, 0, 0, 0, 0, 0, 2, -2;
  const std::vector<int> first{0};
  const auto blocked = ctmc_hitting_times(RateMatrix(q), first);
  CHECK(*blocked[0] == 0.0);
  CHECK_FALSE(blocked[1].has_value());
  CHECK_FALSE(blocked[2].has_value());

  CHECK_THROWS_AS(ctmc_hitting_times(flip(), std::vector<int>{}), ValidationError);
  CHECK_THROWS_AS(ctmc_hitting_times(flip(), std::vector<int>{2}), ValidationError);
}
