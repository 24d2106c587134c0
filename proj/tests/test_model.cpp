#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "repbasis/model.hpp"
#include "repbasis/rng.hpp"

using namespace repbasis;

namespace {

template <typename F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Ok;
}

ExperimentParams good_params() {
  ExperimentParams p;
  p.n = 100;
  p.k = 2;
  p.alpha = 0.5;
  p.eta = 0.0;
  p.eps = 0.5;
  p.xi = 0.1;
  p.lambda = 1.0;
  return p;
}

}  // namespace

TEST_CASE("window endpoints round inward") {
  const Window w1 = window_of(100, 2, 0.5);
  CHECK(w1.lo == 50);
  CHECK(w1.hi == 150);

  const Window w2 = window_of(10, 3, 0.25);
  CHECK(w2.lo == 3);   // ceil(2.5)
  CHECK(w2.hi == 27);  // floor(27.5)
}

TEST_CASE("window rejects alpha outside (0,1)") {
  CHECK(error_of([] { window_of(100, 2, 1.0); }) == ErrorCode::AlphaOutOfRange);
  CHECK(error_of([] { window_of(100, 2, 0.0); }) == ErrorCode::AlphaOutOfRange);
  CHECK(error_of([] { window_of(100, 2, -0.3); }) ==
        ErrorCode::AlphaOutOfRange);
  CHECK(error_of([] { window_of(0, 2, 0.5); }) == ErrorCode::NTooSmall);
  CHECK(error_of([] { window_of(100, 1, 0.5); }) == ErrorCode::KTooSmall);
}

TEST_CASE("window is symmetric about kn/2 up to rounding") {
  Rng rng(314159);
  for (int i = 0; i < 2000; ++i) {
    const long long n = 1 + static_cast<long long>(rng.next_below(5000));
    const int k = 2 + static_cast<int>(rng.next_below(5));
    const double alpha = 0.02 + 0.96 * rng.next_double();
    const Window w = window_of(n, k, alpha);
    const long long kn = static_cast<long long>(k) * n;
    CHECK(w.lo >= 1);
    CHECK(w.lo <= w.hi);
    CHECK(std::abs(w.lo + w.hi - kn) <= 1);
  }
}

TEST_CASE("validate_params accepts a good configuration and is idempotent") {
  const ExperimentParams p = good_params();
  const ExperimentParams& validated = validate_params(p);
  CHECK(&validated == &p);
  CHECK(error_of([&] { validate_params(validated); }) == ErrorCode::Ok);
}

TEST_CASE("validate_params names the violated field") {
  ExperimentParams p = good_params();
  p.k = 1;
  CHECK(error_of([&] { validate_params(p); }) == ErrorCode::KTooSmall);

  p = good_params();
  p.n = 0;
  CHECK(error_of([&] { validate_params(p); }) == ErrorCode::NTooSmall);

  p = good_params();
  p.alpha = 1.0;
  CHECK(error_of([&] { validate_params(p); }) == ErrorCode::AlphaOutOfRange);

  p = good_params();
  p.eta = -0.1;
  CHECK(error_of([&] { validate_params(p); }) == ErrorCode::EtaNegative);

  p = good_params();
  p.eps = -1.0;
  CHECK(error_of([&] { validate_params(p); }) == ErrorCode::EpsNegative);

  p = good_params();
  p.xi = 0.0;
  CHECK(error_of([&] { validate_params(p); }) == ErrorCode::XiNotPositive);

  p = good_params();
  p.lambda = 0.0;
  CHECK(error_of([&] { validate_params(p); }) == ErrorCode::LambdaNotPositive);
}

TEST_CASE("xi/eps coupling applies once the k >= 3 machinery is in play") {
  ExperimentParams p = good_params();
  p.k = 3;
  p.xi = 0.2;
  p.eps = 0.4;  // 0.2 >= 0.4/4
  CHECK(error_of([&] { validate_params(p); }) == ErrorCode::XiEpsConstraint);

  p.k = 2;  // eps and xi are idle for k = 2
  CHECK(error_of([&] { validate_params(p); }) == ErrorCode::Ok);

  p.k = 3;
  p.xi = 0.09;
  CHECK(error_of([&] { validate_params(p); }) == ErrorCode::Ok);
}

TEST_CASE("explicit member lists are validated") {
  const BasisSample s = sample_from_members(10, {0, 3, 7, 10});
  CHECK(s.members.size() == 4);
  CHECK(s.rule_tag == "explicit");
  CHECK(s.contains(7));
  CHECK(!s.contains(5));

  CHECK(error_of([] { sample_from_members(10, {0, 3, 11}); }) ==
        ErrorCode::MembersInvalid);
  CHECK(error_of([] { sample_from_members(10, {3, 3, 7}); }) ==
        ErrorCode::MembersInvalid);
  CHECK(error_of([] { sample_from_members(10, {5, 2}); }) ==
        ErrorCode::MembersInvalid);
  CHECK(error_of([] { sample_from_members(10, {-1, 2}); }) ==
        ErrorCode::MembersInvalid);
}

TEST_CASE("band policy sanity checks") {
  BandPolicy fixed;
  fixed.mode = BandMode::FixedMultipliers;
  fixed.c_lo = 0.0;  // [0, c_hi) is allowed for degenerate experiments
  fixed.c_hi = 4.0;
  CHECK(error_of([&] { validate_band_policy(fixed); }) == ErrorCode::Ok);

  fixed.c_lo = 5.0;
  CHECK(error_of([&] { validate_band_policy(fixed); }) ==
        ErrorCode::InvalidArgument);

  BandPolicy proof;
  proof.mode = BandMode::ProofDerived;
  proof.target_gamma = 0.0;
  CHECK(error_of([&] { validate_band_policy(proof); }) ==
        ErrorCode::InvalidArgument);
}
