#include "repbasis/model.hpp"

#include <algorithm>
#include <cmath>

namespace repbasis {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "OK";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::AlphaOutOfRange: return "ALPHA_OUT_OF_RANGE";
    case ErrorCode::KTooSmall: return "K_TOO_SMALL";
    case ErrorCode::NTooSmall: return "N_TOO_SMALL";
    case ErrorCode::EtaNegative: return "ETA_NEGATIVE";
    case ErrorCode::EpsNegative: return "EPS_NEGATIVE";
    case ErrorCode::XiNotPositive: return "XI_NOT_POSITIVE";
    case ErrorCode::LambdaNotPositive: return "LAMBDA_NOT_POSITIVE";
    case ErrorCode::XiEpsConstraint: return "XI_EPS_CONSTRAINT";
    case ErrorCode::EmptyWindow: return "EMPTY_WINDOW";
    case ErrorCode::POutOfRange: return "P_OUT_OF_RANGE";
    case ErrorCode::MembersInvalid: return "MEMBERS_INVALID";
    case ErrorCode::CountOverflow: return "COUNT_OVERFLOW";
    case ErrorCode::BudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::CapExceeded: return "CAP_EXCEEDED";
    case ErrorCode::NCapExceeded: return "N_CAP_EXCEEDED";
    case ErrorCode::NoLowerRoot: return "NO_LOWER_ROOT";
    case ErrorCode::CjTooSmall: return "CJ_TOO_SMALL";
    case ErrorCode::TrialsTooSmall: return "TRIALS_TOO_SMALL";
  }
  return "UNKNOWN";
}

Window window_of(long long n, int k, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1)");
  if (k < 2) fail(ErrorCode::KTooSmall, "k must be at least 2");
  if (n < 1) fail(ErrorCode::NTooSmall, "n must be at least 1");
  Window w;
  w.lo = static_cast<long long>(std::ceil(alpha * static_cast<double>(n)));
  w.hi = static_cast<long long>(
      std::floor((static_cast<double>(k) - alpha) * static_cast<double>(n)));
  if (w.lo > w.hi) fail(ErrorCode::EmptyWindow, "window is empty at this n");
  return w;
}

const ExperimentParams& validate_params(const ExperimentParams& params) {
  if (params.n < 1) fail(ErrorCode::NTooSmall, "n must be at least 1");
  if (params.k < 2) fail(ErrorCode::KTooSmall, "k must be at least 2");
  if (!(params.alpha > 0.0 && params.alpha < 1.0))
    fail(ErrorCode::AlphaOutOfRange, "alpha must lie in (0, 1)");
  if (params.eta < 0.0) fail(ErrorCode::EtaNegative, "eta must be nonnegative");
  if (params.eps < 0.0) fail(ErrorCode::EpsNegative, "eps must be nonnegative");
  if (!(params.xi > 0.0)) fail(ErrorCode::XiNotPositive, "xi must be positive");
  if (!(params.lambda > 0.0))
    fail(ErrorCode::LambdaNotPositive, "lambda must be positive");
  if (params.k >= 3 && !(params.xi < params.eps / 4.0))
    fail(ErrorCode::XiEpsConstraint, "xi must be less than eps/4 for k >= 3");
  return params;
}

bool BasisSample::contains(long long value) const {
  return std::binary_search(members.begin(), members.end(), value);
}

BasisSample sample_from_members(long long n, std::vector<long long> members) {
  if (n < 0) fail(ErrorCode::NTooSmall, "n must be nonnegative");
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] < 0 || members[i] > n)
      fail(ErrorCode::MembersInvalid, "member outside [0, n]");
    if (i > 0 && members[i] <= members[i - 1])
      fail(ErrorCode::MembersInvalid, "members must be strictly increasing");
  }
  BasisSample sample;
  sample.n = n;
  sample.p = -1.0;
  sample.seed = 0;
  sample.rule_tag = "explicit";
  sample.members = std::move(members);
  return sample;
}

void validate_band_policy(const BandPolicy& band) {
  if (band.mode == BandMode::FixedMultipliers) {
    if (!(band.c_lo >= 0.0) || !(band.c_hi > 0.0) || !(band.c_lo < band.c_hi))
      fail(ErrorCode::InvalidArgument, "fixed band needs 0 <= c_lo < c_hi");
  } else {
    if (!(band.target_gamma > 0.0))
      fail(ErrorCode::InvalidArgument, "target_gamma must be positive");
    if (!(band.target_lambda > 0.0))
      fail(ErrorCode::InvalidArgument, "target_lambda must be positive");
  }
}

}  // namespace repbasis
