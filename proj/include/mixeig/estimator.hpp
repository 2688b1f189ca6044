#pragma once

#include <optional>

#include <Eigen/Core>

#include "mixeig/eigensolver.hpp"
#include "mixeig/exact.hpp"
#include "mixeig/postprocess.hpp"

namespace mixeig {

/// eta(K) = ||grad u** - sigma_h||_{L2(K)} and eta = (sum_K eta(K)^2)^{1/2}.
struct EstimateReport {
  Eigen::VectorXd local;
  double eta = 0.0;
};

EstimateReport estimate(const MixedSpaces& spaces, const Eigen::VectorXd& sigma, const CgField& ustar2);

/// Errors against an analytic eigenpair, all in L2 via degree-12 quadrature.
struct ErrorBundle {
  double lambda = 0.0;           // exact eigenvalue
  double lambda_error = 0.0;     // |lambda - lambda_h|
  double u_l2 = 0.0;             // ||u - u_h||
  double sigma_l2 = 0.0;         // ||sigma - sigma_h||
  double grad_ustar2 = 0.0;      // ||grad u - grad u**||
  double u_ustar2 = 0.0;         // ||u - u**||
  double u_ustar = 0.0;          // ||u - u*||, when u* is supplied
  double projection_l2 = 0.0;    // ||P_h u - u_h||
  double lambda_u_l2 = 0.0;      // ||lambda u - lambda_h u_h||
  Eigen::VectorXd grad_ustar2_local;
  Eigen::VectorXd sigma_local;

  // (||grad u - grad u**||^2 + ||sigma - sigma_h||^2)^{1/2}
  double total() const;
};

// Returns `exact` or its negation so that (u_h, u) >= 0.
ExactSolution align_sign(const MixedSpaces& spaces, const EigenPair& pair, const ExactSolution& exact);

// Caller aligns signs first (see align_sign).
ErrorBundle compute_errors(const MixedSpaces& spaces, const EigenPair& pair, const ExactSolution& exact,
                           const CgField& ustar2, const DgField* ustar = nullptr);

// Throws MissingExactSolution when `exact` is empty.
ErrorBundle compute_errors(const MixedSpaces& spaces, const EigenPair& pair,
                           const std::optional<ExactSolution>& exact, const CgField& ustar2,
                           const DgField* ustar = nullptr);

double hypercircle_identity(const EigenPair& pair, const ErrorBundle& errors);

// eta / total error; empty when the error vanishes.
std::optional<double> efficiency_index(const EstimateReport& report, const ErrorBundle& errors);

struct ReliabilityGap {
  double gap = 0.0;    // total error - eta
  double bound = 0.0;  // 2 ||u - u**|| ||lambda u - lambda_h u_h|| / (total error + eta)
};
ReliabilityGap reliability_gap(const EstimateReport& report, const ErrorBundle& errors);

// Worst slack min_K (||grad u - grad u**||_K + ||sigma - sigma_h||_K - eta(K)).
// The triangle inequality makes it nonnegative; a value below -1e-10 throws.
double local_efficiency_check(const EstimateReport& report, const ErrorBundle& errors);

}  // namespace mixeig
