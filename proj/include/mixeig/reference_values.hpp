#pragma once

// Versioned reference constants.
//
// kLShapeLambda1: smallest Dirichlet eigenvalue of [-1,1]^2 \ [0,1]^2.
// Produced by `lshape_reference 1000000 8`: RT1 adaptive run from the n=2 grid,
// theta = 0.5, 70 levels up to 1.07e6 total dofs, least-squares fit of
// lambda_h = lambda + c dofs^-2 over the last 8 levels (max residual 1.4e-9).
// Within 2.2e-9 of the published 9.6397238440219 (Trefethen & Betcke, 2006).

namespace mixeig::reference {

inline constexpr int kVersion = 2;
inline constexpr double kLShapeLambda1 = 9.63972384182;

}  // namespace mixeig::reference
