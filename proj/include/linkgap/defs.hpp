#pragma once

namespace linkgap {

inline constexpr const char* kVersion = "0.1.0";

/// Numeric tolerances used across the toolkit. Reports embed these so a run
/// is reproducible from its output alone.
namespace tol {

// relative tolerance for the weight admissibility identity
inline constexpr double admissibility_rel = 1e-12;
// relative tolerance for double-counting / summation-order identities
inline constexpr double identity_rel = 1e-12;
// additive slack for midpoint-convexity inequalities on energies
inline constexpr double convexity_slack = 1e-12;
// relative slack for the energy comparison inequalities against lambda
inline constexpr double energy_ineq_rel = 1e-10;
// stabilizer consistency of an equivariant map's stored values
inline constexpr double stabilizer_fix = 1e-10;
// agreement of lambda recomputed at a non-representative orbit member
inline constexpr double orbit_lambda_check = 1e-9;
// equivariance certificate for barycenter operators
inline constexpr double equivariance_cert = 1e-8;
// image-diameter convergence threshold, relative to the initial diameter
inline constexpr double convergence_diam_rel = 1e-8;
// slack for the per-step geometric decay check, relative to E_0
inline constexpr double decay_slack_rel = 1e-12;
// additive slack for the displacement bound check
inline constexpr double displacement_slack = 1e-12;
// slack before a step ratio is flagged non-contractive
inline constexpr double noncontractive_slack = 1e-9;
// barycenter descent: step tolerance relative to the anchor diameter
inline constexpr double barycenter_step_rel = 1e-10;
// barycenter descent tolerance while inside the fixed-point iteration
inline constexpr double iterate_inner_tol = 1e-12;
// local energies below this (times scale) are treated as degenerate
inline constexpr double degenerate_energy = 1e-14;

inline constexpr int barycenter_max_iter = 10000;
inline constexpr int group_cap_default = 10000;

}  // namespace tol

}  // namespace linkgap
