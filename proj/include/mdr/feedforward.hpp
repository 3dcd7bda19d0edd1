#pragma once

#include <span>
#include <vector>

#include "mdr/model.hpp"
#include "mdr/riccati.hpp"

namespace mdr {

/// Disturbance/reference compensation of the tracking law:
///
///   h_k = B'(R + P_{k+1}) E d_k + B' f_{k+1}
///   f_k = A' P_{k+1} E d_k + A' f_{k+1} - M_k' Upsilon_k^{-1} h_k - Q r,   f_{N+1} = -P_{N+1} r
struct FeedforwardSolution {
    std::vector<Vector> h;  // h_0 .. h_N
    std::vector<Vector> f;  // f_0 .. f_{N+1}
};

/// Matrices of the explicit (non-recursive) form of h_k and f_k.
struct ClosedFormTerms {
    std::vector<Matrix> H;        // B'(R + P_{k+1}) E
    std::vector<Matrix> Abar;     // A - B Upsilon_k^{-1} M_k
    std::vector<Matrix> F;        // (Abar_k' P_{k+1} - M_k' Upsilon_k^{-1} B' R) E
    std::vector<Matrix> Rscript;  // Abar_k' Rscript_{k+1} + Q, Rscript_{N+1} = P_{N+1}
};

ClosedFormTerms closed_form_terms(const RiccatiSolution& riccati, const SystemModel& model, const CostSpec& cost);

/// `d` holds d_0 .. d_N and must match the Riccati horizon.
FeedforwardSolution solve_recursive(const RiccatiSolution& riccati, const SystemModel& model, const CostSpec& cost,
                                    std::span<const Vector> d);
FeedforwardSolution solve_recursive(const RiccatiSolution& riccati, const SystemModel& model, const CostSpec& cost,
                                    const DisturbanceProfile& d);

/// Evaluates the explicit sums
///   f_k = sum_{s=k}^{N} Abar_k'...Abar_{s-1}' F_s d_s - Rscript_k r
///   h_k = H_k d_k + B' sum_{s=k+1}^{N} Abar_{k+1}'...Abar_{s-1}' F_s d_s - B' Rscript_{k+1} r
/// directly. O(N^2); meant as an independent route to the recursion.
FeedforwardSolution solve_closed_form(const RiccatiSolution& riccati, const SystemModel& model, const CostSpec& cost,
                                      std::span<const Vector> d);
FeedforwardSolution solve_closed_form(const RiccatiSolution& riccati, const SystemModel& model, const CostSpec& cost,
                                      const DisturbanceProfile& d);

struct SteadyFeedforward {
    Vector h;
    Vector f;
};

/// Fixed point of the backward equations for constant d and r:
/// (I - Abar') f = F d - Q r,  h = B'(R + P) E d + B' f.
SteadyFeedforward solve_steady(const GareSolution& gare, const SystemModel& model, const CostSpec& cost,
                               const Vector& d_limit);

}  // namespace mdr
