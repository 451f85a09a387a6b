#pragma once

#include <cstdint>
#include <vector>

#include "iefsvm/dataset.hpp"
#include "iefsvm/svm.hpp"

namespace iefsvm {

/// Every sample weighted 1; yields the canonical soft-margin machine.
MembershipVector unit_membership(const Dataset& ds);

/// Minority samples get 1, majority samples 1 / IR.
MembershipVector cost_sensitive_membership(const Dataset& ds);

/// Entropy-based weights at a single neighborhood size: minority samples get
/// 1, majority samples (1 - H_i) / IR where H_i is the entropy of the k
/// nearest neighbors of sample i.
MembershipVector efsvm_membership(const Dataset& ds, int k);

/// Picks k from the grid by 5-fold cross-validated misclassification error of
/// the machine trained with efsvm_membership; ties go to the smaller k.
int efsvm_select_k(const Dataset& ds, const std::vector<int>& k_grid,
                   const SolverConfig& cfg, const KernelSpec& kernel,
                   std::uint64_t seed);

/// Weights from the full entropy profile: with g_i = d_i * theta_i computed
/// over all samples, majority samples get (1 - (g_i - min g) / (max g - min
/// g)) / IR and minority samples get 1.  A degenerate g range contributes 0.
MembershipVector iefsvm_membership(const Dataset& ds);

}  // namespace iefsvm
