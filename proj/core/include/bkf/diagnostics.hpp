#pragma once

#include <vector>

namespace bkf {

/// Split R-hat: each chain is halved, then the classic potential scale
/// reduction factor is computed over the halves, so within-chain drift is
/// caught even with a single chain. Chains must have equal length >= 4.
/// Degenerate cases: all halves constant and equal -> 1.0; constant halves
/// at different levels -> +infinity.
double split_r_hat(const std::vector<std::vector<double>>& chains);

/// Multi-chain effective sample size. Autocorrelations are combined across
/// chains through the pooled-variance identity, summed over Geyer's initial
/// positive sequence (truncate at the first negative even/odd pair sum).
/// Constant chains carry no correlation information and count as fully
/// independent. Can exceed the retained draw count for antithetic chains.
double effective_sample_size(const std::vector<std::vector<double>>& chains);

}  // namespace bkf
