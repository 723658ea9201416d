#pragma once

#include <string>

/// Runs the numerical oracle suite (quadrature vs closed-form RDE,
/// Gram-Schmidt QR reconstruction, finite-difference gradients, brute-force
/// entropy, exhaustive-suffix convergence point, variance-ratio Monte Carlo,
/// grid-vs-argmin equivalence), printing one pass/fail line per oracle.
/// Returns 0 iff every selected oracle passes.
int run_selftest(const std::string& filter, bool perturb_kernel);
