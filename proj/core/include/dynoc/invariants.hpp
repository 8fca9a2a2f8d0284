// Copyright 2026 The dynoc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dynoc/expfam.hpp"

namespace dynoc {

/// Outcome of one property check. `worst` is the worst observed value of
/// the checked quantity and `threshold` the limit it is compared against.
struct InvariantResult {
  std::string name;
  std::string suite;
  bool passed = false;
  double worst = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct InvariantOptions {
  std::uint64_t seed = 1;
  /// Sensitivity recursion under test; replaceable to check that the
  /// transport check detects a broken recursion.
  KUpdateFn k_update = dynoc::k_update;
};

// geometry
InvariantResult check_bregman_properties(std::size_t pairs, std::uint64_t seed);
InvariantResult check_law_of_cosines(MirrorKind kind, std::size_t triples, std::uint64_t seed);
InvariantResult check_prox_optimality(std::size_t trials, std::uint64_t seed);

// dynamics
InvariantResult check_contraction(std::size_t samples, std::uint64_t seed);
InvariantResult check_pixel_mass(std::size_t trials, std::uint64_t seed);
InvariantResult check_switched_variation(std::size_t trials, std::uint64_t seed);

// dmd
/// DMD under identity dynamics against COMID, bitwise, on `configs` random setups.
InvariantResult check_dmd_comid_equivalence(std::size_t configs, std::uint64_t seed);
/// Per-round tracking inequality over `runs` randomized runs of T rounds.
InvariantResult check_tracking_bound(std::size_t runs, std::size_t horizon, std::uint64_t seed);
/// max/min of R_T/√T over the horizons, plus R_T below the sampled bound.
InvariantResult check_regret_scaling(const std::vector<std::size_t>& horizons, std::size_t seeds,
                                     std::uint64_t seed);

// experts
InvariantResult check_simplex(std::size_t updates, double max_loss, std::uint64_t seed);
InvariantResult check_covering_grid(std::size_t samples, std::uint64_t seed);

// expfam
InvariantResult check_dual_inversion(std::size_t points, std::uint64_t seed);
InvariantResult check_dual_loss_convexity(std::size_t triples, std::uint64_t seed);
InvariantResult check_k_recursion(std::size_t steps, std::uint64_t seed,
                                  const KUpdateFn& update = k_update);
/// Transported predictions against independent full DMD runs.
InvariantResult check_transport_bound(std::size_t pairs, std::size_t horizon, std::uint64_t seed,
                                       const KUpdateFn& update = k_update);

// experiments
InvariantResult check_experiment_a(std::size_t seeds);
InvariantResult check_experiment_b(std::size_t seeds);
InvariantResult check_experiment_c(std::size_t seeds);

std::vector<std::string> invariant_suites();

/// Runs one suite, or every suite for "all". Unknown names raise InputError.
std::vector<InvariantResult> run_invariants(const std::string& suite,
                                            const InvariantOptions& options = {});

}  // namespace dynoc
