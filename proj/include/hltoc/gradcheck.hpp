// Copyright 2026 The hltoc Authors
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

#include <cstdint>
#include <string>
#include <vector>

namespace hltoc {

struct GradientCheckOptions {
  int samples = 100;  // random points per block
  std::uint64_t seed = 20260101;
  double fd_step = 1e-6;
  double tolerance = 1e-5;
  // assembled-hierarchy blocks
  int horizon = 25;
  double dt = 0.1;
  int k = 4;
  /// Test hook: the analytic value of the named block is perturbed so that
  /// the check must flag it. Empty for a normal run.
  std::string corrupt_block;
};

struct BlockCheck {
  std::string name;
  int samples = 0;
  double max_rel_error = 0.0;
  bool passed = false;
};

struct GradientReport {
  double tolerance = 0.0;
  std::vector<BlockCheck> blocks;

  bool all_passed() const;
  const BlockCheck* find(const std::string& name) const;
};

/// |a - f| / max(|a|, |f|, 1).
double relative_error(double analytic, double numeric);

/// Central differences against every analytic derivative: weight functions,
/// both dynamics models, both task maps and the assembled ADTOC level
/// Jacobians of both scenarios (the n* column reported on its own).
GradientReport check_gradients(const GradientCheckOptions& options = {});

}  // namespace hltoc
