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


#include <cmath>
#include <memory>
#include <sstream>

#include "doctest.h"
#include "hltoc/errors.hpp"
#include "hltoc/experiment.hpp"
#include "hltoc/oracle.hpp"

using namespace hltoc;

namespace {

std::shared_ptr<const DynamicsModel> point_mass(double dt = 0.1) {
  return std::make_shared<PointMass>(dt);
}

std::shared_ptr<const TaskFunction> origin() {
  return std::make_shared<StateTask>(Vector::Zero(2));
}

SweepResult fake_sweep(int minimal) {
  SweepResult s;
  s.entries.push_back({minimal, 0.0, SolveStatus::kConverged, 1});
  s.minimal_feasible_nstar = minimal;
  return s;
}

}  // namespace

TEST_CASE("point-mass unpadded sweep flips between 4 and 5") {
  const SweepResult s = sweep_nstar(point_mass(), origin(), 25, 2, 8, false, 1e-6);
  REQUIRE(s.entries.size() == 7);
  CHECK(s.find(4)->terminal_error == doctest::Approx(0.1).epsilon(0.2));
  CHECK(s.find(5)->terminal_error <= 1e-8);
  CHECK(s.minimal_feasible_nstar == 5);
  CHECK(max_error_increase(s) <= 10 * s.feasibility_tol);
  std::ostringstream csv;
  write_sweep_csv(csv, s);
  CHECK(csv.str().rfind("n_star,terminal_error,status,iterations\n", 0) == 0);
}

TEST_CASE("two-link unpadded sweep flips between 5 and 6" * doctest::may_fail()) {
  ExperimentConfig c;
  c.scenario = Scenario::kTwoLink;
  c.mode = Mode::kDtocFixed;
  c.n_star_fixed = 5;
  const TimeOptimalProblem p = build_problem(c);
  const SweepResult s = sweep_nstar(p.model_ptr(), p.task_ptr(), 25, 3, 8, false, 1e-6);
  MESSAGE("two-link minimal feasible n* " << s.minimal_feasible_nstar);
  for (const SweepEntry& e : s.entries) MESSAGE("n* " << e.n_star << " error " << e.terminal_error);
  CHECK(s.find(5)->terminal_error >= 7e-4);
  CHECK(s.find(5)->terminal_error <= 7e-2);
  CHECK(s.find(6)->terminal_error <= 2e-6);
}

TEST_CASE("single-candidate sweep echoes one solve") {
  const SweepResult s = sweep_nstar(point_mass(), origin(), 25, 5, 5, false, 1e-6);
  REQUIRE(s.entries.size() == 1);
  CHECK(s.entries[0].n_star == 5);
  CHECK(s.minimal_feasible_nstar == 5);
  const SweepResult none = sweep_nstar(point_mass(), origin(), 25, 3, 3, false, 1e-6);
  CHECK_FALSE(none.has_feasible());
  CHECK(none.minimal_feasible_nstar == -1);
}

TEST_CASE("sweep range is validated") {
  CHECK_THROWS_AS(sweep_nstar(point_mass(), origin(), 25, 5, 4, false, 1e-6), DomainError);
  CHECK_THROWS_AS(sweep_nstar(point_mass(), origin(), 25, -1, 4, false, 1e-6), DomainError);
  CHECK_THROWS_AS(sweep_nstar(point_mass(), origin(), 25, 0, 24, false, 1e-6), DomainError);
}

TEST_CASE("padded errors dominate unpadded errors") {
  const SweepResult plain = sweep_nstar(point_mass(), origin(), 25, 2, 8, false, 1e-6);
  const SweepResult padded = sweep_nstar(point_mass(), origin(), 25, 2, 8, true, 1e-6);
  for (const SweepEntry& e : plain.entries) {
    CHECK(padded.find(e.n_star)->terminal_error >= e.terminal_error - 1e-9);
  }
  CHECK(padded.minimal_feasible_nstar == plain.minimal_feasible_nstar);
}

TEST_CASE("sweep is reproducible") {
  const SweepResult a = sweep_nstar(point_mass(), origin(), 25, 3, 6, true, 1e-6);
  const SweepResult b = sweep_nstar(point_mass(), origin(), 25, 3, 6, true, 1e-6);
  std::ostringstream ca, cb;
  write_sweep_csv(ca, a);
  write_sweep_csv(cb, b);
  CHECK(ca.str() == cb.str());
}

TEST_CASE("agreement examples") {
  CHECK(compare_adtoc_to_sweep(5.1, fake_sweep(5)).agree);
  CHECK(compare_adtoc_to_sweep(4.9, fake_sweep(5)).agree);
  const SweepAgreement bad = compare_adtoc_to_sweep(5.1, fake_sweep(7));
  CHECK_FALSE(bad.agree);
  CHECK_FALSE(bad.message.empty());
  CHECK_THROWS_AS(compare_adtoc_to_sweep(5.1, SweepResult{}), DomainError);
}

TEST_CASE("point-mass adtoc agrees with the sweep at dt 0.05") {
  ExperimentConfig c;
  c.dt = 0.05;
  c.horizon = 25;
  c.mode = Mode::kDtocFixed;
  const SweepRun run = run_sweep(c);
  CHECK(run.agreement.agree);
  CHECK(run.sweep.minimal_feasible_nstar == 11);
}

TEST_CASE("lexicographic oracle examples") {
  // x = 1 first, then x = 2 and y = 3
  LinearLevel first{Matrix{{1.0, 0.0}}, Vector::Constant(1, -1.0)};
  LinearLevel second{Matrix::Identity(2, 2), Vector{{-2.0, -3.0}}};
  const LexicographicSolution s = lexicographic_oracle({first, second});
  CHECK((s.z - Vector{{1.0, 3.0}}).norm() < 1e-12);
  CHECK(s.residual_norms[0] < 1e-12);
  CHECK(s.residual_norms[1] == doctest::Approx(1.0));
  // rank-deficient level leaves the minimum-norm point
  LinearLevel flat{Matrix{{1.0, 1.0}}, Vector::Constant(1, -2.0)};
  CHECK((lexicographic_oracle({flat}).z - Vector{{1.0, 1.0}}).norm() < 1e-12);
}
