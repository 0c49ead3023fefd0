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


#include "hltoc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <Eigen/SVD>

#include "hltoc/errors.hpp"

namespace hltoc {

const SweepEntry* SweepResult::find(int n_star) const {
  for (const SweepEntry& e : entries) {
    if (e.n_star == n_star) return &e;
  }
  return nullptr;
}

double fixed_terminal_error(const TimeOptimalProblem& problem, const Vector& z) {
  if (problem.formulation() == Formulation::kAdtoc) {
    throw StructuralError("fixed_terminal_error needs a fixed-switch problem");
  }
  const int first = problem.n_star_fixed() + 1;
  const int last =
      problem.formulation() == Formulation::kDtocPadded ? problem.horizon() - 1 : first;
  double err = 0.0;
  for (int g = first; g <= last; ++g) err = std::max(err, problem.terminal_residual(z, g).norm());
  return err;
}

SweepResult sweep_nstar(std::shared_ptr<const DynamicsModel> model,
                        std::shared_ptr<const TaskFunction> task, int horizon, int first,
                        int last, bool padded, double feasibility_tol,
                        const SolverConfig& solver, double regularization) {
  if (first > last) throw DomainError("sweep range is empty");
  if (first < 0 || last > horizon - 2) {
    throw DomainError("sweep range must lie in [0, N-2]");
  }
  if (!(feasibility_tol > 0.0)) throw DomainError("feasibility_tol must be positive");
  SweepResult result;
  result.padded = padded;
  result.feasibility_tol = feasibility_tol;
  for (int n = first; n <= last; ++n) {
    const TimeOptimalProblem p =
        build_dtoc_fixed(model, task, horizon, n, padded, regularization);
    const auto [z, report] = solve(p.hierarchy(), p.initial_guess(), solver);
    SweepEntry e;
    e.n_star = n;
    e.terminal_error = fixed_terminal_error(p, z);
    e.status = report.status;
    e.iterations = report.iterations;
    result.entries.push_back(e);
    if (result.minimal_feasible_nstar < 0 && e.terminal_error <= feasibility_tol) {
      result.minimal_feasible_nstar = n;
    }
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "n_star,terminal_error,status,iterations\n";
  char buf[64];
  for (const SweepEntry& e : sweep.entries) {
    std::snprintf(buf, sizeof buf, "%.17g", e.terminal_error);
    out << e.n_star << ',' << buf << ',' << to_string(e.status) << ',' << e.iterations << '\n';
  }
}

double max_error_increase(const SweepResult& sweep) {
  double worst = 0.0;
  for (size_t i = 1; i < sweep.entries.size(); ++i) {
    worst = std::max(worst, sweep.entries[i].terminal_error - sweep.entries[i - 1].terminal_error);
  }
  return worst;
}

SweepAgreement compare_adtoc_to_sweep(double adtoc_nstar, const SweepResult& sweep) {
  if (sweep.entries.empty()) throw DomainError("empty sweep");
  SweepAgreement a;
  a.adtoc_floor = static_cast<int>(std::floor(adtoc_nstar));
  a.minimal_feasible_nstar = sweep.minimal_feasible_nstar;
  if (!sweep.has_feasible()) {
    a.message = "no feasible n_star in the sweep";
    return a;
  }
  const int m = sweep.minimal_feasible_nstar;
  a.agree = a.adtoc_floor == m || a.adtoc_floor == m - 1;
  a.message = "floor(adtoc n*) = " + std::to_string(a.adtoc_floor) +
              ", minimal feasible n* = " + std::to_string(m) + (a.agree ? ": agree" : ": disagree");
  return a;
}

LexicographicSolution lexicographic_oracle(const std::vector<LinearLevel>& levels,
                                           double rank_tol) {
  if (levels.empty()) throw StructuralError("oracle needs at least one level");
  const Eigen::Index n = levels.front().a.cols();
  Vector z = Vector::Zero(n);
  Matrix basis = Matrix::Identity(n, n);  // z = z_prev + basis * y
  LexicographicSolution out;
  out.residual_norms.resize(static_cast<Eigen::Index>(levels.size()));
  for (size_t l = 0; l < levels.size(); ++l) {
    const LinearLevel& lv = levels[l];
    if (lv.a.cols() != n || lv.a.rows() != lv.b.size()) {
      throw StructuralError("oracle level dimensions disagree");
    }
    if (basis.cols() > 0 && lv.a.rows() > 0) {
      const Matrix m = lv.a * basis;
      Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Vector& s = svd.singularValues();
      const double cut = rank_tol * (s.size() > 0 ? std::max(s(0), 1.0) : 1.0);
      Eigen::Index rank = 0;
      while (rank < s.size() && s(rank) > cut) ++rank;
      const Vector rhs = -(lv.a * z + lv.b);
      Vector y = Vector::Zero(basis.cols());
      for (Eigen::Index j = 0; j < rank; ++j) {
        y += svd.matrixV().col(j) * (svd.matrixU().col(j).dot(rhs) / s(j));
      }
      z += basis * y;
      basis = basis * svd.matrixV().rightCols(basis.cols() - rank);
    }
    out.residual_norms(static_cast<Eigen::Index>(l)) = (lv.a * z + lv.b).norm();
  }
  out.z = z;
  return out;
}

}  // namespace hltoc
