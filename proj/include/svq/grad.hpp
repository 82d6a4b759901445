/*
   Copyright 2026, The svq Authors.

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "svq/core.hpp"
#include "svq/dataset.hpp"

namespace svq {

/// Partial derivatives of the objective with respect to one stage's parameters.
struct StageGradient {
    Matrix g_w;      // M x dim_in
    Vector g_b;      // M
    Matrix g_recon;  // M x dim_in

    static StageGradient zeros_like(const StageModel& stage);
};

struct ChainGradient {
    std::vector<StageGradient> per_stage;
};

struct LocalGradient {
    StageGradient grad;
    /// Row i: derivative of (weighted stage objective + everything downstream) w.r.t. input vector i.
    Matrix input_sensitivity;
};

/**
 * Gradient of weight * (D1 + D2) of one stage over `data`.
 *
 * `upstream` carries, per data vector, the derivative of the objective of later
 * stages with respect to this stage's posterior output (N x M). It enters the
 * chain rule exactly where this stage's own dependence on Pr(y|x) does, so the
 * returned parameter gradient includes every later stage's contribution.
 */
LocalGradient stage_gradient_local(const StageModel& stage, const Dataset& data, double weight = 1.0,
                                   const std::optional<Matrix>& upstream = std::nullopt);

/// Gradient of the weighted chain objective; sensitivities flow from the last stage back to the first.
ChainGradient chain_gradient(const ChainModel& chain, const Dataset& data);

struct FdCheckEntry {
    std::size_t stage = 0;  // 1-based
    std::string kind;       // "w", "b" or "x"
    double max_rel_error = 0.0;
};

struct FdCheckReport {
    std::vector<FdCheckEntry> entries;
    double worst = 0.0;
    bool passed = false;
};

/// Relative error with an absolute floor on the denominator.
double relative_error(double analytic, double numeric, double abs_floor = 1e-8);

/**
 * Central differences of chain_objective against `analytic` for every scalar
 * parameter. Passes iff the worst relative error is below `tolerance`.
 */
FdCheckReport finite_difference_check(const ChainModel& chain, const Dataset& data,
                                      const ChainGradient& analytic, double step = 1e-5,
                                      double tolerance = 1e-4, double abs_floor = 1e-8);

/// Same, against chain_gradient(chain, data).
FdCheckReport finite_difference_check(const ChainModel& chain, const Dataset& data, double step = 1e-5,
                                      double tolerance = 1e-4);

/// Plain-text table: stage, kind, max relative error.
void print_fd_report(std::ostream& out, const FdCheckReport& report);

}  // namespace svq
