// asynchbf - cooperative leakage beamforming for underlay spectrum sharing
// Copyright (C) 2026 The asynchbf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef ASYNCHBF_POWER_ALLOCATION_HPP
#define ASYNCHBF_POWER_ALLOCATION_HPP

#include <stdexcept>
#include <vector>

#include "asynchbf/beamforming.hpp"
#include "asynchbf/channel.hpp"
#include "asynchbf/types.hpp"

namespace asynchbf
{
    // Power allocation across K fixed beam directions under J interference
    // caps. gain[k] is the per-unit-power SNR of beam k; leak(j, k) is the
    // power beam k deposits at primary j per unit of allocated power. There is
    // no transmit power budget; the caps are the only active resource, so a
    // beam invisible to every primary makes the problem unbounded.
    struct AllocationProblem
    {
        VecR gain;    // [K], >= 0
        MatR leak;    // [J x K], >= 0
        VecR caps;    // [J], finite, >= 0
        VecR weights; // [K], >= 0
    };

    // Returns one message per violated invariant; empty means valid.
    std::vector<std::string> validate(const AllocationProblem &prob);

    struct Allocation
    {
        VecR alpha;                   // [K], >= 0
        std::vector<Index> active_set; // constraints met with equality
        VecR lambdas;                 // [J] multipliers (zero off the active set)
    };

    struct InfeasibleAllocationError : std::runtime_error
    {
        double best_residual;
        InfeasibleAllocationError(double residual, const std::string &msg)
            : std::runtime_error(msg), best_residual(residual)
        {
        }
    };

    AllocationProblem make_allocation_problem(const ChannelRealization &ch,
                                              const CovarianceBundle &cov,
                                              const BeamDirections &dirs, const VecR &caps,
                                              const VecR &weights);

    // Optimal allocation: enumerates candidate active constraint sets in
    // size-then-lexicographic order and accepts the first whose cap-limited
    // water-filling solution is feasible with nonnegative multipliers. The
    // returned point carries a full first-order certificate; see
    // kkt_residual. Throws InfeasibleAllocationError (with the smallest
    // constraint violation seen) if no candidate set passes.
    Allocation opa_allocate(const AllocationProblem &prob);

    // Low-complexity allocation: water-fill each constraint separately, then
    // take the per-beam minimum. Each cap is nondecreasing in every power, so
    // the minimum is feasible for all constraints simultaneously.
    Allocation lcpa_allocate(const AllocationProblem &prob);

    // sum_k weights[k] * log2(1 + gain[k] * alpha[k]), in bits/s/Hz.
    double weighted_sum_rate(const AllocationProblem &prob, const VecR &alpha);

    // Dimensionless first-order optimality certificate: the maximum over
    // stationarity, complementary slackness, primal and dual feasibility
    // residuals, each normalized. Beams forced off by a zero cap are excluded
    // from the stationarity check (their multiplier is unbounded).
    double kkt_residual(const AllocationProblem &prob, const Allocation &alloc);
} // namespace asynchbf

#endif
