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

#ifndef ASYNCHBF_GEOMETRY_HPP
#define ASYNCHBF_GEOMETRY_HPP

#include <string>
#include <vector>

#include "asynchbf/types.hpp"

namespace asynchbf
{
    // Planar node placement. CCRNs are the transmitting nodes forming the
    // virtual array; secondary destinations (SD) receive the broadcast;
    // primary receivers (PR) are protected by interference caps.
    struct Topology
    {
        std::vector<Eigen::Vector2d> ccrn_positions;
        std::vector<Eigen::Vector2d> sd_positions;
        std::vector<Eigen::Vector2d> pr_positions;
        double propagation_speed = 3.0e8; // meters/second

        Index num_nodes() const { return static_cast<Index>(ccrn_positions.size()); }
        Index num_destinations() const { return static_cast<Index>(sd_positions.size()); }
        Index num_primaries() const { return static_cast<Index>(pr_positions.size()); }
    };

    // Returns one message per violated invariant; empty means valid.
    // Coincident CCRN/receiver pairs are rejected because the path-loss model
    // needs a strictly positive distance.
    std::vector<std::string> validate(const Topology &topo);

    // Propagation delays in seconds. Rows are receivers, primaries first then
    // destinations; columns are CCRNs.
    struct DelayTable
    {
        MatR tau;
        Index primaries = 0;
        Index destinations = 0;

        double at_primary(Index j, Index r) const { return tau(j, r); }
        double at_destination(Index k, Index r) const { return tau(primaries + k, r); }
    };

    DelayTable compute_delays(const Topology &topo);

    // Pairwise symbol-correlation coefficients produced by the rectangular
    // pulse overlap model. beta_p[j][k] is the L x L matrix at primary j for
    // beam k; beta_s[i][k] likewise at destination i (entry [k][k] unused by
    // the solvers). Under the single timing-advance model all beams of one
    // receiver share the same offsets, so the per-beam slices coincide; the
    // per-beam shape is kept because explicit tensors may be loaded from a
    // scenario file.
    struct CorrelationSet
    {
        std::vector<std::vector<MatR>> beta_p;
        std::vector<std::vector<MatR>> beta_s;
        double symbol_duration = 0.0;
    };

    // Every CCRN advances its transmission so that arrivals align at the
    // reference destination; residual offsets at the other receivers follow
    // from geometry. beta = max(0, 1 - |offset difference| / symbol_duration).
    CorrelationSet compute_correlations(const DelayTable &delays, Index reference_sd,
                                        double symbol_duration);
} // namespace asynchbf

#endif
