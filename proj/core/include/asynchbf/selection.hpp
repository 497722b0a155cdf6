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

#ifndef ASYNCHBF_SELECTION_HPP
#define ASYNCHBF_SELECTION_HPP

#include <cstdint>
#include <vector>

#include "asynchbf/beamforming.hpp"
#include "asynchbf/channel.hpp"
#include "asynchbf/power_allocation.hpp"
#include "asynchbf/types.hpp"

namespace asynchbf
{
    struct SelectionResult
    {
        std::vector<std::uint8_t> mask; // [L], 1 = node transmits
        BeamformerSolution solution;    // directions embedded back to length L
        double sum_rate = 0.0;          // score of the winning subset
        std::size_t evaluations = 0;    // subsets tried
        std::size_t infeasible = 0;     // subsets skipped as infeasible
    };

    // Exhaustive search over the 2^L - 1 nonempty node subsets: restrict the
    // channels and covariances to the subset, re-run the two-phase design,
    // score by the approximated weighted sum rate, keep the best. Ties break
    // toward the lowest mask in binary value. Subsets whose inner solve fails
    // are counted and skipped; if all fail, throws. L above exhaustive_limit
    // is rejected up front.
    SelectionResult select_and_beamform(const ChannelRealization &ch, const CovarianceBundle &cov,
                                        const VecR &caps, const VecR &weights,
                                        std::size_t exhaustive_limit = 12);

    // Baseline with one transmitting node carrying a single shared stream:
    // the node's power is capped by the tightest primary constraint, each
    // destination decodes the stream through its own channel. Returns the
    // best of the L single-node choices.
    SelectionResult best_single_ccrn(const ChannelRealization &ch, const CovarianceBundle &cov,
                                     const VecR &caps, const VecR &weights);
} // namespace asynchbf

#endif
