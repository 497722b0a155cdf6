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

#ifndef ASYNCHBF_CHANNEL_HPP
#define ASYNCHBF_CHANNEL_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "asynchbf/geometry.hpp"
#include "asynchbf/types.hpp"

namespace asynchbf
{
    // Log-distance path loss normalized to reference_gain at reference_distance.
    struct FadingSpec
    {
        double path_loss_exponent = 4.0;
        double reference_distance = 1.0; // meters
        double reference_gain = 1.0;     // linear power gain at reference_distance
    };

    // One fading draw. h_s rows are destinations, h_p rows are primaries,
    // columns are CCRNs. noise_plus_pu_power holds the per-destination AWGN
    // plus primary-interference power; symbol_power scales the useful signal
    // SNR only (the interference caps act on the allocated powers directly,
    // which is what makes the model interference-limited).
    struct ChannelRealization
    {
        MatC h_s;
        MatC h_p;
        VecR noise_plus_pu_power;
        double symbol_power = 1.0;

        Index num_destinations() const { return h_s.rows(); }
        Index num_primaries() const { return h_p.rows(); }
        Index num_nodes() const { return h_s.cols(); }
    };

    struct CsiPerfect
    {
    };

    // Bounded estimation error on the primary channels: the true h differs
    // from the estimate by e with ||e||^2 <= epsilon_bound per primary.
    struct CsiErroneous
    {
        double epsilon_bound = 0.0;
        VecR psi_c; // per-primary robustness margin applied by the cap transform
    };

    // Only mean fading power gains of the primary channels are known.
    struct CsiStatistical
    {
        MatR omega;       // [J x L] mean power gains
        VecR epsilon_viol; // per-primary tolerated violation probability, in (0, 1]
    };

    using CsiModel = std::variant<CsiPerfect, CsiErroneous, CsiStatistical>;

    enum class ErrorPlacement
    {
        Interior, // uniform inside the error ball
        Boundary  // uniform on the sphere where the bound is tight
    };

    // Second-order statistics of the asynchronous interference. R[j][k] is the
    // L x L matrix whose quadratic form with beam k's weights gives the power
    // leaked to primary j; T[i][k] gives the cross-beam power beam k deposits
    // at destination i. Aggregates feed the direction solver: R_agg[k] sums
    // R[j][k] over primaries, T_agg[k] sums T[i][k] over destinations i != k.
    struct CovarianceBundle
    {
        std::vector<std::vector<MatC>> R;
        std::vector<std::vector<MatC>> T;
        std::vector<MatC> R_agg;
        std::vector<MatC> T_agg;
    };

    // Rayleigh fading with path loss: gain = sqrt(d^-eta * G_ref) * g, g unit
    // circularly-symmetric complex Gaussian. Deterministic given the seed.
    ChannelRealization draw_channels(const Topology &topo, const FadingSpec &fading,
                                     double symbol_power, const VecR &noise_plus_pu_power,
                                     std::uint64_t seed);

    CovarianceBundle build_covariances(const ChannelRealization &ch, const CorrelationSet &corr);

    // Returns the estimated realization: h_p minus a random error vector per
    // primary, drawn in (or on) the ball of squared radius epsilon_bound.
    // h_s is copied unchanged; estimation errors apply to primaries only.
    ChannelRealization perturb_channels(const ChannelRealization &ch, const CsiErroneous &model,
                                        std::uint64_t seed,
                                        ErrorPlacement placement = ErrorPlacement::Interior);

    // Expected leakage covariances under statistical CSI: cross terms average
    // out, leaving diag(beta(r,r) * omega(j,r)) per primary and beam.
    std::vector<std::vector<MatC>> build_statistical_covariances(const CsiStatistical &model,
                                                                 const CorrelationSet &corr);

    // Mean power gains implied by the path-loss model, used when a scenario
    // does not pin omega explicitly.
    MatR path_loss_omega(const Topology &topo, const FadingSpec &fading);
} // namespace asynchbf

#endif
