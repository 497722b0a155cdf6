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

#ifndef ASYNCHBF_BEAMFORMING_HPP
#define ASYNCHBF_BEAMFORMING_HPP

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "asynchbf/channel.hpp"
#include "asynchbf/types.hpp"

namespace asynchbf
{
    enum class DirectionMethod
    {
        Leakage,    // signal-to-leakage quotient maximizer
        ZeroForcing // null-space projection onto the primary channels' kernel
    };

    // K unit-norm beam directions; global phase fixed so the first entry with
    // magnitude above 1e-12 is real-positive, making directions comparable.
    struct BeamDirections
    {
        std::vector<VecC> gbar;
        DirectionMethod method = DirectionMethod::Leakage;
    };

    enum class ThresholdRegime
    {
        Perfect,
        RobustErroneous,
        RobustStatistical
    };

    struct EffectiveThresholds
    {
        VecR gamma_eff;
        ThresholdRegime regime = ThresholdRegime::Perfect;
    };

    // How a solution's per-beam powers are meant to be read by the evaluators.
    enum class SolutionKind
    {
        PerBeam,         // beam k transmits stream k at power alpha[k]
        SharedSingleNode // one node carries a single shared stream at alpha[0]
    };

    // A complete design: directions plus per-beam powers, with provenance.
    struct BeamformerSolution
    {
        BeamDirections directions;
        VecR alpha;
        SolutionKind kind = SolutionKind::PerBeam;
        std::string algorithm;
        std::vector<Index> active_set;
        double kkt_residual = std::numeric_limits<double>::quiet_NaN();
    };

    struct SingularLeakageError : std::runtime_error
    {
        Index destination;
        SingularLeakageError(Index k, const std::string &msg)
            : std::runtime_error(msg), destination(k)
        {
        }
    };

    struct NullspaceEmptyError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct DegenerateProjectionError : std::runtime_error
    {
        Index destination;
        DegenerateProjectionError(Index k, const std::string &msg)
            : std::runtime_error(msg), destination(k)
        {
        }
    };

    // Direction of beam k solves the signal-to-leakage quotient with the
    // aggregate leakage matrix R_agg[k] + T_agg[k] in the denominator; the
    // rank-one numerator admits the closed form (R + T + reg I)^-1 h^H.
    // regularization < 0 selects the default 1e-12 * trace / L; exactly 0
    // disables it, in which case a singular denominator throws
    // SingularLeakageError naming the destination.
    BeamDirections lbf_directions(const CovarianceBundle &cov, const ChannelRealization &ch,
                                  double regularization = -1.0);

    // Projects each desired channel onto the null space of the stacked primary
    // channel matrix. Requires more nodes than primaries; a numerically zero
    // projection throws DegenerateProjectionError.
    BeamDirections zfbf_directions(const ChannelRealization &ch);

    // Cap transform for bounded channel-estimation error. The margin depends
    // on the powers being allocated, so callers iterate this against the
    // allocator to a fixed point: gamma_eff = (max(0, sqrt(gamma) -
    // psi_c * sum_k sqrt(alpha_k)))^2.
    EffectiveThresholds robust_thresholds_erroneous(const VecR &gamma_th, const VecR &psi_c,
                                                    const VecR &alpha);

    // Cap transform for statistical CSI: tolerating violation probability
    // eps turns the instantaneous cap into a cap of eps * gamma on the mean.
    // Pair with the statistical covariances.
    EffectiveThresholds robust_thresholds_statistical(const VecR &gamma_th,
                                                      const VecR &epsilon_viol);
} // namespace asynchbf

#endif
