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

#ifndef ASYNCHBF_SIMULATION_HPP
#define ASYNCHBF_SIMULATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "asynchbf/beamforming.hpp"
#include "asynchbf/channel.hpp"
#include "asynchbf/config.hpp"
#include "asynchbf/geometry.hpp"
#include "asynchbf/power_allocation.hpp"
#include "asynchbf/types.hpp"

namespace asynchbf
{
    struct TrialMetrics
    {
        double sum_rate_actual = 0.0;
        double sum_rate_approx = 0.0;
        VecR p_asynch;                    // [J], evaluated with true channels
        std::vector<std::uint8_t> violated; // [J], p_asynch > gamma_th * (1 + 1e-8)
        bool outage = false;              // any violation zeroes the credited rate
        std::string method;
    };

    // Sum rate with the cross-beam asynchronous interference in the
    // denominator. For shared-single-node solutions there is no cross-beam
    // term and every destination decodes the one stream.
    double actual_sum_rate(const ChannelRealization &ch, const CovarianceBundle &cov,
                           const BeamformerSolution &sol, const VecR &weights);

    // Sum rate with the interference term dropped, the quantity Phase II
    // optimizes.
    double approx_sum_rate(const ChannelRealization &ch, const BeamformerSolution &sol,
                           const VecR &weights);

    // Total asynchronous interference power at primary j.
    double asynch_power(const CovarianceBundle &cov, const BeamformerSolution &sol, Index j);

    TrialMetrics evaluate_solution(const ChannelRealization &truth, const CovarianceBundle &truth_cov,
                                   const BeamformerSolution &sol, const VecR &gamma_th,
                                   const VecR &weights);

    // Time-domain validation oracle: per-beam independent unit-power QPSK
    // streams on rectangular pulses, each CCRN's copy circularly shifted by
    // its arrival offset rounded to the oversampling grid, superposed with
    // the true channels. Returns the time-averaged interference power at each
    // primary. Offset rounding biases the estimate unless the offsets are
    // close to multiples of symbol_duration / oversampling.
    VecR symbol_level_oracle(const ChannelRealization &ch, const BeamformerSolution &sol,
                             const DelayTable &delays, Index reference_sd, double symbol_duration,
                             std::size_t n_symbols, std::uint64_t seed,
                             std::size_t oversampling = 16);

    // Everything a method is allowed to see while designing: estimates and
    // statistics, never the true realization. Evaluation happens separately
    // against the truth, which keeps the CSI boundary auditable.
    struct TrialContext
    {
        const ChannelRealization *est = nullptr;
        const CovarianceBundle *est_cov = nullptr;
        const std::vector<std::vector<MatC>> *stat_R = nullptr; // statistical CSI only
        VecR gamma_th;
        VecR weights;
        VecR psi_c;
        VecR epsilon_viol;
        std::size_t selection_limit = 12;
        double regularization = -1.0;
    };

    // Runs one method's design phase. Throws on solver failure; the campaign
    // records such trials as failures instead of aborting.
    BeamformerSolution solve_method(Method method, const TrialContext &ctx);

    struct TrialRow
    {
        std::uint64_t trial_id = 0;
        Method method = Method::LbfOpa;
        bool failed = false;
        double sum_rate_actual = 0.0;
        double sum_rate_approx = 0.0;
        bool outage = false;
        VecR p_asynch; // [J]
        VecR alpha;    // [K]
        std::uint64_t seed = 0;
    };

    struct MethodSummary
    {
        Method method = Method::LbfOpa;
        std::size_t trials = 0;
        std::size_t failures = 0;
        double mean_credited_rate = 0.0;
        double ci95_credited_rate = 0.0; // normal-approximation half width
        double mean_sum_rate_approx = 0.0;
        VecR mean_p_asynch;   // [J], over non-failed trials
        VecR violation_prob;  // [J], over non-failed trials
        double max_kkt_residual = 0.0; // over solutions carrying a certificate
    };

    struct CampaignResult
    {
        std::vector<TrialRow> rows; // sorted by (trial, method order)
        std::vector<MethodSummary> summary;
        double symbol_power_db = 0.0;
        std::uint64_t master_seed = 0;
        std::size_t trials = 0;
    };

    // Monte Carlo campaign at one symbol power. Per-trial seeds derive from
    // the master seed and the trial index, so results do not depend on the
    // worker count; rows land in preassigned slots. Per-trial solver errors
    // are recorded as failed rows, never propagated.
    CampaignResult run_campaign(const ScenarioConfig &cfg, double symbol_power_db,
                                const std::vector<Method> &methods);
} // namespace asynchbf

#endif
