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

#include "asynchbf/selection.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace asynchbf
{
    namespace
    {
        ChannelRealization restrict_channels(const ChannelRealization &ch,
                                             const std::vector<Index> &idx)
        {
            ChannelRealization out;
            out.h_s = ch.h_s(Eigen::all, idx);
            out.h_p = ch.h_p(Eigen::all, idx);
            out.noise_plus_pu_power = ch.noise_plus_pu_power;
            out.symbol_power = ch.symbol_power;
            return out;
        }

        CovarianceBundle restrict_covariances(const CovarianceBundle &cov,
                                              const std::vector<Index> &idx)
        {
            CovarianceBundle out;
            const size_t J = cov.R.size();
            const size_t K = cov.T.size();
            out.R.resize(J);
            for (size_t j = 0; j < J; ++j)
            {
                out.R[j].reserve(K);
                for (size_t k = 0; k < K; ++k)
                    out.R[j].push_back(cov.R[j][k](idx, idx));
            }
            out.T.resize(K);
            for (size_t i = 0; i < K; ++i)
            {
                out.T[i].reserve(K);
                for (size_t k = 0; k < K; ++k)
                    out.T[i].push_back(cov.T[i][k](idx, idx));
            }
            const Index n = static_cast<Index>(idx.size());
            out.R_agg.assign(K, MatC::Zero(n, n));
            out.T_agg.assign(K, MatC::Zero(n, n));
            for (size_t k = 0; k < K; ++k)
            {
                for (size_t j = 0; j < J; ++j)
                    out.R_agg[k] += out.R[j][k];
                for (size_t i = 0; i < K; ++i)
                    if (i != k)
                        out.T_agg[k] += out.T[i][k];
            }
            return out;
        }
    } // namespace

    SelectionResult select_and_beamform(const ChannelRealization &ch, const CovarianceBundle &cov,
                                        const VecR &caps, const VecR &weights,
                                        std::size_t exhaustive_limit)
    {
        const Index L = ch.num_nodes();
        const Index K = ch.num_destinations();
        if (static_cast<std::size_t>(L) > exhaustive_limit)
            throw std::invalid_argument("node count exceeds the exhaustive search limit");
        if (L < 1)
            throw std::invalid_argument("need at least one node");

        SelectionResult result;
        std::uint32_t best_mask = 0;
        double best_score = 0.0;
        std::vector<Index> best_idx;
        BeamDirections best_dirs;
        Allocation best_alloc;
        AllocationProblem best_prob;
        bool have_best = false;

        const std::uint32_t full = (1u << L) - 1u;
        for (std::uint32_t mask = 1; mask <= full; ++mask)
        {
            std::vector<Index> idx;
            for (Index r = 0; r < L; ++r)
                if (mask & (1u << r))
                    idx.push_back(r);

            ++result.evaluations;
            try
            {
                ChannelRealization rch = restrict_channels(ch, idx);
                CovarianceBundle rcov = restrict_covariances(cov, idx);
                BeamDirections dirs = lbf_directions(rcov, rch);
                AllocationProblem prob = make_allocation_problem(rch, rcov, dirs, caps, weights);
                Allocation alloc = opa_allocate(prob);
                double score = weighted_sum_rate(prob, alloc.alpha);
                if (!have_best || score > best_score)
                {
                    have_best = true;
                    best_mask = mask;
                    best_score = score;
                    best_idx = idx;
                    best_dirs = dirs;
                    best_alloc = alloc;
                    best_prob = prob;
                }
            }
            catch (const std::exception &)
            {
                ++result.infeasible;
            }
        }
        if (!have_best)
            throw std::runtime_error("every node subset failed the two-phase design");

        result.mask.assign(static_cast<size_t>(L), 0);
        for (Index r = 0; r < L; ++r)
            if (best_mask & (1u << r))
                result.mask[static_cast<size_t>(r)] = 1;

        result.solution.directions.method = best_dirs.method;
        result.solution.directions.gbar.resize(static_cast<size_t>(K));
        for (Index k = 0; k < K; ++k)
        {
            VecC g = VecC::Zero(L);
            for (size_t t = 0; t < best_idx.size(); ++t)
                g(best_idx[t]) = best_dirs.gbar[static_cast<size_t>(k)](static_cast<Index>(t));
            result.solution.directions.gbar[static_cast<size_t>(k)] = g;
        }
        result.solution.alpha = best_alloc.alpha;
        result.solution.kind = SolutionKind::PerBeam;
        result.solution.algorithm = "selection";
        result.solution.active_set = best_alloc.active_set;
        result.solution.kkt_residual = kkt_residual(best_prob, best_alloc);
        result.sum_rate = best_score;
        return result;
    }

    SelectionResult best_single_ccrn(const ChannelRealization &ch, const CovarianceBundle &cov,
                                     const VecR &caps, const VecR &weights)
    {
        const Index L = ch.num_nodes();
        const Index K = ch.num_destinations();
        const Index J = ch.num_primaries();
        if (caps.size() != J)
            throw std::invalid_argument("need one cap per primary");
        if (weights.size() != K)
            throw std::invalid_argument("need one weight per destination");

        SelectionResult result;
        Index best_node = -1;
        double best_rate = 0.0;
        double best_power = 0.0;
        Index best_binding = 0;

        for (Index r = 0; r < L; ++r)
        {
            double p = std::numeric_limits<double>::infinity();
            Index binding = -1;
            for (Index j = 0; j < J; ++j)
            {
                double gpj = std::norm(ch.h_p(j, r));
                if (gpj == 0.0)
                    continue;
                double cap_power = caps(j) / gpj;
                if (cap_power < p)
                {
                    p = cap_power;
                    binding = j;
                }
            }
            if (binding < 0)
            {
                // the node is invisible to every primary, its power is unbounded
                ++result.infeasible;
                continue;
            }
            ++result.evaluations;
            double rate = 0.0;
            for (Index k = 0; k < K; ++k)
                rate += weights(k) *
                        std::log1p(ch.symbol_power * p * std::norm(ch.h_s(k, r)) /
                                   ch.noise_plus_pu_power(k)) /
                        std::numbers::ln2;
            if (best_node < 0 || rate > best_rate)
            {
                best_node = r;
                best_rate = rate;
                best_power = p;
                best_binding = binding;
            }
        }
        if (best_node < 0)
            throw std::invalid_argument("no node is visible to any primary");

        (void)cov;
        result.mask.assign(static_cast<size_t>(L), 0);
        result.mask[static_cast<size_t>(best_node)] = 1;
        result.solution.directions.gbar.assign(static_cast<size_t>(K), VecC::Zero(L));
        for (Index k = 0; k < K; ++k)
            result.solution.directions.gbar[static_cast<size_t>(k)](best_node) = cxd(1.0, 0.0);
        result.solution.alpha = VecR::Zero(K);
        result.solution.alpha(0) = best_power;
        result.solution.kind = SolutionKind::SharedSingleNode;
        result.solution.algorithm = "single-ccrn";
        result.solution.active_set = {best_binding};
        result.sum_rate = best_rate;
        return result;
    }
} // namespace asynchbf
