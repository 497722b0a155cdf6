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

#include "asynchbf/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "asynchbf/rng.hpp"

namespace asynchbf
{
    namespace
    {
        double path_gain(const Eigen::Vector2d &a, const Eigen::Vector2d &b,
                         const FadingSpec &fading)
        {
            double d = (a - b).norm();
            return fading.reference_gain *
                   std::pow(d / fading.reference_distance, -fading.path_loss_exponent);
        }

        MatC hadamard(const MatR &b, const MatC &m)
        {
            return (b.cast<cxd>().array() * m.array()).matrix();
        }
    } // namespace

    ChannelRealization draw_channels(const Topology &topo, const FadingSpec &fading,
                                     double symbol_power, const VecR &noise_plus_pu_power,
                                     std::uint64_t seed)
    {
        std::vector<std::string> violations = validate(topo);
        if (!violations.empty())
            throw std::invalid_argument("invalid topology: " + violations.front());
        if (!(fading.path_loss_exponent > 0.0) || !(fading.reference_distance > 0.0) ||
            !(fading.reference_gain > 0.0))
            throw std::invalid_argument("fading parameters must be positive");
        if (!(symbol_power > 0.0) || !std::isfinite(symbol_power))
            throw std::invalid_argument("symbol_power must be positive and finite");
        if (noise_plus_pu_power.size() != topo.num_destinations() ||
            (noise_plus_pu_power.array() <= 0.0).any())
            throw std::invalid_argument("need one positive noise power per destination");

        const Index L = topo.num_nodes();
        const Index K = topo.num_destinations();
        const Index J = topo.num_primaries();

        Rng rng(seed);
        ChannelRealization ch;
        ch.symbol_power = symbol_power;
        ch.noise_plus_pu_power = noise_plus_pu_power;
        ch.h_s.resize(K, L);
        for (Index k = 0; k < K; ++k)
            for (Index r = 0; r < L; ++r)
                ch.h_s(k, r) = std::sqrt(path_gain(topo.sd_positions[static_cast<size_t>(k)],
                                                   topo.ccrn_positions[static_cast<size_t>(r)],
                                                   fading)) *
                               rng.cgaussian();
        ch.h_p.resize(J, L);
        for (Index j = 0; j < J; ++j)
            for (Index r = 0; r < L; ++r)
                ch.h_p(j, r) = std::sqrt(path_gain(topo.pr_positions[static_cast<size_t>(j)],
                                                   topo.ccrn_positions[static_cast<size_t>(r)],
                                                   fading)) *
                               rng.cgaussian();
        return ch;
    }

    CovarianceBundle build_covariances(const ChannelRealization &ch, const CorrelationSet &corr)
    {
        const Index L = ch.num_nodes();
        const Index K = ch.num_destinations();
        const Index J = ch.num_primaries();
        if (corr.beta_p.size() != static_cast<size_t>(J) ||
            corr.beta_s.size() != static_cast<size_t>(K))
            throw std::invalid_argument("correlation set does not match the channel shape");

        CovarianceBundle cov;
        cov.R.resize(static_cast<size_t>(J));
        for (Index j = 0; j < J; ++j)
        {
            const auto &slices = corr.beta_p[static_cast<size_t>(j)];
            if (slices.size() != static_cast<size_t>(K))
                throw std::invalid_argument("correlation set does not match the channel shape");
            MatC outer = ch.h_p.row(j).adjoint() * ch.h_p.row(j);
            cov.R[static_cast<size_t>(j)].reserve(static_cast<size_t>(K));
            for (Index k = 0; k < K; ++k)
            {
                const MatR &b = slices[static_cast<size_t>(k)];
                if (b.rows() != L || b.cols() != L)
                    throw std::invalid_argument("correlation slice has the wrong size");
                cov.R[static_cast<size_t>(j)].push_back(hadamard(b, outer));
            }
        }
        cov.T.resize(static_cast<size_t>(K));
        for (Index i = 0; i < K; ++i)
        {
            const auto &slices = corr.beta_s[static_cast<size_t>(i)];
            if (slices.size() != static_cast<size_t>(K))
                throw std::invalid_argument("correlation set does not match the channel shape");
            MatC outer = ch.h_s.row(i).adjoint() * ch.h_s.row(i);
            cov.T[static_cast<size_t>(i)].reserve(static_cast<size_t>(K));
            for (Index k = 0; k < K; ++k)
            {
                const MatR &b = slices[static_cast<size_t>(k)];
                if (b.rows() != L || b.cols() != L)
                    throw std::invalid_argument("correlation slice has the wrong size");
                cov.T[static_cast<size_t>(i)].push_back(hadamard(b, outer));
            }
        }

        cov.R_agg.assign(static_cast<size_t>(K), MatC::Zero(L, L));
        cov.T_agg.assign(static_cast<size_t>(K), MatC::Zero(L, L));
        for (Index k = 0; k < K; ++k)
        {
            for (Index j = 0; j < J; ++j)
                cov.R_agg[static_cast<size_t>(k)] += cov.R[static_cast<size_t>(j)][static_cast<size_t>(k)];
            for (Index i = 0; i < K; ++i)
                if (i != k)
                    cov.T_agg[static_cast<size_t>(k)] +=
                        cov.T[static_cast<size_t>(i)][static_cast<size_t>(k)];
        }
        return cov;
    }

    ChannelRealization perturb_channels(const ChannelRealization &ch, const CsiErroneous &model,
                                        std::uint64_t seed, ErrorPlacement placement)
    {
        if (model.epsilon_bound < 0.0 || !std::isfinite(model.epsilon_bound))
            throw std::invalid_argument("epsilon_bound must be nonnegative and finite");

        const Index L = ch.num_nodes();
        const Index J = ch.num_primaries();
        Rng rng(seed);
        ChannelRealization est = ch;
        for (Index j = 0; j < J; ++j)
        {
            VecC dir(L);
            for (Index r = 0; r < L; ++r)
                dir(r) = rng.cgaussian();
            double n = dir.norm();
            if (n == 0.0)
                continue;
            dir /= n;
            double radius = std::sqrt(model.epsilon_bound);
            if (placement == ErrorPlacement::Interior)
                radius *= std::pow(rng.uniform(), 1.0 / (2.0 * static_cast<double>(L)));
            est.h_p.row(j) -= (radius * dir).transpose();
        }
        return est;
    }

    std::vector<std::vector<MatC>> build_statistical_covariances(const CsiStatistical &model,
                                                                 const CorrelationSet &corr)
    {
        const Index J = model.omega.rows();
        const Index L = model.omega.cols();
        if (corr.beta_p.size() != static_cast<size_t>(J))
            throw std::invalid_argument("omega does not match the correlation set");
        if ((model.omega.array() < 0.0).any())
            throw std::invalid_argument("omega must be nonnegative");

        std::vector<std::vector<MatC>> out(static_cast<size_t>(J));
        for (Index j = 0; j < J; ++j)
        {
            const auto &slices = corr.beta_p[static_cast<size_t>(j)];
            out[static_cast<size_t>(j)].reserve(slices.size());
            for (const MatR &b : slices)
            {
                if (b.rows() != L || b.cols() != L)
                    throw std::invalid_argument("omega does not match the correlation set");
                VecC diag(L);
                for (Index r = 0; r < L; ++r)
                    diag(r) = cxd(b(r, r) * model.omega(j, r), 0.0);
                out[static_cast<size_t>(j)].push_back(diag.asDiagonal());
            }
        }
        return out;
    }

    MatR path_loss_omega(const Topology &topo, const FadingSpec &fading)
    {
        const Index J = topo.num_primaries();
        const Index L = topo.num_nodes();
        MatR omega(J, L);
        for (Index j = 0; j < J; ++j)
            for (Index r = 0; r < L; ++r)
                omega(j, r) = path_gain(topo.pr_positions[static_cast<size_t>(j)],
                                        topo.ccrn_positions[static_cast<size_t>(r)], fading);
        return omega;
    }
} // namespace asynchbf
