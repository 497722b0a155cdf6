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

#include "asynchbf/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace asynchbf
{
    namespace
    {
        bool finite_positions(const std::vector<Eigen::Vector2d> &positions)
        {
            for (const auto &p : positions)
                if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
                    return false;
            return true;
        }

        void check_coincidence(const Topology &topo,
                               const std::vector<Eigen::Vector2d> &receivers,
                               const char *label, std::vector<std::string> &out)
        {
            for (size_t v = 0; v < receivers.size(); ++v)
                for (size_t r = 0; r < topo.ccrn_positions.size(); ++r)
                    if ((receivers[v] - topo.ccrn_positions[r]).norm() == 0.0)
                        out.push_back(std::string(label) + " " + std::to_string(v) +
                                      " coincides with ccrn " + std::to_string(r));
        }
    } // namespace

    std::vector<std::string> validate(const Topology &topo)
    {
        std::vector<std::string> out;
        if (topo.ccrn_positions.empty())
            out.push_back("at least one ccrn is required");
        if (topo.sd_positions.empty())
            out.push_back("at least one destination is required");
        if (topo.pr_positions.empty())
            out.push_back("at least one primary receiver is required");
        if (!finite_positions(topo.ccrn_positions) || !finite_positions(topo.sd_positions) ||
            !finite_positions(topo.pr_positions))
            out.push_back("positions must be finite");
        if (!(topo.propagation_speed > 0.0) || !std::isfinite(topo.propagation_speed))
            out.push_back("propagation_speed must be positive and finite");
        check_coincidence(topo, topo.pr_positions, "primary", out);
        check_coincidence(topo, topo.sd_positions, "destination", out);
        return out;
    }

    DelayTable compute_delays(const Topology &topo)
    {
        std::vector<std::string> violations = validate(topo);
        if (!violations.empty())
            throw std::invalid_argument("invalid topology: " + violations.front());

        const Index L = topo.num_nodes();
        const Index J = topo.num_primaries();
        const Index K = topo.num_destinations();

        DelayTable d;
        d.primaries = J;
        d.destinations = K;
        d.tau.resize(J + K, L);
        for (Index j = 0; j < J; ++j)
            for (Index r = 0; r < L; ++r)
                d.tau(j, r) = (topo.pr_positions[static_cast<size_t>(j)] -
                               topo.ccrn_positions[static_cast<size_t>(r)])
                                  .norm() /
                              topo.propagation_speed;
        for (Index k = 0; k < K; ++k)
            for (Index r = 0; r < L; ++r)
                d.tau(J + k, r) = (topo.sd_positions[static_cast<size_t>(k)] -
                                   topo.ccrn_positions[static_cast<size_t>(r)])
                                      .norm() /
                                  topo.propagation_speed;
        return d;
    }

    CorrelationSet compute_correlations(const DelayTable &delays, Index reference_sd,
                                        double symbol_duration)
    {
        if (!(symbol_duration > 0.0) || !std::isfinite(symbol_duration))
            throw std::invalid_argument("symbol_duration must be positive and finite");
        if (reference_sd < 0 || reference_sd >= delays.destinations)
            throw std::invalid_argument("reference_sd out of range");

        const Index L = delays.tau.cols();
        const Index J = delays.primaries;
        const Index K = delays.destinations;

        // offsets after the timing advance that aligns arrivals at the
        // reference destination
        MatR off = delays.tau;
        for (Index v = 0; v < off.rows(); ++v)
            off.row(v) -= delays.tau.row(J + reference_sd);

        auto bartlett = [&](Index v) {
            MatR b(L, L);
            for (Index r = 0; r < L; ++r)
                for (Index f = 0; f < L; ++f)
                {
                    double dt = std::abs(off(v, r) - off(v, f));
                    b(r, f) = std::max(0.0, 1.0 - dt / symbol_duration);
                }
            return b;
        };

        CorrelationSet corr;
        corr.symbol_duration = symbol_duration;
        corr.beta_p.resize(static_cast<size_t>(J));
        for (Index j = 0; j < J; ++j)
        {
            MatR b = bartlett(j);
            corr.beta_p[static_cast<size_t>(j)].assign(static_cast<size_t>(K), b);
        }
        corr.beta_s.resize(static_cast<size_t>(K));
        for (Index i = 0; i < K; ++i)
        {
            MatR b = bartlett(J + i);
            corr.beta_s[static_cast<size_t>(i)].assign(static_cast<size_t>(K), b);
        }
        return corr;
    }
} // namespace asynchbf
