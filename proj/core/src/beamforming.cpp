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

#include "asynchbf/beamforming.hpp"

#include <cmath>

namespace asynchbf
{
    namespace
    {
        // Unit norm, then rotate so the first non-negligible entry is
        // real-positive. Keeps directions comparable across solvers and runs.
        void canonicalize(VecC &g)
        {
            double n = g.norm();
            g /= n;
            for (Index r = 0; r < g.size(); ++r)
            {
                double m = std::abs(g(r));
                if (m > 1e-12)
                {
                    g *= std::conj(g(r)) / m;
                    break;
                }
            }
        }
    } // namespace

    BeamDirections lbf_directions(const CovarianceBundle &cov, const ChannelRealization &ch,
                                  double regularization)
    {
        const Index L = ch.num_nodes();
        const Index K = ch.num_destinations();
        if (cov.R_agg.size() != static_cast<size_t>(K) ||
            cov.T_agg.size() != static_cast<size_t>(K))
            throw std::invalid_argument("covariance aggregates do not match the channel shape");

        BeamDirections dirs;
        dirs.method = DirectionMethod::Leakage;
        dirs.gbar.reserve(static_cast<size_t>(K));
        for (Index k = 0; k < K; ++k)
        {
            MatC a = cov.R_agg[static_cast<size_t>(k)] + cov.T_agg[static_cast<size_t>(k)];
            double reg = regularization;
            if (reg < 0.0)
                reg = 1e-12 * a.trace().real() / static_cast<double>(L);
            a += reg * MatC::Identity(L, L);

            Eigen::FullPivLU<MatC> lu(a);
            if (!lu.isInvertible())
                throw SingularLeakageError(k, "leakage matrix for destination " +
                                                  std::to_string(k) +
                                                  " is singular; enable regularization");
            VecC g = lu.solve(ch.h_s.row(k).adjoint());
            canonicalize(g);
            dirs.gbar.push_back(std::move(g));
        }
        return dirs;
    }

    BeamDirections zfbf_directions(const ChannelRealization &ch)
    {
        const Index L = ch.num_nodes();
        const Index K = ch.num_destinations();
        const Index J = ch.num_primaries();
        if (J >= L)
            throw NullspaceEmptyError("null-space beamforming needs more nodes than "
                                      "primary receivers");

        Eigen::JacobiSVD<MatC> svd(ch.h_p, Eigen::ComputeThinV);
        const VecR &sv = svd.singularValues();
        double tol = sv(0) * static_cast<double>(L) *
                     std::numeric_limits<double>::epsilon();
        Index rank = 0;
        for (Index i = 0; i < sv.size(); ++i)
            if (sv(i) > tol)
                ++rank;
        if (rank >= L)
            throw NullspaceEmptyError("primary channels span the whole array");

        MatC v = svd.matrixV().leftCols(rank);
        MatC projector = MatC::Identity(L, L) - v * v.adjoint();

        BeamDirections dirs;
        dirs.method = DirectionMethod::ZeroForcing;
        dirs.gbar.reserve(static_cast<size_t>(K));
        for (Index k = 0; k < K; ++k)
        {
            VecC g = projector * ch.h_s.row(k).adjoint();
            if (g.norm() <= 1e-12 * ch.h_s.row(k).norm())
                throw DegenerateProjectionError(k, "destination " + std::to_string(k) +
                                                       " lies in the primary span");
            g = projector * g; // second pass scrubs the first-order rounding residual
            canonicalize(g);
            dirs.gbar.push_back(std::move(g));
        }
        return dirs;
    }

    EffectiveThresholds robust_thresholds_erroneous(const VecR &gamma_th, const VecR &psi_c,
                                                    const VecR &alpha)
    {
        if (psi_c.size() != gamma_th.size())
            throw std::invalid_argument("psi_c must have one entry per primary");
        double root_sum = 0.0;
        for (Index k = 0; k < alpha.size(); ++k)
            root_sum += std::sqrt(std::max(0.0, alpha(k)));

        EffectiveThresholds out;
        out.regime = ThresholdRegime::RobustErroneous;
        out.gamma_eff.resize(gamma_th.size());
        for (Index j = 0; j < gamma_th.size(); ++j)
        {
            double shrink = psi_c(j) * root_sum;
            if (shrink == 0.0)
            {
                // skip the sqrt round trip so a zero margin is exactly neutral
                out.gamma_eff(j) = gamma_th(j);
                continue;
            }
            double margin = std::sqrt(gamma_th(j)) - shrink;
            out.gamma_eff(j) = margin > 0.0 ? margin * margin : 0.0;
        }
        return out;
    }

    EffectiveThresholds robust_thresholds_statistical(const VecR &gamma_th,
                                                      const VecR &epsilon_viol)
    {
        if (epsilon_viol.size() != gamma_th.size())
            throw std::invalid_argument("epsilon_viol must have one entry per primary");
        EffectiveThresholds out;
        out.regime = ThresholdRegime::RobustStatistical;
        out.gamma_eff = gamma_th.cwiseProduct(epsilon_viol);
        return out;
    }
} // namespace asynchbf
