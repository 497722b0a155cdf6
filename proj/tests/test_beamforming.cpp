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

#include <cmath>

#include "doctest.h"

#include "asynchbf/beamforming.hpp"
#include "asynchbf/channel.hpp"
#include "asynchbf/geometry.hpp"
#include "asynchbf/rng.hpp"
#include "oracles.hpp"

using namespace asynchbf;
using asynchbf::testing::quotient;
using asynchbf::testing::random_topology;
using asynchbf::testing::random_unit_vector;

namespace
{
    struct Instance
    {
        Topology topo;
        CorrelationSet corr;
        ChannelRealization ch;
        CovarianceBundle cov;
    };

    Instance random_instance(std::uint64_t seed, Index L = 4, Index K = 3, Index J = 2)
    {
        Rng rng(seed);
        Instance inst;
        inst.topo = random_topology(rng, L, K, J);
        DelayTable d = compute_delays(inst.topo);
        inst.corr = compute_correlations(d, 0, 5.0e-7);
        inst.ch = draw_channels(inst.topo, FadingSpec{}, 100.0,
                                VecR::Constant(K, 1.0e-16), derive_seed(seed, 1));
        inst.cov = build_covariances(inst.ch, inst.corr);
        return inst;
    }

    void check_canonical(const VecC &g)
    {
        CHECK(g.norm() == doctest::Approx(1.0).epsilon(1e-12));
        for (Index r = 0; r < g.size(); ++r)
        {
            if (std::abs(g(r)) > 1e-12)
            {
                CHECK(g(r).real() > 0.0);
                CHECK(std::abs(g(r).imag()) <= 1e-12 * std::abs(g(r)));
                break;
            }
        }
    }
} // namespace

TEST_SUITE("beamforming")
{
    TEST_CASE("leakage directions are unit norm with a canonical phase")
    {
        for (std::uint64_t seed : {3u, 7u, 11u})
        {
            Instance inst = random_instance(seed);
            BeamDirections dirs = lbf_directions(inst.cov, inst.ch);
            CHECK(dirs.method == DirectionMethod::Leakage);
            REQUIRE(dirs.gbar.size() == 3);
            for (const VecC &g : dirs.gbar)
                check_canonical(g);
        }
    }

    TEST_CASE("identity leakage reduces to the matched filter")
    {
        Instance inst = random_instance(19, 4, 2, 2);
        CovarianceBundle cov;
        cov.R_agg = {MatC::Identity(4, 4), MatC::Identity(4, 4)};
        cov.T_agg = {MatC::Zero(4, 4), MatC::Zero(4, 4)};
        BeamDirections dirs = lbf_directions(cov, inst.ch);
        for (Index k = 0; k < 2; ++k)
        {
            VecC mf = inst.ch.h_s.row(k).adjoint();
            mf /= mf.norm();
            cxd lead = mf(0) / std::abs(mf(0));
            mf /= lead;
            CHECK((dirs.gbar[k] - mf).norm() <= 1e-12);
        }
    }

    TEST_CASE("directions are invariant to a global covariance scale")
    {
        Instance inst = random_instance(23);
        BeamDirections base = lbf_directions(inst.cov, inst.ch);
        CovarianceBundle scaled = inst.cov;
        for (MatC &m : scaled.R_agg)
            m *= 1.0e6;
        for (MatC &m : scaled.T_agg)
            m *= 1.0e6;
        BeamDirections up = lbf_directions(scaled, inst.ch);
        for (Index k = 0; k < 3; ++k)
            CHECK((base.gbar[k] - up.gbar[k]).norm() <= 1e-10);
    }

    TEST_CASE("no unit vector beats the leakage direction's quotient")
    {
        Rng rng(77);
        for (int t = 0; t < 100; ++t)
        {
            Instance inst = random_instance(9000 + t, 4, 3, 2);
            const double reg = 1e-12 *
                               (inst.cov.R_agg[0] + inst.cov.T_agg[0]).trace().real() / 4.0;
            BeamDirections dirs = lbf_directions(inst.cov, inst.ch);
            for (Index k = 0; k < 3; ++k)
            {
                MatC a = inst.cov.R_agg[k] + inst.cov.T_agg[k] +
                         reg * MatC::Identity(4, 4);
                double best = quotient(inst.ch.h_s.row(k), a, dirs.gbar[k]);
                for (int v = 0; v < 500; ++v)
                {
                    VecC g = random_unit_vector(rng, 4);
                    CHECK(quotient(inst.ch.h_s.row(k), a, g) <= best * (1.0 + 1e-9));
                }
            }
        }
    }

    TEST_CASE("a singular aggregate without regularization names the destination")
    {
        Instance inst = random_instance(31, 4, 2, 2);
        CovarianceBundle cov;
        cov.R_agg = {MatC::Identity(4, 4), MatC::Zero(4, 4)};
        cov.T_agg = {MatC::Zero(4, 4), MatC::Zero(4, 4)};
        bool thrown = false;
        try
        {
            lbf_directions(cov, inst.ch, 0.0);
        }
        catch (const SingularLeakageError &e)
        {
            thrown = true;
            CHECK(e.destination == 1);
        }
        CHECK(thrown);
    }

    TEST_CASE("zero-forcing nulls every primary receiver")
    {
        for (std::uint64_t seed : {41u, 43u, 47u})
        {
            Instance inst = random_instance(seed, 4, 3, 2);
            BeamDirections dirs = zfbf_directions(inst.ch);
            CHECK(dirs.method == DirectionMethod::ZeroForcing);
            for (const VecC &g : dirs.gbar)
            {
                check_canonical(g);
                VecC residual = inst.ch.h_p * g;
                CHECK(residual.norm() <= 1e-10 * inst.ch.h_p.norm());
            }
        }
    }

    TEST_CASE("zero-forcing needs more nodes than primary receivers")
    {
        Instance inst = random_instance(53, 2, 2, 2);
        CHECK_THROWS_AS(zfbf_directions(inst.ch), NullspaceEmptyError);
        Instance tall = random_instance(54, 2, 2, 3);
        CHECK_THROWS_AS(zfbf_directions(tall.ch), NullspaceEmptyError);
    }

    TEST_CASE("orthogonal primaries leave the matched filter untouched")
    {
        ChannelRealization ch;
        ch.h_p = MatC::Zero(1, 3);
        ch.h_p(0, 0) = cxd(1.0, 0.5);
        ch.h_s = MatC::Zero(1, 3);
        ch.h_s(0, 1) = cxd(0.3, -0.2);
        ch.h_s(0, 2) = cxd(-0.1, 0.7);
        ch.noise_plus_pu_power = VecR::Constant(1, 1e-16);
        BeamDirections dirs = zfbf_directions(ch);
        VecC mf = ch.h_s.row(0).adjoint();
        mf /= mf.norm();
        cxd lead = mf(1) / std::abs(mf(1));
        mf /= lead;
        CHECK((dirs.gbar[0] - mf).norm() <= 1e-12);
    }

    TEST_CASE("zero-forcing only protects the synchronous overlap")
    {
        // With full symbol overlap the nulled channel leaks nothing, but the
        // partial-overlap covariance retains off-diagonal mass the projection
        // cannot see.
        Instance inst = random_instance(61, 4, 2, 2);
        BeamDirections dirs = zfbf_directions(inst.ch);
        const VecC &g = dirs.gbar[0];

        // the fully synchronous covariance is the rank-one outer product of
        // the channel row, so its quadratic form factors into |h*g|^2; the
        // factored form is evaluated first to keep the comparison below the
        // cancellation noise of an explicit matrix product
        double leak_sync = std::norm((inst.ch.h_p.row(0) * g)(0));
        double leak_asynch = (g.adjoint() * inst.cov.R[0][0] * g)(0, 0).real();
        double scale = inst.ch.h_p.row(0).squaredNorm();
        CHECK(leak_sync <= 1e-18 * scale);
        CHECK(leak_asynch > 1e-6 * scale);
    }

    TEST_CASE("erroneous-csi thresholds shrink and clamp")
    {
        VecR gamma(2);
        gamma << 4.0e-16, 1.0e-16;
        VecR alpha(2);
        alpha << 4.0, 1.0;
        SUBCASE("zero channel uncertainty changes nothing")
        {
            EffectiveThresholds eff =
                robust_thresholds_erroneous(gamma, VecR::Zero(2), alpha);
            CHECK(eff.regime == ThresholdRegime::RobustErroneous);
            CHECK(eff.gamma_eff == gamma);
        }
        SUBCASE("the margin squares the shrunk root")
        {
            // sum of sqrt(alpha) is 3, so psi of 1e-8 / 3 removes 1e-8 from
            // sqrt(gamma) = 2e-8, leaving exactly a quarter of the original.
            VecR psi = VecR::Constant(2, 1.0e-8 / 3.0);
            EffectiveThresholds eff = robust_thresholds_erroneous(gamma, psi, alpha);
            CHECK(eff.gamma_eff(0) == doctest::Approx(1.0e-16).epsilon(1e-12));
            CHECK(eff.gamma_eff(1) == doctest::Approx(0.0).epsilon(1e-12));
        }
        SUBCASE("an oversized margin clamps to zero")
        {
            VecR psi = VecR::Constant(2, 1.0);
            EffectiveThresholds eff = robust_thresholds_erroneous(gamma, psi, alpha);
            CHECK(eff.gamma_eff(0) == 0.0);
            CHECK(eff.gamma_eff(1) == 0.0);
        }
    }

    TEST_CASE("statistical thresholds scale by the violation budget")
    {
        VecR gamma(2);
        gamma << 4.0e-16, 1.0e-16;
        EffectiveThresholds full =
            robust_thresholds_statistical(gamma, VecR::Constant(2, 1.0));
        CHECK(full.regime == ThresholdRegime::RobustStatistical);
        CHECK((full.gamma_eff - gamma).norm() <= 1e-30);
        EffectiveThresholds tight =
            robust_thresholds_statistical(gamma, VecR::Constant(2, 0.1));
        CHECK(tight.gamma_eff(0) == doctest::Approx(4.0e-17).epsilon(1e-12));
        CHECK(tight.gamma_eff(1) == doctest::Approx(1.0e-17).epsilon(1e-12));
    }
}
