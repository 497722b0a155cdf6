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

#include "asynchbf/channel.hpp"
#include "asynchbf/geometry.hpp"
#include "asynchbf/rng.hpp"
#include "oracles.hpp"

using namespace asynchbf;
using asynchbf::testing::leakage_double_sum;
using asynchbf::testing::random_topology;
using asynchbf::testing::random_unit_vector;
using asynchbf::testing::reference_topology;

namespace
{
    VecR flat_noise(Index K, double value = 1.0e-16)
    {
        return VecR::Constant(K, value);
    }

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
        inst.ch = draw_channels(inst.topo, FadingSpec{}, 100.0, flat_noise(K),
                                derive_seed(seed, 1));
        inst.cov = build_covariances(inst.ch, inst.corr);
        return inst;
    }
} // namespace

TEST_SUITE("channel")
{
    TEST_CASE("fixed seed reproduces the realization bit for bit")
    {
        Topology t = reference_topology();
        ChannelRealization a = draw_channels(t, FadingSpec{}, 1.0, flat_noise(3), 42);
        ChannelRealization b = draw_channels(t, FadingSpec{}, 1.0, flat_noise(3), 42);
        CHECK(a.h_s == b.h_s);
        CHECK(a.h_p == b.h_p);
        ChannelRealization c = draw_channels(t, FadingSpec{}, 1.0, flat_noise(3), 43);
        CHECK(a.h_s != c.h_s);
    }

    TEST_CASE("doubling the distance scales mean power by two to the minus exponent")
    {
        // Two nodes on the x axis, one destination in line with them so the
        // node distances are exactly d and 2d.
        Topology t;
        t.ccrn_positions = {{0.0, 0.0}, {-200.0, 0.0}};
        t.sd_positions = {{200.0, 0.0}};
        t.pr_positions = {{0.0, 500.0}};
        FadingSpec fading; // exponent 4
        double p_near = 0.0, p_far = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i)
        {
            ChannelRealization ch = draw_channels(t, fading, 1.0, flat_noise(1), 1000 + i);
            p_near += std::norm(ch.h_s(0, 0));
            p_far += std::norm(ch.h_s(0, 1));
        }
        CHECK(p_near / p_far == doctest::Approx(16.0).epsilon(0.03));
    }

    TEST_CASE("unit fading power after removing path loss")
    {
        Topology t;
        t.ccrn_positions = {{0.0, 0.0}};
        t.sd_positions = {{100.0, 0.0}};
        t.pr_positions = {{0.0, 100.0}};
        double gain = std::pow(100.0, -4.0);
        double acc = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i)
        {
            ChannelRealization ch = draw_channels(t, FadingSpec{}, 1.0, flat_noise(1), 7000 + i);
            acc += std::norm(ch.h_s(0, 0)) / gain;
        }
        CHECK(acc / n == doctest::Approx(1.0).epsilon(0.02));
    }

    TEST_CASE("covariances are Hermitian and positive semidefinite")
    {
        for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u})
        {
            Instance inst = random_instance(seed);
            auto check_matrix = [](const MatC &M) {
                double scale = M.norm();
                CHECK((M - M.adjoint()).norm() <= 1e-12 * scale);
                Eigen::SelfAdjointEigenSolver<MatC> es(M);
                CHECK(es.eigenvalues().minCoeff() >= -1e-10 * scale);
            };
            for (const auto &row : inst.cov.R)
                for (const MatC &M : row)
                    check_matrix(M);
            for (const auto &row : inst.cov.T)
                for (const MatC &M : row)
                    check_matrix(M);
            for (const MatC &M : inst.cov.R_agg)
                check_matrix(M);
            for (const MatC &M : inst.cov.T_agg)
                check_matrix(M);
        }
    }

    TEST_CASE("covariance entries follow the overlap-weighted outer product")
    {
        Instance inst = random_instance(9);
        const Index L = inst.ch.num_nodes();
        for (Index j = 0; j < inst.ch.num_primaries(); ++j)
            for (Index r = 0; r < L; ++r)
                for (Index f = 0; f < L; ++f)
                {
                    cxd expected = inst.corr.beta_p[j][0](r, f) *
                                   std::conj(inst.ch.h_p(j, r)) * inst.ch.h_p(j, f);
                    CHECK(std::abs(inst.cov.R[j][0](r, f) - expected) <= 1e-15);
                }
        // Cross-beam matrices: receiver i, beam k uses receiver i's channel.
        for (Index i = 0; i < inst.ch.num_destinations(); ++i)
            for (Index r = 0; r < L; ++r)
                for (Index f = 0; f < L; ++f)
                {
                    cxd expected = inst.corr.beta_s[i][1](r, f) *
                                   std::conj(inst.ch.h_s(i, r)) * inst.ch.h_s(i, f);
                    CHECK(std::abs(inst.cov.T[i][1](r, f) - expected) <= 1e-15);
                }
    }

    TEST_CASE("synchronous limit collapses to a rank-one outer product")
    {
        Instance inst = random_instance(12);
        for (auto &per_recv : inst.corr.beta_p)
            for (MatR &b : per_recv)
                b.setOnes();
        CovarianceBundle cov = build_covariances(inst.ch, inst.corr);
        MatC outer = inst.ch.h_p.row(0).adjoint() * inst.ch.h_p.row(0);
        CHECK((cov.R[0][0] - outer).norm() <= 1e-12 * outer.norm());
        Eigen::JacobiSVD<MatC> svd(cov.R[0][0]);
        CHECK(svd.singularValues()(1) <= 1e-10 * svd.singularValues()(0));
    }

    TEST_CASE("incoherent limit leaves only the diagonal")
    {
        Instance inst = random_instance(13);
        for (auto &per_recv : inst.corr.beta_p)
            for (MatR &b : per_recv)
                b.setIdentity();
        CovarianceBundle cov = build_covariances(inst.ch, inst.corr);
        for (Index r = 0; r < inst.ch.num_nodes(); ++r)
        {
            CHECK(cov.R[0][0](r, r).real() ==
                  doctest::Approx(std::norm(inst.ch.h_p(0, r))));
            for (Index f = 0; f < inst.ch.num_nodes(); ++f)
                if (f != r)
                    CHECK(std::abs(cov.R[0][0](r, f)) == 0.0);
        }
    }

    TEST_CASE("quadratic form equals the scalar double sum")
    {
        Rng rng(400);
        for (int trial = 0; trial < 1000; ++trial)
        {
            Instance inst = random_instance(5000 + trial, 3, 2, 2);
            VecC g = random_unit_vector(rng, 3);
            double via_matrix = (g.adjoint() * inst.cov.R[1][0] * g)(0, 0).real();
            double via_sum =
                leakage_double_sum(g, inst.ch.h_p.row(1), inst.corr.beta_p[1][0]);
            CHECK(via_matrix == doctest::Approx(via_sum).epsilon(1e-10));

            double t_matrix = (g.adjoint() * inst.cov.T[0][1] * g)(0, 0).real();
            double t_sum =
                leakage_double_sum(g, inst.ch.h_s.row(0), inst.corr.beta_s[0][1]);
            CHECK(t_matrix == doctest::Approx(t_sum).epsilon(1e-10));
        }
    }

    TEST_CASE("aggregates sum the right slices")
    {
        Instance inst = random_instance(21);
        const Index K = inst.ch.num_destinations();
        const Index J = inst.ch.num_primaries();
        for (Index k = 0; k < K; ++k)
        {
            MatC r_sum = MatC::Zero(4, 4);
            for (Index j = 0; j < J; ++j)
                r_sum += inst.cov.R[j][k];
            CHECK((inst.cov.R_agg[k] - r_sum).norm() <= 1e-14 * r_sum.norm());

            MatC t_sum = MatC::Zero(4, 4);
            for (Index i = 0; i < K; ++i)
                if (i != k)
                    t_sum += inst.cov.T[i][k];
            CHECK((inst.cov.T_agg[k] - t_sum).norm() <= 1e-14 * t_sum.norm());
        }
    }

    TEST_CASE("zero error radius returns the truth")
    {
        Instance inst = random_instance(31);
        CsiErroneous model{0.0, VecR::Zero(2)};
        ChannelRealization est = perturb_channels(inst.ch, model, 5);
        CHECK(est.h_p == inst.ch.h_p);
        CHECK(est.h_s == inst.ch.h_s);
    }

    TEST_CASE("error draws stay inside the ball and reach its boundary")
    {
        Instance inst = random_instance(32);
        const double eps = 2.5e-17;
        CsiErroneous model{eps, VecR::Zero(2)};
        double max_sq = 0.0;
        for (int i = 0; i < 10000; ++i)
        {
            ChannelRealization est = perturb_channels(inst.ch, model, 100 + i);
            for (Index j = 0; j < 2; ++j)
            {
                double nsq = (inst.ch.h_p.row(j) - est.h_p.row(j)).squaredNorm();
                CHECK(nsq <= eps * (1.0 + 1e-12));
                max_sq = std::max(max_sq, nsq);
            }
        }
        // Order statistic of the uniform-in-ball radius over 1e4 draws.
        CHECK(max_sq == doctest::Approx(eps).epsilon(0.05));
    }

    TEST_CASE("boundary placement pins the error norm")
    {
        Instance inst = random_instance(33);
        const double eps = 1.0e-17;
        CsiErroneous model{eps, VecR::Zero(2)};
        for (int i = 0; i < 100; ++i)
        {
            ChannelRealization est =
                perturb_channels(inst.ch, model, 500 + i, ErrorPlacement::Boundary);
            for (Index j = 0; j < 2; ++j)
            {
                double nsq = (inst.ch.h_p.row(j) - est.h_p.row(j)).squaredNorm();
                CHECK(nsq == doctest::Approx(eps).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("statistical covariances are the expected diagonals")
    {
        Instance inst = random_instance(41);
        SUBCASE("all-ones mean gains give the identity")
        {
            CsiStatistical model{MatR::Ones(2, 4), VecR::Constant(2, 0.1)};
            auto stat = build_statistical_covariances(model, inst.corr);
            for (Index j = 0; j < 2; ++j)
                CHECK((stat[j][0] - MatC::Identity(4, 4)).norm() <= 1e-14);
        }
        SUBCASE("diagonal quadratic form")
        {
            MatR omega = MatR::Random(2, 4).cwiseAbs();
            CsiStatistical model{omega, VecR::Constant(2, 0.1)};
            auto stat = build_statistical_covariances(model, inst.corr);
            Rng rng(9);
            VecC g = random_unit_vector(rng, 4);
            double via_matrix = (g.adjoint() * stat[0][0] * g)(0, 0).real();
            double direct = 0.0;
            for (Index r = 0; r < 4; ++r)
                direct += std::norm(g(r)) * omega(0, r);
            CHECK(via_matrix == doctest::Approx(direct).epsilon(1e-12));
        }
    }

    TEST_CASE("statistical covariance matches the Monte Carlo expectation")
    {
        Rng rng(55);
        Topology topo = random_topology(rng, 4, 2, 2);
        DelayTable d = compute_delays(topo);
        CorrelationSet corr = compute_correlations(d, 0, 5.0e-7);
        FadingSpec fading;
        MatR omega = path_loss_omega(topo, fading);
        CsiStatistical model{omega, VecR::Constant(2, 0.1)};
        auto stat = build_statistical_covariances(model, corr);

        VecC g = random_unit_vector(rng, 4);
        double expected = (g.adjoint() * stat[0][0] * g)(0, 0).real();
        double acc = 0.0;
        const int n = 10000;
        for (int i = 0; i < n; ++i)
        {
            ChannelRealization ch =
                draw_channels(topo, fading, 1.0, flat_noise(2), 40000 + i);
            CovarianceBundle cov = build_covariances(ch, corr);
            acc += (g.adjoint() * cov.R[0][0] * g)(0, 0).real();
        }
        CHECK(acc / n == doctest::Approx(expected).epsilon(0.03));
    }

    TEST_CASE("nonpositive distances are rejected")
    {
        Topology t;
        t.ccrn_positions = {{0.0, 0.0}};
        t.sd_positions = {{0.0, 0.0}}; // coincides with the node
        t.pr_positions = {{10.0, 0.0}};
        CHECK_THROWS_AS(draw_channels(t, FadingSpec{}, 1.0, flat_noise(1), 1),
                        std::invalid_argument);
    }
}
