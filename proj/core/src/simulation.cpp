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

#include "asynchbf/simulation.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "asynchbf/rng.hpp"
#include "asynchbf/selection.hpp"

namespace asynchbf
{
    namespace
    {
        constexpr double kViolationSlack = 1e-8;

        void check_solution_shape(const ChannelRealization &ch, const BeamformerSolution &sol,
                                  const VecR &weights)
        {
            const Index K = ch.num_destinations();
            if (static_cast<Index>(sol.directions.gbar.size()) != K || sol.alpha.size() != K)
                throw std::invalid_argument("solution must carry one beam per destination");
            if (weights.size() != K)
                throw std::invalid_argument("need one weight per destination");
            for (const VecC &g : sol.directions.gbar)
                if (g.size() != ch.num_nodes())
                    throw std::invalid_argument("beam length must match the node count");
        }

        double beam_alpha(const BeamformerSolution &sol, Index k)
        {
            return sol.kind == SolutionKind::SharedSingleNode ? sol.alpha(0) : sol.alpha(k);
        }
    } // namespace

    double actual_sum_rate(const ChannelRealization &ch, const CovarianceBundle &cov,
                           const BeamformerSolution &sol, const VecR &weights)
    {
        check_solution_shape(ch, sol, weights);
        const Index K = ch.num_destinations();
        double total = 0.0;
        for (Index k = 0; k < K; ++k)
        {
            const VecC &g = sol.directions.gbar[static_cast<size_t>(k)];
            double sig = ch.symbol_power * beam_alpha(sol, k) *
                         std::norm((ch.h_s.row(k) * g)(0, 0));
            double denom = ch.noise_plus_pu_power(k);
            if (sol.kind == SolutionKind::PerBeam)
                for (Index i = 0; i < K; ++i)
                {
                    if (i == k)
                        continue;
                    const VecC &gi = sol.directions.gbar[static_cast<size_t>(i)];
                    denom += sol.alpha(i) *
                             (gi.adjoint() *
                              cov.T[static_cast<size_t>(k)][static_cast<size_t>(i)] * gi)(0, 0)
                                 .real();
                }
            total += weights(k) * std::log1p(sig / denom) / std::numbers::ln2;
        }
        return total;
    }

    double approx_sum_rate(const ChannelRealization &ch, const BeamformerSolution &sol,
                           const VecR &weights)
    {
        check_solution_shape(ch, sol, weights);
        const Index K = ch.num_destinations();
        double total = 0.0;
        for (Index k = 0; k < K; ++k)
        {
            const VecC &g = sol.directions.gbar[static_cast<size_t>(k)];
            double sig = ch.symbol_power * beam_alpha(sol, k) *
                         std::norm((ch.h_s.row(k) * g)(0, 0));
            total += weights(k) * std::log1p(sig / ch.noise_plus_pu_power(k)) / std::numbers::ln2;
        }
        return total;
    }

    double asynch_power(const CovarianceBundle &cov, const BeamformerSolution &sol, Index j)
    {
        if (j < 0 || j >= static_cast<Index>(cov.R.size()))
            throw std::invalid_argument("primary index out of range");
        double p = 0.0;
        for (size_t k = 0; k < sol.directions.gbar.size(); ++k)
        {
            const VecC &g = sol.directions.gbar[k];
            p += sol.alpha(static_cast<Index>(k)) *
                 (g.adjoint() * cov.R[static_cast<size_t>(j)][k] * g)(0, 0).real();
        }
        return p;
    }

    TrialMetrics evaluate_solution(const ChannelRealization &truth, const CovarianceBundle &truth_cov,
                                   const BeamformerSolution &sol, const VecR &gamma_th,
                                   const VecR &weights)
    {
        const Index J = truth.num_primaries();
        if (gamma_th.size() != J)
            throw std::invalid_argument("need one cap per primary");
        TrialMetrics out;
        out.sum_rate_actual = actual_sum_rate(truth, truth_cov, sol, weights);
        out.sum_rate_approx = approx_sum_rate(truth, sol, weights);
        out.p_asynch.resize(J);
        out.violated.assign(static_cast<size_t>(J), 0);
        for (Index j = 0; j < J; ++j)
        {
            out.p_asynch(j) = asynch_power(truth_cov, sol, j);
            if (out.p_asynch(j) > gamma_th(j) * (1.0 + kViolationSlack))
            {
                out.violated[static_cast<size_t>(j)] = 1;
                out.outage = true;
            }
        }
        out.method = sol.algorithm;
        return out;
    }

    VecR symbol_level_oracle(const ChannelRealization &ch, const BeamformerSolution &sol,
                             const DelayTable &delays, Index reference_sd, double symbol_duration,
                             std::size_t n_symbols, std::uint64_t seed, std::size_t oversampling)
    {
        const Index J = ch.num_primaries();
        const Index K = ch.num_destinations();
        const Index L = ch.num_nodes();
        if (!(symbol_duration > 0.0) || !std::isfinite(symbol_duration))
            throw std::invalid_argument("symbol_duration must be positive and finite");
        if (n_symbols < 1 || oversampling < 1)
            throw std::invalid_argument("need at least one symbol and one sample per symbol");
        if (delays.primaries != J || delays.tau.cols() != L)
            throw std::invalid_argument("delay table does not match the channel dimensions");
        if (reference_sd < 0 || reference_sd >= delays.destinations)
            throw std::invalid_argument("reference destination out of range");
        if (static_cast<Index>(sol.directions.gbar.size()) != K || sol.alpha.size() != K)
            throw std::invalid_argument("solution must carry one beam per destination");

        const std::size_t N = n_symbols * oversampling;
        const cxd constellation[4] = {
            cxd(std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0),
            cxd(-std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0),
            cxd(-std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0),
            cxd(std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0)};

        Rng rng(seed);
        VecR power = VecR::Zero(J);
        VecC stream(static_cast<Index>(N));
        VecC received(static_cast<Index>(N));
        for (Index j = 0; j < J; ++j)
        {
            // offsets on the oversampling grid, nonnegative per receiver
            std::vector<long long> grid(static_cast<size_t>(L));
            long long lowest = std::numeric_limits<long long>::max();
            for (Index r = 0; r < L; ++r)
            {
                double off = delays.at_primary(j, r) - delays.at_destination(reference_sd, r);
                grid[static_cast<size_t>(r)] = std::llround(
                    off / symbol_duration * static_cast<double>(oversampling));
                lowest = std::min(lowest, grid[static_cast<size_t>(r)]);
            }
            std::vector<std::size_t> shift(static_cast<size_t>(L));
            for (Index r = 0; r < L; ++r)
                shift[static_cast<size_t>(r)] =
                    static_cast<std::size_t>(grid[static_cast<size_t>(r)] - lowest) % N;

            received.setZero();
            for (Index k = 0; k < K; ++k)
            {
                double a = sol.alpha(k);
                if (a == 0.0)
                    continue;
                for (std::size_t sym = 0; sym < n_symbols; ++sym)
                    stream
                        .segment(static_cast<Index>(sym * oversampling),
                                 static_cast<Index>(oversampling))
                        .setConstant(constellation[rng.next_u64() & 3]);
                const VecC &g = sol.directions.gbar[static_cast<size_t>(k)];
                double rootp = std::sqrt(a);
                for (Index r = 0; r < L; ++r)
                {
                    cxd c = rootp * g(r) * ch.h_p(j, r);
                    if (c == cxd(0.0, 0.0))
                        continue;
                    const Index sh = static_cast<Index>(shift[static_cast<size_t>(r)]);
                    const Index n = static_cast<Index>(N);
                    received.segment(sh, n - sh) += c * stream.head(n - sh);
                    if (sh > 0)
                        received.head(sh) += c * stream.tail(sh);
                }
            }
            power(j) = received.squaredNorm() / static_cast<double>(N);
        }
        return power;
    }

    namespace
    {
        BeamformerSolution finish_per_beam(const AllocationProblem &prob, const Allocation &alloc,
                                           BeamDirections dirs, Method m)
        {
            BeamformerSolution sol;
            sol.directions = std::move(dirs);
            sol.alpha = alloc.alpha;
            sol.kind = SolutionKind::PerBeam;
            sol.algorithm = method_name(m);
            sol.active_set = alloc.active_set;
            sol.kkt_residual = kkt_residual(prob, alloc);
            return sol;
        }

        BeamformerSolution solve_robust_erroneous(const TrialContext &ctx)
        {
            BeamDirections dirs = lbf_directions(*ctx.est_cov, *ctx.est, ctx.regularization);
            VecR caps = ctx.gamma_th;
            VecR caps_min = caps;
            VecR alpha_prev;
            AllocationProblem prob;
            Allocation alloc;
            bool converged = false;
            for (int iter = 0; iter < 50; ++iter)
            {
                prob = make_allocation_problem(*ctx.est, *ctx.est_cov, dirs, caps, ctx.weights);
                alloc = opa_allocate(prob);
                if (iter > 0)
                {
                    double change = 0.0;
                    for (Index k = 0; k < alloc.alpha.size(); ++k)
                        change = std::max(change, std::abs(alloc.alpha(k) - alpha_prev(k)) /
                                                      std::max(alpha_prev(k), 1e-300));
                    if (change < 1e-6)
                    {
                        converged = true;
                        break;
                    }
                }
                alpha_prev = alloc.alpha;
                caps = robust_thresholds_erroneous(ctx.gamma_th, ctx.psi_c, alloc.alpha).gamma_eff;
                caps_min = caps_min.cwiseMin(caps);
            }
            if (!converged)
            {
                prob = make_allocation_problem(*ctx.est, *ctx.est_cov, dirs, caps_min, ctx.weights);
                alloc = opa_allocate(prob);
            }
            return finish_per_beam(prob, alloc, std::move(dirs), Method::RlbfErr);
        }

        BeamformerSolution solve_robust_statistical(const TrialContext &ctx)
        {
            if (ctx.stat_R == nullptr)
                throw std::invalid_argument("statistical covariances missing from the context");
            const std::vector<std::vector<MatC>> &sR = *ctx.stat_R;
            CovarianceBundle stat;
            stat.R = sR;
            stat.T = ctx.est_cov->T;
            stat.T_agg = ctx.est_cov->T_agg;
            const size_t K = ctx.est_cov->T.size();
            const Index L = ctx.est->num_nodes();
            stat.R_agg.assign(K, MatC::Zero(L, L));
            for (size_t k = 0; k < K; ++k)
                for (size_t j = 0; j < sR.size(); ++j)
                    stat.R_agg[k] += sR[j][k];

            BeamDirections dirs = lbf_directions(stat, *ctx.est, ctx.regularization);
            VecR caps = robust_thresholds_statistical(ctx.gamma_th, ctx.epsilon_viol).gamma_eff;
            AllocationProblem prob = make_allocation_problem(*ctx.est, stat, dirs, caps, ctx.weights);
            Allocation alloc = opa_allocate(prob);
            return finish_per_beam(prob, alloc, std::move(dirs), Method::RlbfStat);
        }
    } // namespace

    BeamformerSolution solve_method(Method method, const TrialContext &ctx)
    {
        if (ctx.est == nullptr || ctx.est_cov == nullptr)
            throw std::invalid_argument("trial context lacks channel estimates");

        switch (method)
        {
        case Method::LbfOpa:
        case Method::LbfErr:
        {
            BeamDirections dirs = lbf_directions(*ctx.est_cov, *ctx.est, ctx.regularization);
            AllocationProblem prob =
                make_allocation_problem(*ctx.est, *ctx.est_cov, dirs, ctx.gamma_th, ctx.weights);
            Allocation alloc = opa_allocate(prob);
            return finish_per_beam(prob, alloc, std::move(dirs), method);
        }
        case Method::LbfLcpa:
        {
            BeamDirections dirs = lbf_directions(*ctx.est_cov, *ctx.est, ctx.regularization);
            AllocationProblem prob =
                make_allocation_problem(*ctx.est, *ctx.est_cov, dirs, ctx.gamma_th, ctx.weights);
            Allocation alloc = lcpa_allocate(prob);
            BeamformerSolution sol;
            sol.directions = std::move(dirs);
            sol.alpha = alloc.alpha;
            sol.kind = SolutionKind::PerBeam;
            sol.algorithm = method_name(method);
            sol.active_set = alloc.active_set;
            return sol; // heuristic allocation, no optimality certificate
        }
        case Method::Zfbf:
        {
            BeamDirections zdirs = zfbf_directions(*ctx.est);
            BeamDirections ldirs = lbf_directions(*ctx.est_cov, *ctx.est, ctx.regularization);
            AllocationProblem lprob =
                make_allocation_problem(*ctx.est, *ctx.est_cov, ldirs, ctx.gamma_th, ctx.weights);
            Allocation lalloc = opa_allocate(lprob);
            const Index K = ctx.est->num_destinations();
            BeamformerSolution sol;
            sol.directions = std::move(zdirs);
            // same total power as the leakage design, split evenly
            sol.alpha = VecR::Constant(K, lalloc.alpha.sum() / static_cast<double>(K));
            sol.kind = SolutionKind::PerBeam;
            sol.algorithm = method_name(method);
            return sol;
        }
        case Method::SingleCcrn:
            return best_single_ccrn(*ctx.est, *ctx.est_cov, ctx.gamma_th, ctx.weights).solution;
        case Method::Selection:
            return select_and_beamform(*ctx.est, *ctx.est_cov, ctx.gamma_th, ctx.weights,
                                       ctx.selection_limit)
                .solution;
        case Method::RlbfErr:
            return solve_robust_erroneous(ctx);
        case Method::RlbfStat:
            return solve_robust_statistical(ctx);
        }
        throw std::invalid_argument("unknown method");
    }

    CampaignResult run_campaign(const ScenarioConfig &cfg, double symbol_power_db,
                                const std::vector<Method> &methods)
    {
        if (methods.empty())
            throw std::invalid_argument("need at least one method");
        if (cfg.trials < 1)
            throw std::invalid_argument("need at least one trial");

        const Index J = cfg.topology.num_primaries();
        const Index K = cfg.topology.num_destinations();
        const double symbol_power = std::pow(10.0, symbol_power_db / 10.0);
        const VecR sigma2 = cfg.sigma2();
        const CorrelationSet corr =
            cfg.explicit_beta ? *cfg.explicit_beta
                              : compute_correlations(compute_delays(cfg.topology),
                                                     cfg.reference_sd, cfg.symbol_duration);

        bool need_err = false, need_stat = false;
        for (Method m : methods)
        {
            need_err = need_err || m == Method::LbfErr || m == Method::RlbfErr;
            need_stat = need_stat || m == Method::RlbfStat;
        }
        std::vector<std::vector<MatC>> stat_R;
        if (need_stat)
            stat_R = build_statistical_covariances(
                CsiStatistical{cfg.effective_omega(), cfg.epsilon_viol}, corr);

        const std::size_t M = methods.size();
        CampaignResult out;
        out.symbol_power_db = symbol_power_db;
        out.master_seed = cfg.seed;
        out.trials = cfg.trials;
        out.rows.resize(cfg.trials * M);
        std::vector<double> kkts(cfg.trials * M, std::numeric_limits<double>::quiet_NaN());

        auto run_trial = [&](std::size_t t) {
            const std::uint64_t seed_t = derive_seed(cfg.seed, t);
            auto mark_all_failed = [&]() {
                for (std::size_t mi = 0; mi < M; ++mi)
                {
                    TrialRow &row = out.rows[t * M + mi];
                    row.trial_id = t;
                    row.method = methods[mi];
                    row.seed = seed_t;
                    row.failed = true;
                    row.sum_rate_actual = std::numeric_limits<double>::quiet_NaN();
                    row.sum_rate_approx = std::numeric_limits<double>::quiet_NaN();
                    row.outage = true;
                    row.p_asynch = VecR::Constant(J, std::numeric_limits<double>::quiet_NaN());
                    row.alpha = VecR::Constant(K, std::numeric_limits<double>::quiet_NaN());
                }
            };

            ChannelRealization truth;
            CovarianceBundle truth_cov;
            ChannelRealization est;
            CovarianceBundle est_cov;
            try
            {
                truth = draw_channels(cfg.topology, cfg.fading, symbol_power, sigma2,
                                      derive_seed(seed_t, 0));
                truth_cov = build_covariances(truth, corr);
                if (need_err)
                {
                    est = perturb_channels(truth, CsiErroneous{cfg.epsilon, cfg.psi_c},
                                           derive_seed(seed_t, 1), cfg.error_placement);
                    est_cov = build_covariances(est, corr);
                }
            }
            catch (const std::exception &)
            {
                mark_all_failed();
                return;
            }

            for (std::size_t mi = 0; mi < M; ++mi)
            {
                const Method m = methods[mi];
                TrialRow &row = out.rows[t * M + mi];
                row.trial_id = t;
                row.method = m;
                row.seed = seed_t;

                const bool uses_estimate = m == Method::LbfErr || m == Method::RlbfErr;
                TrialContext ctx;
                ctx.est = uses_estimate ? &est : &truth;
                ctx.est_cov = uses_estimate ? &est_cov : &truth_cov;
                ctx.stat_R = need_stat ? &stat_R : nullptr;
                ctx.gamma_th = cfg.gamma_th;
                ctx.weights = cfg.weights;
                ctx.psi_c = cfg.psi_c;
                ctx.epsilon_viol = cfg.epsilon_viol;
                ctx.selection_limit = cfg.selection_limit;
                ctx.regularization = cfg.regularization.value_or(-1.0);

                try
                {
                    BeamformerSolution sol = solve_method(m, ctx);
                    TrialMetrics met =
                        evaluate_solution(truth, truth_cov, sol, cfg.gamma_th, cfg.weights);
                    row.failed = false;
                    row.sum_rate_actual = met.sum_rate_actual;
                    row.sum_rate_approx = met.sum_rate_approx;
                    row.outage = met.outage;
                    row.p_asynch = met.p_asynch;
                    row.alpha = sol.alpha;
                    kkts[t * M + mi] = sol.kkt_residual;
                }
                catch (const std::exception &)
                {
                    row.failed = true;
                    row.sum_rate_actual = std::numeric_limits<double>::quiet_NaN();
                    row.sum_rate_approx = std::numeric_limits<double>::quiet_NaN();
                    row.outage = true;
                    row.p_asynch = VecR::Constant(J, std::numeric_limits<double>::quiet_NaN());
                    row.alpha = VecR::Constant(K, std::numeric_limits<double>::quiet_NaN());
                }
            }
        };

        std::size_t workers = cfg.workers != 0
                                  ? cfg.workers
                                  : std::max(1u, std::thread::hardware_concurrency());
        workers = std::min(workers, cfg.trials);
        if (workers <= 1)
        {
            for (std::size_t t = 0; t < cfg.trials; ++t)
                run_trial(t);
        }
        else
        {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back([&]() {
                    for (std::size_t t = next.fetch_add(1); t < cfg.trials;
                         t = next.fetch_add(1))
                        run_trial(t);
                });
            for (std::thread &th : pool)
                th.join();
        }

        out.summary.reserve(M);
        for (std::size_t mi = 0; mi < M; ++mi)
        {
            MethodSummary s;
            s.method = methods[mi];
            s.trials = cfg.trials;
            s.mean_p_asynch = VecR::Zero(J);
            s.violation_prob = VecR::Zero(J);
            double credited_sum = 0.0, approx_sum = 0.0;
            std::vector<double> credited;
            credited.reserve(cfg.trials);
            for (std::size_t t = 0; t < cfg.trials; ++t)
            {
                const TrialRow &row = out.rows[t * M + mi];
                if (row.failed)
                {
                    ++s.failures;
                    continue;
                }
                double c = row.outage ? 0.0 : row.sum_rate_actual;
                credited.push_back(c);
                credited_sum += c;
                approx_sum += row.sum_rate_approx;
                s.mean_p_asynch += row.p_asynch;
                for (Index j = 0; j < J; ++j)
                    if (row.p_asynch(j) > cfg.gamma_th(j) * (1.0 + kViolationSlack))
                        s.violation_prob(j) += 1.0;
                double kk = kkts[t * M + mi];
                if (std::isfinite(kk))
                    s.max_kkt_residual = std::max(s.max_kkt_residual, kk);
            }
            const std::size_t n = credited.size();
            if (n > 0)
            {
                s.mean_credited_rate = credited_sum / static_cast<double>(n);
                s.mean_sum_rate_approx = approx_sum / static_cast<double>(n);
                s.mean_p_asynch /= static_cast<double>(n);
                s.violation_prob /= static_cast<double>(n);
                if (n > 1)
                {
                    double ss = 0.0;
                    for (double c : credited)
                        ss += (c - s.mean_credited_rate) * (c - s.mean_credited_rate);
                    double sd = std::sqrt(ss / static_cast<double>(n - 1));
                    s.ci95_credited_rate = 1.96 * sd / std::sqrt(static_cast<double>(n));
                }
            }
            out.summary.push_back(std::move(s));
        }
        return out;
    }
} // namespace asynchbf
