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

#include "asynchbf/power_allocation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace asynchbf
{
    namespace
    {
        constexpr double kFeasSlack = 1e-8;

        bool all_finite(const VecR &v)
        {
            return v.allFinite();
        }

        // Candidate powers for one multiplier vector restricted to subset S of
        // the scaled constraints. Returns false when some positive-weight beam
        // sees no pressure, which makes its power unbounded under S.
        bool water_fill(const MatR &lk, const VecR &gain, const VecR &weights,
                        const std::vector<char> &eff, const std::vector<Index> &subset,
                        const VecR &mu, VecR &alpha)
        {
            const Index K = gain.size();
            alpha.setZero(K);
            for (Index k = 0; k < K; ++k)
            {
                if (!eff[static_cast<size_t>(k)])
                    continue;
                double d = 0.0;
                for (size_t t = 0; t < subset.size(); ++t)
                    d += mu(static_cast<Index>(t)) * lk(subset[t], k);
                if (d <= 0.0)
                    return false;
                alpha(k) = std::max(0.0, weights(k) / d - 1.0 / gain(k));
            }
            return true;
        }

        struct SubsetSolver
        {
            const MatR &lk;
            const VecR &gain;
            const VecR &weights;
            const std::vector<char> &eff;
            const std::vector<Index> &subset;

            bool residual(const VecR &mu, VecR &r, VecR &alpha) const
            {
                if (!water_fill(lk, gain, weights, eff, subset, mu, alpha))
                    return false;
                r.resize(static_cast<Index>(subset.size()));
                for (size_t t = 0; t < subset.size(); ++t)
                    r(static_cast<Index>(t)) = lk.row(subset[t]) * alpha - 1.0;
                return true;
            }

            // A candidate power is the difference of two nearly equal terms
            // when the waterline barely clears 1/gain, so the scaled residual
            // cannot be evaluated below eps times the magnitude of the terms
            // that cancel. A row counts as met once its residual reaches that
            // rounding floor, even if the nominal tolerance is tighter.
            bool certified(const VecR &mu, const VecR &r, const VecR &alpha, double tol) const
            {
                constexpr double eps = std::numeric_limits<double>::epsilon();
                const Index K = gain.size();
                for (size_t t = 0; t < subset.size(); ++t)
                {
                    double floor = 1.0;
                    for (Index k = 0; k < K; ++k)
                    {
                        if (alpha(k) <= 0.0)
                            continue;
                        double d = 0.0;
                        for (size_t u = 0; u < subset.size(); ++u)
                            d += mu(static_cast<Index>(u)) * lk(subset[u], k);
                        floor += 2.0 * lk(subset[t], k) * weights(k) / d;
                    }
                    if (std::abs(r(static_cast<Index>(t))) > std::max(tol, 8.0 * eps * floor))
                        return false;
                }
                return true;
            }

            // One scaled constraint: the waterline involves only the beams
            // this row pressures; beams that another constraint of the subset
            // must cap are skipped, they contribute nothing to this row. The
            // residual is strictly decreasing in mu, so a geometric-mean
            // bisection on a doubling bracket nails it.
            bool solve_single(size_t t, double &mu_out) const
            {
                const Index row = subset[t];
                const Index K = gain.size();
                auto eval = [&](double m) {
                    double r = -1.0;
                    for (Index k = 0; k < K; ++k)
                    {
                        if (!eff[static_cast<size_t>(k)] || lk(row, k) <= 0.0)
                            continue;
                        double a = std::max(0.0, weights(k) / (m * lk(row, k)) - 1.0 / gain(k));
                        r += lk(row, k) * a;
                    }
                    return r;
                };
                double lo = 1.0, hi = 1.0;
                if (eval(1.0) > 0.0)
                {
                    while (eval(hi) > 0.0)
                    {
                        hi *= 2.0;
                        if (hi > 1e60)
                            return false;
                    }
                }
                else
                {
                    while (eval(lo) <= 0.0)
                    {
                        lo /= 2.0;
                        if (lo < 1e-60)
                            return false;
                    }
                }
                for (int i = 0; i < 200; ++i)
                {
                    double mid = std::sqrt(lo * hi);
                    if (eval(mid) > 0.0)
                        lo = mid;
                    else
                        hi = mid;
                }
                mu_out = std::sqrt(lo * hi);
                return true;
            }

            // Cyclic per-coordinate bisection. Each residual is decreasing in
            // its own multiplier and increasing in the others, so the sweep is
            // a monotone fixed-point iteration.
            bool gauss_seidel(VecR &mu) const
            {
                const Index n = static_cast<Index>(subset.size());
                VecR r, alpha;
                auto coord_residual = [&](VecR &m, Index ti, double value) {
                    m(ti) = value;
                    if (!residual(m, r, alpha))
                        return std::numeric_limits<double>::infinity();
                    return r(ti);
                };
                for (int sweep = 0; sweep < 4000; ++sweep)
                {
                    for (Index ti = 0; ti < n; ++ti)
                    {
                        double keep = mu(ti);
                        double f0 = coord_residual(mu, ti, 0.0);
                        if (f0 <= 0.0)
                        {
                            mu(ti) = 0.0;
                            continue;
                        }
                        mu(ti) = keep;
                        double lo = 0.0, hi = std::max(keep, 1e-6);
                        while (true)
                        {
                            double fh = coord_residual(mu, ti, hi);
                            if (std::isinf(fh) || fh > 0.0)
                            {
                                hi *= 2.0;
                                if (hi > 1e80)
                                    return false;
                            }
                            else
                                break;
                        }
                        for (int i = 0; i < 120; ++i)
                        {
                            double mid = 0.5 * (lo + hi);
                            double fm = coord_residual(mu, ti, mid);
                            if (std::isinf(fm) || fm > 0.0)
                                lo = mid;
                            else
                                hi = mid;
                        }
                        mu(ti) = 0.5 * (lo + hi);
                    }
                    if (residual(mu, r, alpha) && certified(mu, r, alpha, 1e-11))
                        return true;
                }
                return false;
            }

            // Last-resort nested bisection: the outer multiplier is bisected
            // on its own row residual with every inner row re-equilibrated
            // per probe. That aggregate stays monotone even where the subset
            // Jacobian loses rank and the cyclic sweep trades one beam
            // between two rows forever.
            bool nested(VecR &mu) const
            {
                const size_t n = subset.size();
                const int outer_iters = n <= 2 ? 120 : n == 3 ? 64 : 40;
                bool dead = false;
                VecR r, alpha;
                std::function<bool(size_t)> settle = [&](size_t t) -> bool {
                    if (t == n)
                        return true;
                    const Index ti = static_cast<Index>(t);
                    const int iters = t + 1 == n ? 120 : outer_iters;
                    const double hint = mu(ti);
                    auto eval = [&](double m) {
                        mu(ti) = m;
                        if (!settle(t + 1) || !residual(mu, r, alpha))
                            return std::numeric_limits<double>::infinity();
                        return r(ti);
                    };
                    double f0 = eval(0.0);
                    if (dead)
                        return false;
                    if (f0 <= 0.0)
                        return true; // the row cannot bind, keep it slack at zero
                    double lo = 0.0, hi = std::max(hint, 1e-6);
                    while (true)
                    {
                        double fh = eval(hi);
                        if (dead)
                            return false;
                        if (std::isinf(fh) || fh > 0.0)
                        {
                            hi *= 2.0;
                            if (hi > 1e80)
                            {
                                dead = true;
                                return false;
                            }
                        }
                        else
                            break;
                    }
                    for (int i = 0; i < iters; ++i)
                    {
                        double mid = 0.5 * (lo + hi);
                        double fm = eval(mid);
                        if (dead)
                            return false;
                        if (std::isinf(fm) || fm > 0.0)
                            lo = mid;
                        else
                            hi = mid;
                    }
                    eval(0.5 * (lo + hi));
                    return !dead;
                };
                if (!settle(0))
                    return false;
                return residual(mu, r, alpha) && certified(mu, r, alpha, 1e-10);
            }

            // Damped Newton on the subset system, warm-started from the
            // single-constraint solutions.
            bool solve(VecR &mu) const
            {
                const Index n = static_cast<Index>(subset.size());
                mu.resize(n);
                for (size_t t = 0; t < subset.size(); ++t)
                {
                    double m = 0.0;
                    if (!solve_single(t, m))
                        return false;
                    mu(static_cast<Index>(t)) = m / static_cast<double>(n);
                }
                if (n == 1)
                    return solve_single(0, mu(0));

                VecR r, alpha;
                if (!residual(mu, r, alpha))
                    return false;
                for (int it = 0; it < 200; ++it)
                {
                    if (r.cwiseAbs().maxCoeff() < 1e-12)
                        return true;
                    MatR jac = MatR::Zero(n, n);
                    for (Index ti = 0; ti < n; ++ti)
                        for (Index tl = 0; tl < n; ++tl)
                        {
                            double s = 0.0;
                            for (Index k = 0; k < gain.size(); ++k)
                            {
                                if (!eff[static_cast<size_t>(k)] || alpha(k) <= 0.0)
                                    continue;
                                double d = 0.0;
                                for (size_t t = 0; t < subset.size(); ++t)
                                    d += mu(static_cast<Index>(t)) * lk(subset[t], k);
                                s -= lk(subset[static_cast<size_t>(ti)], k) * weights(k) /
                                     (d * d) * lk(subset[static_cast<size_t>(tl)], k);
                            }
                            jac(ti, tl) = s;
                        }
                    double delta = 1e-12 * std::max(1e-300, -jac.trace()) /
                                   static_cast<double>(n);
                    bool advanced = false;
                    for (int boost = 0; boost < 40 && !advanced; ++boost)
                    {
                        MatR damped = jac - delta * MatR::Identity(n, n);
                        Eigen::FullPivLU<MatR> lu(damped);
                        if (!lu.isInvertible())
                        {
                            delta = std::max(delta * 10.0, 1e-280);
                            continue;
                        }
                        VecR step = lu.solve(-r);
                        for (double t = 1.0; t > 1e-18; t *= 0.5)
                        {
                            VecR mu2 = (mu + t * step).cwiseMax(0.0);
                            VecR r2, alpha2;
                            if (residual(mu2, r2, alpha2) &&
                                r2.cwiseAbs().maxCoeff() < r.cwiseAbs().maxCoeff())
                            {
                                mu = mu2;
                                r = r2;
                                alpha = alpha2;
                                advanced = true;
                                break;
                            }
                        }
                        if (!advanced)
                            delta = std::max(delta * 10.0, 1e-280);
                    }
                    if (!advanced)
                        break;
                }
                if (certified(mu, r, alpha, 1e-10))
                    return true;
                if (gauss_seidel(mu))
                    return true;
                return nested(mu);
            }
        };
    } // namespace

    std::vector<std::string> validate(const AllocationProblem &prob)
    {
        std::vector<std::string> out;
        const Index J = prob.caps.size();
        const Index K = prob.gain.size();
        if (prob.leak.rows() != J || prob.leak.cols() != K)
            out.push_back("leak must be caps.size() x gain.size()");
        if (prob.weights.size() != K)
            out.push_back("weights must have one entry per beam");
        if (!all_finite(prob.gain) || (prob.gain.array() < 0.0).any())
            out.push_back("gain must be finite and nonnegative");
        if (!prob.leak.allFinite() || (prob.leak.array() < 0.0).any())
            out.push_back("leak must be finite and nonnegative");
        if (!all_finite(prob.caps) || (prob.caps.array() < 0.0).any())
            out.push_back("caps must be finite and nonnegative");
        if (!all_finite(prob.weights) || (prob.weights.array() < 0.0).any())
            out.push_back("weights must be finite and nonnegative");
        if (!out.empty())
            return out;
        for (Index k = 0; k < K; ++k)
            if (prob.gain(k) > 0.0 && prob.weights(k) > 0.0 &&
                prob.leak.col(k).maxCoeff() == 0.0)
                out.push_back("beam " + std::to_string(k) +
                              " leaks to no primary; its power is unbounded");
        return out;
    }

    AllocationProblem make_allocation_problem(const ChannelRealization &ch,
                                              const CovarianceBundle &cov,
                                              const BeamDirections &dirs, const VecR &caps,
                                              const VecR &weights)
    {
        const Index K = ch.num_destinations();
        const Index J = ch.num_primaries();
        if (static_cast<Index>(dirs.gbar.size()) != K)
            throw std::invalid_argument("need one direction per destination");
        if (caps.size() != J || static_cast<Index>(cov.R.size()) != J)
            throw std::invalid_argument("need one cap and one covariance row per primary");
        if (weights.size() != K)
            throw std::invalid_argument("need one weight per destination");

        AllocationProblem prob;
        prob.caps = caps;
        prob.weights = weights;
        prob.gain.resize(K);
        for (Index k = 0; k < K; ++k)
        {
            cxd inner = (ch.h_s.row(k) * dirs.gbar[static_cast<size_t>(k)])(0, 0);
            prob.gain(k) = ch.symbol_power * std::norm(inner) / ch.noise_plus_pu_power(k);
        }
        prob.leak.resize(J, K);
        for (Index j = 0; j < J; ++j)
            for (Index k = 0; k < K; ++k)
            {
                const VecC &g = dirs.gbar[static_cast<size_t>(k)];
                double q = (g.adjoint() *
                            cov.R[static_cast<size_t>(j)][static_cast<size_t>(k)] * g)(0, 0)
                               .real();
                prob.leak(j, k) = std::max(0.0, q);
            }
        return prob;
    }

    Allocation opa_allocate(const AllocationProblem &prob)
    {
        std::vector<std::string> violations = validate(prob);
        if (!violations.empty())
            throw std::invalid_argument("invalid allocation problem: " + violations.front());

        const Index J = prob.caps.size();
        const Index K = prob.gain.size();

        // a zero cap silences every beam that leaks into it and then drops out
        std::vector<char> eff(static_cast<size_t>(K), 0);
        for (Index k = 0; k < K; ++k)
        {
            bool forced = false;
            for (Index j = 0; j < J; ++j)
                if (prob.caps(j) == 0.0 && prob.leak(j, k) > 0.0)
                    forced = true;
            eff[static_cast<size_t>(k)] =
                !forced && prob.gain(k) > 0.0 && prob.weights(k) > 0.0;
        }
        std::vector<Index> rows;
        for (Index j = 0; j < J; ++j)
            if (prob.caps(j) > 0.0)
                rows.push_back(j);

        Allocation out;
        out.alpha = VecR::Zero(K);
        out.lambdas = VecR::Zero(J);
        if (std::none_of(eff.begin(), eff.end(), [](char c) { return c != 0; }))
            return out;

        MatR lk = prob.leak;
        for (Index j : rows)
            lk.row(j) /= prob.caps(j);

        double best_residual = std::numeric_limits<double>::infinity();
        const Index Jr = static_cast<Index>(rows.size());
        for (Index size = 1; size <= Jr; ++size)
        {
            std::vector<Index> comb(static_cast<size_t>(size));
            std::iota(comb.begin(), comb.end(), 0);
            while (true)
            {
                std::vector<Index> subset;
                subset.reserve(comb.size());
                for (Index c : comb)
                    subset.push_back(rows[static_cast<size_t>(c)]);

                bool structural_reject = false;
                for (Index k = 0; k < K && !structural_reject; ++k)
                {
                    if (!eff[static_cast<size_t>(k)])
                        continue;
                    bool any = false;
                    for (Index j : subset)
                        if (lk(j, k) > 0.0)
                            any = true;
                    if (!any)
                        structural_reject = true;
                }
                if (!structural_reject)
                {
                    SubsetSolver solver{lk, prob.gain, prob.weights, eff, subset};
                    VecR mu;
                    if (solver.solve(mu) && (mu.array() >= 0.0).all())
                    {
                        VecR alpha;
                        if (water_fill(lk, prob.gain, prob.weights, eff, subset, mu, alpha))
                        {
                            double worst = 0.0;
                            for (Index j : rows)
                            {
                                double v = (prob.leak.row(j) * alpha)(0) / prob.caps(j) - 1.0;
                                worst = std::max(worst, v);
                            }
                            if (worst <= kFeasSlack)
                            {
                                out.alpha = alpha;
                                out.active_set = subset;
                                for (size_t t = 0; t < subset.size(); ++t)
                                    out.lambdas(subset[t]) =
                                        mu(static_cast<Index>(t)) / prob.caps(subset[t]);
                                return out;
                            }
                            best_residual = std::min(best_residual, worst);
                        }
                    }
                }

                // advance to the next combination in lexicographic order
                Index i = size - 1;
                while (i >= 0 && comb[static_cast<size_t>(i)] == Jr - size + i)
                    --i;
                if (i < 0)
                    break;
                ++comb[static_cast<size_t>(i)];
                for (Index p = i + 1; p < size; ++p)
                    comb[static_cast<size_t>(p)] = comb[static_cast<size_t>(p - 1)] + 1;
            }
        }
        throw InfeasibleAllocationError(best_residual,
                                        "no active constraint set yields a feasible point");
    }

    Allocation lcpa_allocate(const AllocationProblem &prob)
    {
        std::vector<std::string> violations = validate(prob);
        if (!violations.empty())
            throw std::invalid_argument("invalid allocation problem: " + violations.front());

        const Index J = prob.caps.size();
        const Index K = prob.gain.size();
        const double inf = std::numeric_limits<double>::infinity();
        MatR cand = MatR::Constant(J, K, inf);

        // beams leaking into a zero cap can never carry power, so no row may
        // spend waterline budget on them
        std::vector<char> forced(static_cast<size_t>(K), 0);
        for (Index j = 0; j < J; ++j)
            if (prob.caps(j) == 0.0)
                for (Index k = 0; k < K; ++k)
                    if (prob.leak(j, k) > 0.0)
                        forced[static_cast<size_t>(k)] = 1;

        for (Index j = 0; j < J; ++j)
        {
            if (prob.caps(j) == 0.0)
            {
                for (Index k = 0; k < K; ++k)
                    if (prob.leak(j, k) > 0.0)
                        cand(j, k) = 0.0;
                continue;
            }
            VecR lkn = prob.leak.row(j).transpose() / prob.caps(j);
            std::vector<Index> active;
            for (Index k = 0; k < K; ++k)
                if (!forced[static_cast<size_t>(k)] && lkn(k) > 0.0 &&
                    prob.gain(k) > 0.0 && prob.weights(k) > 0.0)
                    active.push_back(k);
            if (active.empty())
                continue;

            auto excess = [&](double mu) {
                double s = 0.0;
                for (Index k : active)
                    s += lkn(k) *
                         std::max(0.0, prob.weights(k) / (mu * lkn(k)) - 1.0 / prob.gain(k));
                return s - 1.0;
            };
            double lo = 1.0, hi = 1.0;
            if (excess(1.0) > 0.0)
            {
                while (excess(hi) > 0.0)
                {
                    hi *= 2.0;
                    if (hi > 1e80)
                        throw InfeasibleAllocationError(inf, "cap bisection bracket failed");
                }
            }
            else
            {
                while (excess(lo) <= 0.0)
                {
                    lo /= 2.0;
                    if (lo < 1e-80)
                        throw InfeasibleAllocationError(inf, "cap bisection bracket failed");
                }
            }
            for (int i = 0; i < 200; ++i)
            {
                double mid = std::sqrt(lo * hi);
                if (excess(mid) > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            double mu = std::sqrt(lo * hi);
            for (Index k : active)
                cand(j, k) =
                    std::max(0.0, prob.weights(k) / (mu * lkn(k)) - 1.0 / prob.gain(k));
        }

        Allocation out;
        out.lambdas = VecR::Zero(J);
        out.alpha.resize(K);
        for (Index k = 0; k < K; ++k)
        {
            double a = cand.col(k).minCoeff();
            out.alpha(k) = std::isfinite(a) ? a : 0.0;
            if (prob.gain(k) == 0.0 || prob.weights(k) == 0.0)
                out.alpha(k) = 0.0;
        }
        for (Index j = 0; j < J; ++j)
        {
            if (prob.caps(j) <= 0.0)
                continue;
            double used = (prob.leak.row(j) * out.alpha)(0);
            if (std::abs(used - prob.caps(j)) <= 1e-9 * prob.caps(j))
                out.active_set.push_back(j);
        }
        return out;
    }

    double weighted_sum_rate(const AllocationProblem &prob, const VecR &alpha)
    {
        if (alpha.size() != prob.gain.size())
            throw std::invalid_argument("alpha must have one entry per beam");
        double total = 0.0;
        for (Index k = 0; k < prob.gain.size(); ++k)
            total += prob.weights(k) * std::log1p(prob.gain(k) * alpha(k));
        return total / std::numbers::ln2;
    }

    double kkt_residual(const AllocationProblem &prob, const Allocation &alloc)
    {
        const Index J = prob.caps.size();
        const Index K = prob.gain.size();
        const double tiny = 1e-300;
        double worst = 0.0;

        for (Index k = 0; k < K; ++k)
        {
            if (alloc.alpha(k) < 0.0)
                return 1.0;
            bool forced = false;
            for (Index j = 0; j < J; ++j)
                if (prob.caps(j) == 0.0 && prob.leak(j, k) > 0.0)
                    forced = true;
            if (forced || prob.gain(k) == 0.0 || prob.weights(k) == 0.0)
                continue;
            double grad = prob.weights(k) * prob.gain(k) /
                          (1.0 + prob.gain(k) * alloc.alpha(k));
            double pressure = (alloc.lambdas.transpose() * prob.leak.col(k))(0);
            double scale = std::max({grad, pressure, tiny});
            double res = alloc.alpha(k) > 0.0 ? std::abs(grad - pressure) / scale
                                              : std::max(0.0, grad - pressure) / scale;
            worst = std::max(worst, res);
        }

        for (Index j = 0; j < J; ++j)
        {
            if (alloc.lambdas(j) < 0.0)
                return 1.0;
            double used = (prob.leak.row(j) * alloc.alpha)(0);
            if (prob.caps(j) == 0.0)
            {
                if (used > 0.0)
                    worst = 1.0;
                continue;
            }
            worst = std::max(worst, (used - prob.caps(j)) / prob.caps(j));
            if (alloc.lambdas(j) > 0.0)
                worst = std::max(worst, std::abs(used - prob.caps(j)) / prob.caps(j));
        }
        return worst;
    }
} // namespace asynchbf
