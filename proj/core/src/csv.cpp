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

#include "asynchbf/csv.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace asynchbf
{
    std::string format_double(double v)
    {
        char buf[64];
        std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    }

    std::string trials_csv(const CampaignResult &result, Index num_primaries,
                           Index num_destinations)
    {
        std::ostringstream out;
        out << "trial_id,method,sum_rate_actual,sum_rate_approx,outage";
        for (Index j = 0; j < num_primaries; ++j)
            out << ",p_asynch_" << (j + 1);
        for (Index k = 0; k < num_destinations; ++k)
            out << ",alpha_" << (k + 1);
        out << ",seed\n";
        for (const TrialRow &row : result.rows)
        {
            out << row.trial_id << ',' << method_name(row.method) << ','
                << format_double(row.sum_rate_actual) << ','
                << format_double(row.sum_rate_approx) << ',' << (row.outage ? 1 : 0);
            for (Index j = 0; j < num_primaries; ++j)
                out << ',' << format_double(row.p_asynch(j));
            for (Index k = 0; k < num_destinations; ++k)
                out << ',' << format_double(row.alpha(k));
            out << ',' << row.seed << "\n";
        }
        return out.str();
    }

    std::string summary_csv(const std::vector<CampaignResult> &results, Index num_primaries)
    {
        std::ostringstream out;
        out << "symbol_power_db,method,trials,failures,mean_credited_rate,ci95_credited_rate,"
               "mean_sum_rate_approx";
        for (Index j = 0; j < num_primaries; ++j)
            out << ",mean_p_asynch_" << (j + 1);
        for (Index j = 0; j < num_primaries; ++j)
            out << ",violation_prob_" << (j + 1);
        out << ",max_kkt_residual\n";
        for (const CampaignResult &result : results)
            for (const MethodSummary &s : result.summary)
            {
                out << format_double(result.symbol_power_db) << ',' << method_name(s.method)
                    << ',' << s.trials << ',' << s.failures << ','
                    << format_double(s.mean_credited_rate) << ','
                    << format_double(s.ci95_credited_rate) << ','
                    << format_double(s.mean_sum_rate_approx);
                for (Index j = 0; j < num_primaries; ++j)
                    out << ',' << format_double(s.mean_p_asynch(j));
                for (Index j = 0; j < num_primaries; ++j)
                    out << ',' << format_double(s.violation_prob(j));
                out << ',' << format_double(s.max_kkt_residual) << "\n";
            }
        return out.str();
    }

    std::string summary_table(const CampaignResult &result)
    {
        std::ostringstream out;
        out << "symbol power " << format_double(result.symbol_power_db) << " dB, "
            << result.trials << " trials, seed " << result.master_seed << "\n";
        out << std::left << std::setw(14) << "method" << std::right << std::setw(16)
            << "credited rate" << std::setw(12) << "ci95" << std::setw(14) << "approx rate"
            << std::setw(10) << "failures" << std::setw(12) << "viol(max)" << "\n";
        for (const MethodSummary &s : result.summary)
        {
            double viol = s.violation_prob.size() > 0 ? s.violation_prob.maxCoeff() : 0.0;
            out << std::left << std::setw(14) << method_name(s.method) << std::right
                << std::setw(16) << std::setprecision(6) << std::fixed << s.mean_credited_rate
                << std::setw(12) << s.ci95_credited_rate << std::setw(14)
                << s.mean_sum_rate_approx << std::setw(10) << s.failures << std::setw(12)
                << std::setprecision(4) << viol << "\n";
            out.unsetf(std::ios::fixed);
            out << std::setprecision(6);
        }
        return out.str();
    }

    void write_file(const std::string &path, const std::string &content)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open for writing: " + path);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw std::runtime_error("write failed: " + path);
    }
} // namespace asynchbf
