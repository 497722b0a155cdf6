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

#ifndef ASYNCHBF_CSV_HPP
#define ASYNCHBF_CSV_HPP

#include <string>
#include <vector>

#include "asynchbf/simulation.hpp"

namespace asynchbf
{
    // Shortest round-trip decimal form ("%.17g"); the CSV contract is
    // byte-identical reruns, so all doubles go through this one formatter.
    std::string format_double(double v);

    // Per-trial rows; see docs/csv_schema.md for the column contract.
    std::string trials_csv(const CampaignResult &result, Index num_primaries,
                           Index num_destinations);

    // Per-method summaries, one row per (symbol power, method).
    std::string summary_csv(const std::vector<CampaignResult> &results, Index num_primaries);

    // Human-readable per-method table for standard output.
    std::string summary_table(const CampaignResult &result);

    void write_file(const std::string &path, const std::string &content);
} // namespace asynchbf

#endif
