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

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "asynchbf/config.hpp"
#include "asynchbf/csv.hpp"
#include "asynchbf/simulation.hpp"

namespace fs = std::filesystem;
using namespace asynchbf;

namespace
{
    struct StudyPreset
    {
        std::vector<Method> methods;
        bool force_boundary = false;
    };

    // Canned method lists for the standard studies; each sweeps the transmit
    // power grid and tags its output files with the study name.
    const std::map<std::string, StudyPreset> &study_presets()
    {
        static const std::map<std::string, StudyPreset> presets = {
            {"interference", {{Method::LbfOpa, Method::Zfbf}, false}},
            {"rates",
             {{Method::LbfOpa, Method::LbfLcpa, Method::Zfbf, Method::SingleCcrn}, false}},
            {"approximation", {{Method::LbfOpa}, false}},
            {"robust-err", {{Method::LbfErr, Method::RlbfErr}, true}},
            {"robust-stat", {{Method::RlbfStat}, false}},
            {"selection", {{Method::LbfOpa, Method::Selection}, false}},
        };
        return presets;
    }

    std::vector<double> study_power_grid()
    {
        std::vector<double> grid;
        for (int p = 0; p <= 50; p += 5)
            grid.push_back(static_cast<double>(p));
        return grid;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Monte Carlo simulator for cooperative underlay broadcasting"};

    std::string config_path;
    std::string out_dir = "out";
    std::string study;
    std::vector<std::string> method_names;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    bool validate_only = false;

    app.add_option("--config", config_path, "Scenario file")->required();
    app.add_option("--out-dir", out_dir, "Directory for the CSV tables");
    app.add_option("--methods", method_names, "Override the configured method list");
    app.add_option("--trials", trials, "Override the configured trial count");
    app.add_option("--seed", seed, "Override the configured master seed");
    app.add_flag("--validate-only", validate_only, "Check the scenario file and exit");
    app.add_option("--study", study, "Preset method list and power sweep")
        ->check(CLI::IsMember({"interference", "rates", "approximation", "robust-err",
                               "robust-stat", "selection"}));

    CLI11_PARSE(app, argc, argv);

    std::string text;
    try
    {
        std::ifstream in(config_path, std::ios::binary);
        if (!in)
        {
            std::cerr << "cannot read config file: " << config_path << "\n";
            return 1;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    catch (const std::exception &e)
    {
        std::cerr << e.what() << "\n";
        return 1;
    }

    ParseOutcome parsed = parse_config(text);
    if (!parsed.config)
    {
        for (const std::string &v : parsed.violations)
            std::cerr << v << "\n";
        return 1;
    }
    if (validate_only)
    {
        std::cout << "ok: " << config_path << "\n";
        return 0;
    }

    ScenarioConfig cfg = std::move(*parsed.config);
    std::string tag = "run";
    if (!study.empty())
    {
        const StudyPreset &preset = study_presets().at(study);
        cfg.methods = preset.methods;
        cfg.symbol_power_db = study_power_grid();
        if (preset.force_boundary)
            cfg.error_placement = ErrorPlacement::Boundary;
        tag = study;
    }
    if (!method_names.empty())
    {
        cfg.methods.clear();
        for (const std::string &name : method_names)
        {
            std::optional<Method> m = parse_method(name);
            if (!m)
            {
                std::cerr << "campaign.methods: unknown method '" << name << "'\n";
                return 1;
            }
            cfg.methods.push_back(*m);
        }
    }
    if (trials > 0)
        cfg.trials = static_cast<std::size_t>(trials);
    if (app.count("--seed") > 0)
        cfg.seed = seed;
    if (const char *env = std::getenv("ASYNCHBF_WORKERS"))
    {
        char *end = nullptr;
        unsigned long w = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0')
            cfg.workers = static_cast<std::size_t>(w);
    }

    try
    {
        fs::create_directories(out_dir);
        std::vector<CampaignResult> results;
        results.reserve(cfg.symbol_power_db.size());
        for (double pdb : cfg.symbol_power_db)
        {
            CampaignResult result = run_campaign(cfg, pdb, cfg.methods);
            std::cout << summary_table(result) << "\n";
            fs::path trials_path =
                fs::path(out_dir) / ("trials_" + tag + "_pdb" + format_double(pdb) + ".csv");
            write_file(trials_path.string(),
                       trials_csv(result, cfg.topology.num_primaries(),
                                  cfg.topology.num_destinations()));
            results.push_back(std::move(result));
        }
        fs::path summary_path = fs::path(out_dir) / ("summary_" + tag + ".csv");
        write_file(summary_path.string(), summary_csv(results, cfg.topology.num_primaries()));
    }
    catch (const std::exception &e)
    {
        std::cerr << "fatal: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
