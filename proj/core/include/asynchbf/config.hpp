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

#ifndef ASYNCHBF_CONFIG_HPP
#define ASYNCHBF_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asynchbf/channel.hpp"
#include "asynchbf/geometry.hpp"
#include "asynchbf/types.hpp"

namespace asynchbf
{
    enum class Method
    {
        LbfOpa,     // leakage directions + optimal allocation, perfect CSI
        LbfLcpa,    // leakage directions + low-complexity allocation
        Zfbf,       // null-space directions, total power matched to lbf-opa
        SingleCcrn, // best single node, shared stream
        Selection,  // exhaustive node-subset search
        LbfErr,     // plain design run on erroneous channel estimates
        RlbfErr,    // robust caps against bounded estimation error
        RlbfStat    // statistical CSI with probabilistic caps
    };

    const std::vector<Method> &all_methods();
    std::string method_name(Method m);
    std::optional<Method> parse_method(const std::string &name);

    // Fully validated scenario description; see docs/config_format.md for the
    // on-disk grammar. All list lengths are consistent with the topology by
    // the time parse_config returns a value.
    struct ScenarioConfig
    {
        Topology topology;
        double symbol_duration = 0.0;
        double slot_duration = 0.0;
        Index symbols_per_slot = 0; // slot_duration / symbol_duration, exact
        Index reference_sd = 0;
        FadingSpec fading;
        VecR gamma_th;           // [J] interference caps, Watts
        VecR weights;            // [K]
        double noise_floor = 0.0; // Watts
        VecR pu_interference_db; // [K] dB relative to noise_floor
        double epsilon = 0.0;    // squared radius of the estimation error ball
        VecR psi_c;              // [J]
        VecR epsilon_viol;       // [J]
        MatR omega;              // [J x L]; empty means derive from path loss
        ErrorPlacement error_placement = ErrorPlacement::Boundary;
        std::vector<Method> methods;
        std::vector<double> symbol_power_db; // sweep grid, dB re unit gain
        std::size_t trials = 0;
        std::uint64_t seed = 1;
        std::size_t selection_limit = 12;
        std::size_t workers = 1; // 0 = hardware concurrency
        std::optional<double> regularization;
        std::optional<CorrelationSet> explicit_beta;

        // Per-destination sigma^2 = noise_floor * (1 + 10^(dB/10)).
        VecR sigma2() const;
        // Mean power gains for the statistical model: explicit omega if
        // given, otherwise the path-loss values.
        MatR effective_omega() const;
    };

    struct ParseOutcome
    {
        std::optional<ScenarioConfig> config;
        std::vector<std::string> violations; // all of them, each naming its key
    };

    ParseOutcome parse_config(const std::string &text);

    // Canonical text form; parse_config(serialize_config(c)) reproduces c.
    std::string serialize_config(const ScenarioConfig &cfg);

    struct ConfigError : std::runtime_error
    {
        std::vector<std::string> violations;
        explicit ConfigError(std::vector<std::string> v);
    };

    // Convenience for tools: reads the file, throws ConfigError on any violation.
    ScenarioConfig load_config_file(const std::string &path);
} // namespace asynchbf

#endif
