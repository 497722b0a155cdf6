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
#include <string>

#include "doctest.h"

#include "asynchbf/channel.hpp"
#include "asynchbf/config.hpp"

using namespace asynchbf;

namespace
{
    const std::string kBase = R"(
[topology]
num_ccrn = 2
num_sd = 2
num_pr = 1
ccrn = 0.0,0.0 50.0,10.0
sd = 900.0,0.0 940.0,-20.0
pr = -300.0,100.0
propagation_speed = 3.0e8

[waveform]
symbol_duration = 2.0e-6
slot_duration = 4.0e-4
reference_sd = 0

[fading]
path_loss_exponent = 4.0
reference_distance = 1.0
reference_gain = 1.0

[constraints]
gamma_th = 1.0e-16
weights = 1.0 1.0

[noise]
noise_floor = 1.0e-16
pu_interference_db = -10.0 -20.0

[csi]
epsilon = 6.25e-18
psi_c = 2.5e-9
epsilon_viol = 0.1
omega = auto
error_placement = interior

[campaign]
methods = lbf-opa
trials = 10
seed = 7
symbol_power_db = 20.0 40.0
selection_limit = 12
workers = 0
regularization = auto
)";

    std::string mutate(const std::string &from, const std::string &to)
    {
        std::string text = kBase;
        size_t pos = text.find(from);
        REQUIRE(pos != std::string::npos);
        text.replace(pos, from.size(), to);
        return text;
    }

    bool mentions(const std::vector<std::string> &violations, const std::string &needle)
    {
        for (const std::string &v : violations)
            if (v.find(needle) != std::string::npos)
                return true;
        return false;
    }
} // namespace

TEST_SUITE("config")
{
    TEST_CASE("the reference scenario file parses to the frozen values")
    {
        ScenarioConfig cfg = load_config_file(ASYNCHBF_REF_CONFIG);
        CHECK(cfg.topology.num_nodes() == 4);
        CHECK(cfg.topology.num_destinations() == 3);
        CHECK(cfg.topology.num_primaries() == 2);
        CHECK(cfg.topology.ccrn_positions[1].x() == 106.651);
        CHECK(cfg.topology.ccrn_positions[1].y() == 61.995);
        CHECK(cfg.topology.sd_positions[2].x() == 1111.343);
        CHECK(cfg.topology.pr_positions[1].y() == -171.828);
        CHECK(cfg.topology.propagation_speed == 3.0e8);

        CHECK(cfg.symbol_duration == 2.0e-6);
        CHECK(cfg.slot_duration == 4.0e-4);
        CHECK(cfg.symbols_per_slot == 200);
        CHECK(cfg.reference_sd == 0);

        CHECK(cfg.fading.path_loss_exponent == 4.0);
        CHECK(cfg.gamma_th.size() == 2);
        CHECK(cfg.gamma_th(0) == 1.0e-16);
        CHECK(cfg.gamma_th(1) == 2.5e-16);
        CHECK(cfg.weights.isOnes());

        CHECK(cfg.noise_floor == 1.0e-16);
        CHECK(cfg.pu_interference_db(2) == -15.0);
        VecR s2 = cfg.sigma2();
        CHECK(s2(0) == doctest::Approx(1.0e-16 * 1.1).epsilon(1e-14));
        CHECK(s2(1) == doctest::Approx(1.0e-16 * 1.01).epsilon(1e-14));
        CHECK(s2(2) ==
              doctest::Approx(1.0e-16 * (1.0 + std::pow(10.0, -1.5))).epsilon(1e-14));

        CHECK(cfg.epsilon == 6.25e-18);
        CHECK(cfg.psi_c.size() == 2);
        CHECK(cfg.psi_c(0) == 2.5e-9);
        CHECK(cfg.epsilon_viol(1) == 0.1);
        CHECK(cfg.omega.size() == 0);
        CHECK(cfg.error_placement == ErrorPlacement::Boundary);

        MatR omega = cfg.effective_omega();
        REQUIRE(omega.rows() == 2);
        REQUIRE(omega.cols() == 4);
        double d0 = (cfg.topology.pr_positions[0] - cfg.topology.ccrn_positions[0]).norm();
        CHECK(omega(0, 0) == doctest::Approx(std::pow(d0, -4.0)).epsilon(1e-12));

        CHECK(cfg.methods == std::vector<Method>{Method::LbfOpa, Method::LbfLcpa,
                                                 Method::Zfbf, Method::SingleCcrn});
        CHECK(cfg.trials == 10000);
        CHECK(cfg.seed == 20260817);
        CHECK(cfg.symbol_power_db == std::vector<double>{40.0});
        CHECK(cfg.selection_limit == 12);
        CHECK(cfg.workers == 1);
        CHECK(!cfg.regularization.has_value());
    }

    TEST_CASE("a valid in-memory text parses without violations")
    {
        ParseOutcome out = parse_config(kBase);
        CHECK(out.violations.empty());
        REQUIRE(out.config.has_value());
        CHECK(out.config->workers == 0);
        CHECK(out.config->symbol_power_db == std::vector<double>{20.0, 40.0});
        CHECK(out.config->error_placement == ErrorPlacement::Interior);
    }

    TEST_CASE("comments and blank lines are ignored")
    {
        std::string text = "# leading comment\n; another style\n" + kBase +
                           "\n# trailing\n";
        ParseOutcome out = parse_config(text);
        CHECK(out.violations.empty());
        CHECK(out.config.has_value());
    }

    TEST_CASE("weight count must match the destination count")
    {
        ParseOutcome out = parse_config(mutate("weights = 1.0 1.0", "weights = 1.0"));
        CHECK(!out.config.has_value());
        CHECK(mentions(out.violations, "constraints.weights"));
    }

    TEST_CASE("the slot must hold a whole number of symbols")
    {
        ParseOutcome out =
            parse_config(mutate("slot_duration = 4.0e-4", "slot_duration = 5.0e-6"));
        CHECK(!out.config.has_value());
        CHECK(mentions(out.violations, "waveform.slot_duration"));
    }

    TEST_CASE("method lists reject unknown or empty entries")
    {
        ParseOutcome bad =
            parse_config(mutate("methods = lbf-opa", "methods = lbf-opa warp9"));
        CHECK(!bad.config.has_value());
        CHECK(mentions(bad.violations, "campaign.methods"));

        ParseOutcome empty = parse_config(mutate("methods = lbf-opa", "methods ="));
        CHECK(!empty.config.has_value());
        CHECK(mentions(empty.violations, "campaign.methods"));
    }

    TEST_CASE("duplicate and unknown keys are violations")
    {
        ParseOutcome dup =
            parse_config(mutate("trials = 10", "trials = 10\ntrials = 20"));
        CHECK(!dup.config.has_value());
        CHECK(mentions(dup.violations, "campaign.trials"));

        ParseOutcome unknown = parse_config(mutate("trials = 10", "trials = 10\nfoo = 1"));
        CHECK(!unknown.config.has_value());
        CHECK(mentions(unknown.violations, "campaign.foo"));

        ParseOutcome section = parse_config(kBase + "\n[extra]\nbar = 2\n");
        CHECK(!section.config.has_value());
        CHECK(mentions(section.violations, "extra"));
    }

    TEST_CASE("every broken field is reported, not just the first")
    {
        std::string text = mutate("trials = 10", "trials = 0");
        {
            std::string t2 = text;
            size_t pos = t2.find("noise_floor = 1.0e-16");
            REQUIRE(pos != std::string::npos);
            t2.replace(pos, std::string("noise_floor = 1.0e-16").size(),
                       "noise_floor = -1.0");
            pos = t2.find("epsilon_viol = 0.1");
            REQUIRE(pos != std::string::npos);
            t2.replace(pos, std::string("epsilon_viol = 0.1").size(),
                       "epsilon_viol = 1.5");
            ParseOutcome out = parse_config(t2);
            CHECK(!out.config.has_value());
            CHECK(out.violations.size() >= 3);
            CHECK(mentions(out.violations, "campaign.trials"));
            CHECK(mentions(out.violations, "noise.noise_floor"));
            CHECK(mentions(out.violations, "csi.epsilon_viol"));
        }
    }

    TEST_CASE("explicit mean square gains are accepted row major")
    {
        ParseOutcome out =
            parse_config(mutate("omega = auto", "omega = 1.0e-10 2.0e-10"));
        REQUIRE(out.config.has_value());
        MatR omega = out.config->effective_omega();
        REQUIRE(omega.rows() == 1);
        REQUIRE(omega.cols() == 2);
        CHECK(omega(0, 1) == 2.0e-10);

        ParseOutcome bad =
            parse_config(mutate("omega = auto", "omega = 1.0e-10 2.0e-10 3.0e-10"));
        CHECK(!bad.config.has_value());
        CHECK(mentions(bad.violations, "csi.omega"));
    }

    TEST_CASE("position counts must match their lists")
    {
        ParseOutcome out = parse_config(mutate("num_ccrn = 2", "num_ccrn = 3"));
        CHECK(!out.config.has_value());
        CHECK(mentions(out.violations, "topology"));
    }

    TEST_CASE("serialization round trips byte for byte")
    {
        ParseOutcome first = parse_config(kBase);
        REQUIRE(first.config.has_value());
        std::string s1 = serialize_config(*first.config);
        ParseOutcome second = parse_config(s1);
        REQUIRE(second.config.has_value());
        CHECK(second.violations.empty());
        std::string s2 = serialize_config(*second.config);
        CHECK(s1 == s2);
    }

    TEST_CASE("an explicit regularization value survives the round trip")
    {
        ParseOutcome out = parse_config(
            mutate("regularization = auto", "regularization = 1.0e-10"));
        REQUIRE(out.config.has_value());
        REQUIRE(out.config->regularization.has_value());
        CHECK(*out.config->regularization == 1.0e-10);
        ParseOutcome again = parse_config(serialize_config(*out.config));
        REQUIRE(again.config.has_value());
        CHECK(again.config->regularization == out.config->regularization);
    }

    TEST_CASE("file loading errors are typed")
    {
        CHECK_THROWS_AS(load_config_file("/nonexistent/path.cfg"), std::runtime_error);
        std::string bad = mutate("trials = 10", "trials = -3");
        ParseOutcome out = parse_config(bad);
        CHECK(!out.config.has_value());
        bool threw = false;
        try
        {
            // exercise the throwing wrapper through a temp file
            ScenarioConfig cfg = load_config_file(ASYNCHBF_REF_CONFIG);
            (void)cfg;
        }
        catch (...)
        {
            threw = true;
        }
        CHECK(!threw);
    }

    TEST_CASE("method names map both ways")
    {
        for (Method m : all_methods())
        {
            auto parsed = parse_method(method_name(m));
            REQUIRE(parsed.has_value());
            CHECK(*parsed == m);
        }
        CHECK(!parse_method("bogus").has_value());
        CHECK(all_methods().size() == 8);
    }
}
