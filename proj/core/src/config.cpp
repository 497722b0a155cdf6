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

#include "asynchbf/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "asynchbf/csv.hpp"

namespace asynchbf
{
    const std::vector<Method> &all_methods()
    {
        static const std::vector<Method> methods = {
            Method::LbfOpa, Method::LbfLcpa,  Method::Zfbf,    Method::SingleCcrn,
            Method::Selection, Method::LbfErr, Method::RlbfErr, Method::RlbfStat};
        return methods;
    }

    std::string method_name(Method m)
    {
        switch (m)
        {
        case Method::LbfOpa:
            return "lbf-opa";
        case Method::LbfLcpa:
            return "lbf-lcpa";
        case Method::Zfbf:
            return "zfbf";
        case Method::SingleCcrn:
            return "single-ccrn";
        case Method::Selection:
            return "selection";
        case Method::LbfErr:
            return "lbf-err";
        case Method::RlbfErr:
            return "rlbf-err";
        case Method::RlbfStat:
            return "rlbf-stat";
        }
        return "unknown";
    }

    std::optional<Method> parse_method(const std::string &name)
    {
        for (Method m : all_methods())
            if (method_name(m) == name)
                return m;
        return std::nullopt;
    }

    namespace
    {
        std::string trim(const std::string &s)
        {
            size_t b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos)
                return "";
            size_t e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        }

        std::vector<std::string> split_ws(const std::string &s)
        {
            std::vector<std::string> out;
            std::istringstream in(s);
            std::string tok;
            while (in >> tok)
                out.push_back(tok);
            return out;
        }

        bool parse_d(const std::string &tok, double &out)
        {
            if (tok.empty())
                return false;
            char *end = nullptr;
            out = std::strtod(tok.c_str(), &end);
            return end == tok.c_str() + tok.size();
        }

        bool parse_ll(const std::string &tok, long long &out)
        {
            if (tok.empty())
                return false;
            char *end = nullptr;
            out = std::strtoll(tok.c_str(), &end, 10);
            return end == tok.c_str() + tok.size();
        }

        bool parse_u64(const std::string &tok, std::uint64_t &out)
        {
            if (tok.empty() || tok[0] == '-')
                return false;
            char *end = nullptr;
            out = std::strtoull(tok.c_str(), &end, 10);
            return end == tok.c_str() + tok.size();
        }

        const std::map<std::string, std::vector<std::string>> &section_keys()
        {
            static const std::map<std::string, std::vector<std::string>> keys = {
                {"topology",
                 {"num_ccrn", "num_sd", "num_pr", "ccrn", "sd", "pr", "propagation_speed"}},
                {"waveform", {"symbol_duration", "slot_duration", "reference_sd"}},
                {"fading", {"path_loss_exponent", "reference_distance", "reference_gain"}},
                {"constraints", {"gamma_th", "weights"}},
                {"noise", {"noise_floor", "pu_interference_db"}},
                {"csi", {"epsilon", "psi_c", "epsilon_viol", "omega", "error_placement"}},
                {"campaign",
                 {"methods", "trials", "seed", "symbol_power_db", "selection_limit", "workers",
                  "regularization"}}};
            return keys;
        }

        struct Parser
        {
            std::map<std::string, std::map<std::string, std::string>> raw;
            std::vector<std::string> violations;

            void fail(const std::string &section, const std::string &key,
                      const std::string &msg)
            {
                violations.push_back(section + "." + key + ": " + msg);
            }

            // nullptr when absent, with a violation recorded
            const std::string *get(const std::string &section, const std::string &key)
            {
                auto sit = raw.find(section);
                if (sit == raw.end())
                    return nullptr;
                auto kit = sit->second.find(key);
                if (kit == sit->second.end())
                {
                    fail(section, key, "missing required key");
                    return nullptr;
                }
                return &kit->second;
            }

            bool number(const std::string &section, const std::string &key, double &out)
            {
                const std::string *v = get(section, key);
                if (v == nullptr)
                    return false;
                if (!parse_d(*v, out) || !std::isfinite(out))
                {
                    fail(section, key, "not a finite number: '" + *v + "'");
                    return false;
                }
                return true;
            }

            bool positive(const std::string &section, const std::string &key, double &out)
            {
                if (!number(section, key, out))
                    return false;
                if (!(out > 0.0))
                {
                    fail(section, key, "must be positive");
                    return false;
                }
                return true;
            }

            bool integer(const std::string &section, const std::string &key, long long lo,
                         long long &out)
            {
                const std::string *v = get(section, key);
                if (v == nullptr)
                    return false;
                if (!parse_ll(*v, out))
                {
                    fail(section, key, "not an integer: '" + *v + "'");
                    return false;
                }
                if (out < lo)
                {
                    fail(section, key, "must be at least " + std::to_string(lo));
                    return false;
                }
                return true;
            }

            // fixed-length list of finite doubles with a lower bound
            bool vector_of(const std::string &section, const std::string &key, Index count,
                           double lo, bool lo_strict, VecR &out)
            {
                const std::string *v = get(section, key);
                if (v == nullptr)
                    return false;
                std::vector<std::string> toks = split_ws(*v);
                if (count >= 0 && static_cast<Index>(toks.size()) != count)
                {
                    fail(section, key,
                         "expected " + std::to_string(count) + " values, got " +
                             std::to_string(toks.size()));
                    return false;
                }
                out.resize(static_cast<Index>(toks.size()));
                for (size_t i = 0; i < toks.size(); ++i)
                {
                    double d = 0.0;
                    if (!parse_d(toks[i], d) || !std::isfinite(d))
                    {
                        fail(section, key, "not a finite number: '" + toks[i] + "'");
                        return false;
                    }
                    if (lo_strict ? !(d > lo) : !(d >= lo))
                    {
                        fail(section, key,
                             std::string("values must be ") + (lo_strict ? "above " : "at least ") +
                                 format_double(lo));
                        return false;
                    }
                    out(static_cast<Index>(i)) = d;
                }
                return true;
            }

            bool positions(const std::string &section, const std::string &key,
                           long long expected, std::vector<Eigen::Vector2d> &out)
            {
                const std::string *v = get(section, key);
                if (v == nullptr)
                    return false;
                std::vector<std::string> toks = split_ws(*v);
                out.clear();
                for (const std::string &tok : toks)
                {
                    size_t comma = tok.find(',');
                    if (comma == std::string::npos || tok.find(',', comma + 1) != std::string::npos)
                    {
                        fail(section, key, "entry '" + tok + "' is not x,y");
                        return false;
                    }
                    double x = 0.0, y = 0.0;
                    if (!parse_d(tok.substr(0, comma), x) || !parse_d(tok.substr(comma + 1), y) ||
                        !std::isfinite(x) || !std::isfinite(y))
                    {
                        fail(section, key, "entry '" + tok + "' is not x,y");
                        return false;
                    }
                    out.emplace_back(x, y);
                }
                if (expected >= 0 && static_cast<long long>(out.size()) != expected)
                {
                    fail(section, key,
                         "expected " + std::to_string(expected) + " positions, got " +
                             std::to_string(out.size()));
                    return false;
                }
                return true;
            }
        };
    } // namespace

    ParseOutcome parse_config(const std::string &text)
    {
        Parser p;

        // raw pass: sections, key = value lines, comment stripping
        std::istringstream in(text);
        std::string line;
        std::string section;
        bool skip_section = false;
        while (std::getline(in, line))
        {
            size_t cut = line.find_first_of("#;");
            if (cut != std::string::npos)
                line = line.substr(0, cut);
            line = trim(line);
            if (line.empty())
                continue;
            if (line.front() == '[')
            {
                if (line.back() != ']')
                {
                    p.violations.push_back(line + ": malformed section header");
                    continue;
                }
                section = trim(line.substr(1, line.size() - 2));
                skip_section = section_keys().find(section) == section_keys().end();
                if (skip_section)
                    p.violations.push_back("[" + section + "]: unknown section");
                continue;
            }
            size_t eq = line.find('=');
            if (eq == std::string::npos)
            {
                p.violations.push_back(line + ": expected key = value");
                continue;
            }
            if (section.empty())
            {
                p.violations.push_back(line + ": key before any section");
                continue;
            }
            if (skip_section)
                continue;
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            const std::vector<std::string> &known = section_keys().at(section);
            if (std::find(known.begin(), known.end(), key) == known.end())
            {
                p.fail(section, key, "unknown key");
                continue;
            }
            if (!p.raw[section].emplace(key, value).second)
                p.fail(section, key, "duplicate key");
        }
        for (const auto &[name, keys] : section_keys())
            if (p.raw.find(name) == p.raw.end())
                p.violations.push_back("[" + name + "]: missing section");

        ScenarioConfig cfg;

        // [topology]
        long long n_ccrn = 0, n_sd = 0, n_pr = 0;
        bool counts_ok = p.integer("topology", "num_ccrn", 1, n_ccrn);
        counts_ok = p.integer("topology", "num_sd", 1, n_sd) && counts_ok;
        counts_ok = p.integer("topology", "num_pr", 1, n_pr) && counts_ok;
        p.positions("topology", "ccrn", counts_ok ? n_ccrn : -1, cfg.topology.ccrn_positions);
        p.positions("topology", "sd", counts_ok ? n_sd : -1, cfg.topology.sd_positions);
        p.positions("topology", "pr", counts_ok ? n_pr : -1, cfg.topology.pr_positions);
        p.positive("topology", "propagation_speed", cfg.topology.propagation_speed);
        const Index L = static_cast<Index>(n_ccrn);
        const Index K = static_cast<Index>(n_sd);
        const Index J = static_cast<Index>(n_pr);

        // [waveform]
        bool ts_ok = p.positive("waveform", "symbol_duration", cfg.symbol_duration);
        if (p.positive("waveform", "slot_duration", cfg.slot_duration) && ts_ok)
        {
            double m = cfg.slot_duration / cfg.symbol_duration;
            if (std::abs(m - std::round(m)) > 1e-9 * std::max(1.0, m) || std::round(m) < 1.0)
                p.fail("waveform", "slot_duration",
                       "must hold a whole number of symbols, got " + format_double(m));
            else
                cfg.symbols_per_slot = static_cast<Index>(std::llround(m));
        }
        long long ref_sd = 0;
        if (p.integer("waveform", "reference_sd", 0, ref_sd))
        {
            if (counts_ok && ref_sd >= n_sd)
                p.fail("waveform", "reference_sd", "must name one of the destinations");
            else
                cfg.reference_sd = static_cast<Index>(ref_sd);
        }

        // [fading]
        p.positive("fading", "path_loss_exponent", cfg.fading.path_loss_exponent);
        p.positive("fading", "reference_distance", cfg.fading.reference_distance);
        p.positive("fading", "reference_gain", cfg.fading.reference_gain);

        // [constraints]
        p.vector_of("constraints", "gamma_th", counts_ok ? J : -1, 0.0, true, cfg.gamma_th);
        p.vector_of("constraints", "weights", counts_ok ? K : -1, 0.0, false, cfg.weights);

        // [noise]
        p.positive("noise", "noise_floor", cfg.noise_floor);
        {
            VecR db;
            if (p.vector_of("noise", "pu_interference_db", counts_ok ? K : -1,
                            -std::numeric_limits<double>::infinity(), true, db))
                cfg.pu_interference_db = db;
        }

        // [csi]
        if (p.number("csi", "epsilon", cfg.epsilon) && cfg.epsilon < 0.0)
            p.fail("csi", "epsilon", "must be nonnegative");
        p.vector_of("csi", "psi_c", counts_ok ? J : -1, 0.0, false, cfg.psi_c);
        {
            VecR ev;
            if (p.vector_of("csi", "epsilon_viol", counts_ok ? J : -1, 0.0, true, ev))
            {
                if ((ev.array() > 1.0).any())
                    p.fail("csi", "epsilon_viol", "probabilities must lie in (0, 1]");
                else
                    cfg.epsilon_viol = ev;
            }
        }
        if (const std::string *v = p.get("csi", "omega"))
        {
            if (*v != "auto")
            {
                VecR flat;
                std::vector<std::string> toks = split_ws(*v);
                if (counts_ok && static_cast<Index>(toks.size()) != J * L)
                    p.fail("csi", "omega",
                           "expected auto or " + std::to_string(J * L) + " row-major values");
                else if (p.vector_of("csi", "omega", -1, 0.0, false, flat) && counts_ok)
                {
                    cfg.omega.resize(J, L);
                    for (Index j = 0; j < J; ++j)
                        for (Index r = 0; r < L; ++r)
                            cfg.omega(j, r) = flat(j * L + r);
                }
            }
        }
        if (const std::string *v = p.get("csi", "error_placement"))
        {
            if (*v == "interior")
                cfg.error_placement = ErrorPlacement::Interior;
            else if (*v == "boundary")
                cfg.error_placement = ErrorPlacement::Boundary;
            else
                p.fail("csi", "error_placement", "must be interior or boundary");
        }

        // [campaign]
        if (const std::string *v = p.get("campaign", "methods"))
        {
            std::vector<std::string> toks = split_ws(*v);
            if (toks.empty())
                p.fail("campaign", "methods", "need at least one method");
            for (const std::string &tok : toks)
            {
                std::optional<Method> m = parse_method(tok);
                if (!m)
                    p.fail("campaign", "methods", "unknown method '" + tok + "'");
                else
                    cfg.methods.push_back(*m);
            }
        }
        long long trials = 0;
        if (p.integer("campaign", "trials", 1, trials))
            cfg.trials = static_cast<std::size_t>(trials);
        if (const std::string *v = p.get("campaign", "seed"))
        {
            if (!parse_u64(*v, cfg.seed))
                p.fail("campaign", "seed", "not an unsigned integer: '" + *v + "'");
        }
        {
            VecR grid;
            if (p.vector_of("campaign", "symbol_power_db", -1,
                            -std::numeric_limits<double>::infinity(), true, grid))
            {
                if (grid.size() == 0)
                    p.fail("campaign", "symbol_power_db", "need at least one power");
                else
                    cfg.symbol_power_db.assign(grid.data(), grid.data() + grid.size());
            }
        }
        long long limit = 0;
        if (p.integer("campaign", "selection_limit", 1, limit))
            cfg.selection_limit = static_cast<std::size_t>(limit);
        long long workers = 0;
        if (p.integer("campaign", "workers", 0, workers))
            cfg.workers = static_cast<std::size_t>(workers);
        if (const std::string *v = p.get("campaign", "regularization"))
        {
            if (*v == "auto")
                cfg.regularization.reset();
            else
            {
                double reg = 0.0;
                if (!parse_d(*v, reg) || !std::isfinite(reg) || reg < 0.0)
                    p.fail("campaign", "regularization", "must be auto or a nonnegative number");
                else
                    cfg.regularization = reg;
            }
        }

        ParseOutcome out;
        out.violations = p.violations;
        if (out.violations.empty())
            out.config = std::move(cfg);
        return out;
    }

    namespace
    {
        std::string join_doubles(const VecR &v)
        {
            std::string out;
            for (Index i = 0; i < v.size(); ++i)
            {
                if (i > 0)
                    out += ' ';
                out += format_double(v(i));
            }
            return out;
        }

        std::string join_positions(const std::vector<Eigen::Vector2d> &pts)
        {
            std::string out;
            for (size_t i = 0; i < pts.size(); ++i)
            {
                if (i > 0)
                    out += ' ';
                out += format_double(pts[i].x()) + "," + format_double(pts[i].y());
            }
            return out;
        }
    } // namespace

    std::string serialize_config(const ScenarioConfig &cfg)
    {
        std::ostringstream out;
        out << "[topology]\n";
        out << "num_ccrn = " << cfg.topology.num_nodes() << "\n";
        out << "num_sd = " << cfg.topology.num_destinations() << "\n";
        out << "num_pr = " << cfg.topology.num_primaries() << "\n";
        out << "ccrn = " << join_positions(cfg.topology.ccrn_positions) << "\n";
        out << "sd = " << join_positions(cfg.topology.sd_positions) << "\n";
        out << "pr = " << join_positions(cfg.topology.pr_positions) << "\n";
        out << "propagation_speed = " << format_double(cfg.topology.propagation_speed) << "\n";
        out << "\n[waveform]\n";
        out << "symbol_duration = " << format_double(cfg.symbol_duration) << "\n";
        out << "slot_duration = " << format_double(cfg.slot_duration) << "\n";
        out << "reference_sd = " << cfg.reference_sd << "\n";
        out << "\n[fading]\n";
        out << "path_loss_exponent = " << format_double(cfg.fading.path_loss_exponent) << "\n";
        out << "reference_distance = " << format_double(cfg.fading.reference_distance) << "\n";
        out << "reference_gain = " << format_double(cfg.fading.reference_gain) << "\n";
        out << "\n[constraints]\n";
        out << "gamma_th = " << join_doubles(cfg.gamma_th) << "\n";
        out << "weights = " << join_doubles(cfg.weights) << "\n";
        out << "\n[noise]\n";
        out << "noise_floor = " << format_double(cfg.noise_floor) << "\n";
        out << "pu_interference_db = " << join_doubles(cfg.pu_interference_db) << "\n";
        out << "\n[csi]\n";
        out << "epsilon = " << format_double(cfg.epsilon) << "\n";
        out << "psi_c = " << join_doubles(cfg.psi_c) << "\n";
        out << "epsilon_viol = " << join_doubles(cfg.epsilon_viol) << "\n";
        if (cfg.omega.size() == 0)
            out << "omega = auto\n";
        else
        {
            out << "omega =";
            for (Index j = 0; j < cfg.omega.rows(); ++j)
                for (Index r = 0; r < cfg.omega.cols(); ++r)
                    out << ' ' << format_double(cfg.omega(j, r));
            out << "\n";
        }
        out << "error_placement = "
            << (cfg.error_placement == ErrorPlacement::Interior ? "interior" : "boundary")
            << "\n";
        out << "\n[campaign]\n";
        out << "methods =";
        for (Method m : cfg.methods)
            out << ' ' << method_name(m);
        out << "\n";
        out << "trials = " << cfg.trials << "\n";
        out << "seed = " << cfg.seed << "\n";
        out << "symbol_power_db =";
        for (double p : cfg.symbol_power_db)
            out << ' ' << format_double(p);
        out << "\n";
        out << "selection_limit = " << cfg.selection_limit << "\n";
        out << "workers = " << cfg.workers << "\n";
        out << "regularization = "
            << (cfg.regularization ? format_double(*cfg.regularization) : "auto") << "\n";
        return out.str();
    }

    VecR ScenarioConfig::sigma2() const
    {
        VecR out(pu_interference_db.size());
        for (Index k = 0; k < out.size(); ++k)
            out(k) = noise_floor * (1.0 + std::pow(10.0, pu_interference_db(k) / 10.0));
        return out;
    }

    MatR ScenarioConfig::effective_omega() const
    {
        if (omega.size() != 0)
            return omega;
        return path_loss_omega(topology, fading);
    }

    ConfigError::ConfigError(std::vector<std::string> v)
        : std::runtime_error(v.empty() ? std::string("invalid configuration")
                                       : "invalid configuration: " + v.front() +
                                             (v.size() > 1 ? " (+" +
                                                                 std::to_string(v.size() - 1) +
                                                                 " more)"
                                                           : "")),
          violations(std::move(v))
    {
    }

    ScenarioConfig load_config_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot read config file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        ParseOutcome out = parse_config(buf.str());
        if (!out.config)
            throw ConfigError(std::move(out.violations));
        return std::move(*out.config);
    }
} // namespace asynchbf
