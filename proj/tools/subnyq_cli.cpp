// SPDX-License-Identifier: Apache-2.0
//
// subnyq - capacity of LTI Gaussian channels under sub-Nyquist sampling
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
//
// Command-line front end. One JSON config file describes the grid, the
// channel, optionally a sampler and a sampling set, and the run parameters;
// flags override config fields. Reports echo the fully resolved
// configuration (including automatic re-gridding) so every run is
// reproducible from its own output.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical error,
// 4 right-invertibility failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "subnyq/subnyq.hpp"

using json = nlohmann::json;
using namespace subnyq;

namespace
{

class config_error : public std::runtime_error
{
  public:
    explicit config_error(const std::string &msg) : std::runtime_error(msg) {}
};

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Config model
// ---------------------------------------------------------------------------

struct RunConfig
{
    double f_max_hint = 1.0;
    int n_bins_hint = 512;
    ChannelSpec channel;
    json sampler;      // raw sampler spec, resolved against the final grid
    json sampling_set; // raw sampling-set spec
    double f_s = 1.0;
    double power = 1.0;
    std::vector<double> f_s_list;
    int subbands = 2;
    double window = 50.0;
    int window_positions = 101;
    std::vector<int> horizon_samples = {32, 64, 128, 256};
    std::vector<double> truncation_l1 = {1.0, 2.0, 4.0, 8.0};
    double kadec_jitter_fraction = 0.2; // of the sampling interval
    int kadec_samples = 128;
    std::uint64_t seed = 1;
    double tolerance = 0.01;
    double eps_min = kDefaultSigmaFloor;
    bool sampler_column = false;
    bool bits = false;
    std::string out_path;
};

double require_number(const json &j, const std::string &key)
{
    if (!j.contains(key) || !j[key].is_number())
        throw config_error("missing or non-numeric field '" + key + "'");
    return j[key].get<double>();
}

Interval parse_interval(const json &j, const std::string &what)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw config_error(what + ": expected [lo, hi]");
    return Interval{j[0].get<double>(), j[1].get<double>()};
}

SpectralSet parse_set(const json &j, const std::string &what)
{
    std::vector<Interval> ivs;
    if (!j.is_array())
        throw config_error(what + ": expected an array of [lo, hi] pairs");
    for (const json &e : j)
        ivs.push_back(parse_interval(e, what));
    return SpectralSet(std::move(ivs));
}

ChannelSpec parse_channel(const json &j)
{
    if (!j.contains("family") || !j["family"].is_string())
        throw config_error("channel: missing 'family'");
    const std::string fam = j["family"].get<std::string>();
    ChannelSpec c;
    c.noise = j.value("noise", 1.0);
    if (fam == "flat")
    {
        c.family = ChannelSpec::Family::flat;
        c.gain = require_number(j, "gain");
        Interval b = parse_interval(j.at("band"), "channel.band");
        c.band_lo = b.lo;
        c.band_hi = b.hi;
    }
    else if (fam == "triangle")
    {
        c.family = ChannelSpec::Family::triangle;
        c.gain = require_number(j, "gain");
        c.half_width = require_number(j, "half_width");
        c.center = j.value("center", 0.0);
    }
    else if (fam == "two_band")
    {
        c.family = ChannelSpec::Family::two_band;
        c.gain = require_number(j, "gain");
        Interval b = parse_interval(j.at("band"), "channel.band");
        c.band_lo = b.lo;
        c.band_hi = b.hi;
        c.gain2 = require_number(j, "gain2");
        Interval b2 = parse_interval(j.at("band2"), "channel.band2");
        c.band2_lo = b2.lo;
        c.band2_hi = b2.hi;
    }
    else if (fam == "gaussian")
    {
        c.family = ChannelSpec::Family::gaussian;
        c.gain = require_number(j, "gain");
        c.sigma = require_number(j, "sigma");
    }
    else if (fam == "piecewise")
    {
        c.family = ChannelSpec::Family::piecewise;
        if (!j.contains("segments") || !j["segments"].is_array())
            throw config_error("channel: piecewise needs 'segments'");
        for (const json &seg : j["segments"])
        {
            Interval b = parse_interval(seg.at("band"), "channel.segments.band");
            PiecewiseSegment p;
            p.lo = b.lo;
            p.hi = b.hi;
            p.h_sq = require_number(seg, "h_sq");
            p.noise = seg.value("noise", 1.0);
            c.segments.push_back(p);
        }
    }
    else
        throw config_error("channel: unknown family '" + fam + "'");
    return c;
}

RunConfig parse_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file '" + path + "'");
    json j;
    try
    {
        j = json::parse(in);
    }
    catch (const json::parse_error &e)
    {
        throw config_error(std::string("config parse error: ") + e.what());
    }

    RunConfig cfg;
    if (j.contains("grid"))
    {
        cfg.f_max_hint = require_number(j["grid"], "f_max");
        cfg.n_bins_hint = static_cast<int>(require_number(j["grid"], "n_bins"));
    }
    if (!j.contains("channel"))
        throw config_error("config: missing 'channel' section");
    cfg.channel = parse_channel(j["channel"]);
    if (j.contains("sampler"))
        cfg.sampler = j["sampler"];
    if (j.contains("sampling_set"))
        cfg.sampling_set = j["sampling_set"];
    if (j.contains("run"))
    {
        const json &r = j["run"];
        cfg.f_s = r.value("f_s", cfg.f_s);
        cfg.power = r.value("power", cfg.power);
        cfg.subbands = r.value("subbands", cfg.subbands);
        cfg.window = r.value("window", cfg.window);
        cfg.window_positions = r.value("window_positions", cfg.window_positions);
        cfg.seed = r.value("seed", cfg.seed);
        cfg.tolerance = r.value("tolerance", cfg.tolerance);
        cfg.eps_min = r.value("eps_min", cfg.eps_min);
        cfg.sampler_column = r.value("sampler_column", cfg.sampler_column);
        cfg.kadec_jitter_fraction = r.value("kadec_jitter_fraction", cfg.kadec_jitter_fraction);
        cfg.kadec_samples = r.value("kadec_samples", cfg.kadec_samples);
        if (r.contains("f_s_list"))
            cfg.f_s_list = r["f_s_list"].get<std::vector<double>>();
        if (r.contains("horizon_samples"))
            cfg.horizon_samples = r["horizon_samples"].get<std::vector<int>>();
        if (r.contains("truncation_l1"))
            cfg.truncation_l1 = r["truncation_l1"].get<std::vector<double>>();
        if (cfg.f_s_list.empty() && r.contains("f_s_list"))
            throw config_error("run.f_s_list must be non-empty when present");
        if (!(cfg.tolerance > 0.0))
            throw config_error("run.tolerance must be > 0");
        if (!(cfg.eps_min > 0.0))
            throw config_error("run.eps_min must be > 0");
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Sampler resolution against a concrete grid
// ---------------------------------------------------------------------------

ComplexSpectrum parse_filter(const json &j, const FrequencyGrid &g)
{
    if (!j.contains("type") || !j["type"].is_string())
        throw config_error("sampler.filter: missing 'type'");
    const std::string type = j["type"].get<std::string>();
    if (type == "allpass")
        return ComplexSpectrum::constant(g, 1.0);
    if (type == "lowpass")
    {
        const double w = require_number(j, "width");
        return detail::indicator_response(g, SpectralSet::band(-w / 2, w / 2));
    }
    if (type == "bandpass")
        return detail::indicator_response(g, parse_set(j.at("bands"), "sampler.filter.bands"));
    throw config_error("sampler.filter: unknown type '" + type + "'");
}

PeriodicSampler build_sampler(const json &j, const FrequencyGrid &g)
{
    if (!j.contains("kind") || !j["kind"].is_string())
        throw config_error("sampler: missing 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "single_branch")
    {
        return from_single_branch(parse_filter(j.at("filter"), g), require_number(j, "f_s"),
                                  j.value("offset", 0.0));
    }
    if (kind == "filterbank")
    {
        const double f_q = require_number(j, "f_q");
        std::vector<SpectralSet> sets;
        for (const json &b : j.at("branches"))
            sets.push_back(parse_set(b.at("bands"), "sampler.branches.bands"));
        std::vector<double> offsets;
        if (j.contains("offsets"))
            offsets = j["offsets"].get<std::vector<double>>();
        return filterbank_sampler(g, sets, f_q, offsets);
    }
    if (kind == "modulation")
    {
        std::map<int, std::complex<double>> coeffs;
        for (const json &c : j.at("coeffs"))
            coeffs[static_cast<int>(require_number(c, "l"))] =
                std::complex<double>(c.value("re", 0.0), c.value("im", 0.0));
        return modulation_sampler(g, parse_set(j.at("pre"), "sampler.pre"), coeffs,
                                  parse_set(j.at("post"), "sampler.post"),
                                  require_number(j, "f_s"),
                                  static_cast<int>(require_number(j, "subbands")));
    }
    if (kind == "interleaved")
    {
        std::vector<PeriodicSampler> parts;
        for (const json &p : j.at("parts"))
            parts.push_back(build_sampler(p, g));
        return interleave_multibranch(parts);
    }
    if (kind == "custom_matrix")
    {
        const double period = require_number(j, "period");
        std::vector<double> offsets = j.at("offsets").get<std::vector<double>>();
        std::vector<ComplexSpectrum> responses;
        for (const json &r : j.at("responses"))
        {
            if (!r.is_array() || static_cast<int>(r.size()) != g.n_bins())
                throw config_error("sampler.responses: each branch needs n_bins [re, im] pairs");
            std::vector<std::complex<double>> v(g.n_bins());
            for (int i = 0; i < g.n_bins(); ++i)
                v[i] = std::complex<double>(r[i][0].get<double>(), r[i][1].get<double>());
            responses.push_back(ComplexSpectrum(g, std::move(v)));
        }
        return PeriodicSampler(period, std::move(offsets), std::move(responses),
                               SamplerKind::custom);
    }
    throw config_error("sampler: unknown kind '" + kind + "'");
}

double sampler_f_q(const json &j)
{
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "single_branch")
        return require_number(j, "f_s");
    if (kind == "filterbank")
        return require_number(j, "f_q");
    if (kind == "modulation")
        return require_number(j, "f_s") / require_number(j, "subbands");
    if (kind == "interleaved")
        return sampler_f_q(j.at("parts").at(0));
    if (kind == "custom_matrix")
        return 1.0 / require_number(j, "period");
    throw config_error("sampler: unknown kind '" + kind + "'");
}

SamplingSet build_sampling_set(const json &j, std::uint64_t seed)
{
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform")
        return SamplingSet::uniform(require_number(j, "rate"), j.value("phase", 0.0));
    if (kind == "periodic")
        return SamplingSet::periodic(require_number(j, "period"),
                                     j.at("offsets").get<std::vector<double>>());
    if (kind == "jittered")
        return SamplingSet::jittered(require_number(j, "rate"), require_number(j, "jitter"),
                                     j.value("seed", seed));
    if (kind == "explicit")
        return SamplingSet::explicit_times(j.at("times").get<std::vector<double>>());
    throw config_error("sampling_set: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Reporting
// ---------------------------------------------------------------------------

struct Units
{
    bool bits = false;
    double scale() const { return bits ? 1.0 / std::log(2.0) : 1.0; }
    const char *name() const { return bits ? "bits_per_s" : "nats_per_s"; }
};

void echo_resolved(const json &resolved)
{
    std::printf("resolved_config: %s\n", resolved.dump().c_str());
}

json grid_json(const FrequencyGrid &g)
{
    return json{{"f_max", g.f_max()}, {"n_bins", g.n_bins()}};
}

void write_csv(const std::string &path, const std::string &header,
               const std::vector<std::string> &rows)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw config_error("cannot open output file '" + path + "'");
    out << header << "\n";
    for (const std::string &r : rows)
        out << r << "\n";
}

// Channel re-gridded so that f_q lands on the alias lattice; the analytic
// channel description is re-evaluated exactly on the new grid.
struct ResolvedWorld
{
    FrequencyGrid grid;
    Channel channel;
    bool regridded = false;
};

ResolvedWorld resolve_world(const RunConfig &cfg, std::optional<double> f_q)
{
    FrequencyGrid hinted(cfg.f_max_hint, cfg.n_bins_hint);
    if (!f_q)
        return ResolvedWorld{hinted, make_channel(cfg.channel, hinted), false};
    FrequencyGrid g = commensurate_grid(*f_q, cfg.f_max_hint, cfg.n_bins_hint);
    const bool changed = g != hinted;
    return ResolvedWorld{g, make_channel(cfg.channel, g), changed};
}

// custom_matrix samplers supply per-bin values, so their grid is taken as
// configured instead of re-gridded.
std::optional<double> regrid_target(const json &sampler, double fallback_f_q)
{
    if (sampler.is_null())
        return fallback_f_q;
    if (sampler.at("kind").get<std::string>() == "custom_matrix")
        return std::nullopt;
    return sampler_f_q(sampler);
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_upper_bound(const RunConfig &cfg)
{
    ResolvedWorld w = resolve_world(cfg, std::nullopt);
    UpperBoundResult r = upper_bound(w.channel, cfg.f_s, cfg.power);
    const Units u{cfg.bits};

    echo_resolved(json{{"command", "upper-bound"},
                       {"grid", grid_json(w.grid)},
                       {"f_s", cfg.f_s},
                       {"power", cfg.power},
                       {"unit", u.name()}});
    std::printf("b_m intervals:\n");
    for (const Interval &iv : r.b_m.intervals())
        std::printf("  [%s, %s)\n", fmt(iv.lo).c_str(), fmt(iv.hi).c_str());
    std::printf("b_m measure: %s Hz\n", fmt(r.b_m.measure()).c_str());
    std::printf("water level nu: %s\n", fmt(r.solution.nu).c_str());
    std::printf("capacity: %s %s\n", fmt(r.capacity() * u.scale()).c_str(), u.name());

    if (!cfg.out_path.empty())
    {
        std::vector<std::string> rows;
        for (const Allocation &a : r.solution.allocation)
            if (a.power_density > 0.0 || a.weight > 0.0)
                rows.push_back(fmt(a.weight) + "," + fmt(a.power_density));
        write_csv(cfg.out_path, "weight_hz,power_density", rows);
    }
    return 0;
}

int cmd_periodic(const RunConfig &cfg)
{
    if (cfg.sampler.is_null())
        throw config_error("periodic: config needs a 'sampler' section");
    ResolvedWorld w = resolve_world(cfg, regrid_target(cfg.sampler, cfg.f_s));
    PeriodicSampler s = build_sampler(cfg.sampler, w.grid);
    PeriodicCapacityResult r = periodic_capacity(s, w.channel, cfg.power, cfg.eps_min);
    RightInvertibilityReport inv =
        right_invertibility_check(build_alias_matrices(s, w.channel), cfg.eps_min);
    const Units u{cfg.bits};

    echo_resolved(json{{"command", "periodic"},
                       {"grid", grid_json(w.grid)},
                       {"regridded", w.regridded},
                       {"sampler", cfg.sampler},
                       {"power", cfg.power},
                       {"eps_min", cfg.eps_min},
                       {"unit", u.name()}});
    double lam_lo = std::numeric_limits<double>::infinity(), lam_hi = 0.0;
    for (const auto &row : r.profile.lambda)
        for (double v : row)
        {
            lam_lo = std::min(lam_lo, v);
            lam_hi = std::max(lam_hi, v);
        }
    std::printf("branches per period: %d, rate: %s Hz\n", s.branches(), fmt(s.rate()).c_str());
    std::printf("sigma_min(F_q F_q*): %s at base f = %s\n", fmt(inv.sigma_min).c_str(),
                fmt(inv.at_base_frequency).c_str());
    std::printf("whitened eigenvalue range: [%s, %s]\n", fmt(lam_lo).c_str(), fmt(lam_hi).c_str());
    std::printf("water level nu: %s\n", fmt(r.solution.nu).c_str());
    std::printf("capacity: %s %s\n", fmt(r.capacity() * u.scale()).c_str(), u.name());

    if (!cfg.out_path.empty())
    {
        std::vector<std::string> rows;
        for (int j = 0; j < r.profile.base.n_bins(); ++j)
            for (std::size_t i = 0; i < r.profile.lambda[j].size(); ++i)
                rows.push_back(fmt(r.profile.base.center(j)) + "," + std::to_string(i + 1) + "," +
                               fmt(r.profile.lambda[j][i]));
        write_csv(cfg.out_path, "base_freq_hz,eigen_index,lambda", rows);
    }
    return 0;
}

int cmd_filterbank(const RunConfig &cfg)
{
    ResolvedWorld w = resolve_world(cfg, std::nullopt);
    FilterbankDesignResult r = design_filterbank(w.channel, cfg.f_s, cfg.power);
    const Units u{cfg.bits};

    echo_resolved(json{{"command", "filterbank"},
                       {"grid", grid_json(w.grid)},
                       {"f_s", cfg.f_s},
                       {"power", cfg.power},
                       {"unit", u.name()}});
    std::printf("branches: %zu\n", r.design.branches.size());
    for (const FilterbankBranch &b : r.design.branches)
        std::printf("  band [%s, %s) at rate %s Hz\n", fmt(b.set.lower()).c_str(),
                    fmt(b.set.upper()).c_str(), fmt(b.rate).c_str());
    std::printf("total rate: %s Hz\n", fmt(r.design.total_rate).c_str());
    std::printf("achieved capacity: %s %s (equals the converse bound)\n",
                fmt(r.capacity * u.scale()).c_str(), u.name());

    if (!cfg.out_path.empty())
    {
        std::vector<std::string> rows;
        for (const FilterbankBranch &b : r.design.branches)
            rows.push_back(fmt(b.set.lower()) + "," + fmt(b.set.upper()) + "," + fmt(b.rate));
        write_csv(cfg.out_path, "band_lo_hz,band_hi_hz,branch_rate_hz", rows);
    }
    return 0;
}

int cmd_modulation(const RunConfig &cfg)
{
    ResolvedWorld w = resolve_world(cfg, cfg.f_s / cfg.subbands);
    ModulationDesignResult r =
        design_modulation(w.channel, cfg.f_s, cfg.subbands, cfg.power, cfg.eps_min);
    const Units u{cfg.bits};

    echo_resolved(json{{"command", "modulation"},
                       {"grid", grid_json(w.grid)},
                       {"regridded", w.regridded},
                       {"f_s", cfg.f_s},
                       {"subbands", cfg.subbands},
                       {"power", cfg.power},
                       {"unit", u.name()}});
    std::printf("selected subbands -> slots (units of f_s/N):\n");
    for (std::size_t i = 0; i < r.design.selected.size(); ++i)
        std::printf("  %d -> %d (shift %d)\n", r.design.selected[i], r.design.slots[i],
                    r.design.slots[i] - r.design.selected[i]);
    std::printf("modulation coefficients:");
    for (const auto &[l, c] : r.design.mod_coeffs)
        std::printf(" c[%d]=%s%+si", l, fmt(c.real()).c_str(), fmt(c.imag()).c_str());
    std::printf("\n");
    std::printf("capacity via the composed chain: %s %s\n", fmt(r.capacity * u.scale()).c_str(),
                u.name());
    std::printf("converse bound: %s %s\n", fmt(r.bound * u.scale()).c_str(), u.name());

    if (!cfg.out_path.empty())
    {
        std::vector<std::string> rows;
        for (std::size_t i = 0; i < r.design.selected.size(); ++i)
            rows.push_back(std::to_string(r.design.selected[i]) + "," +
                           std::to_string(r.design.slots[i]));
        write_csv(cfg.out_path, "source_subband,slot", rows);
    }
    return 0;
}

int cmd_sweep(const RunConfig &cfg)
{
    if (cfg.f_s_list.empty())
        throw config_error("sweep: config needs run.f_s_list");
    ResolvedWorld w = resolve_world(cfg, std::nullopt);
    const Units u{cfg.bits};

    std::vector<double> c_u;
    for (double f_s : cfg.f_s_list)
        c_u.push_back(upper_bound(w.channel, f_s, cfg.power).capacity());

    // Optional fixed-sampler column: a plain all-pass branch sampled at f_s,
    // re-gridding the channel per row so the alias lattice stays exact.
    std::vector<double> c_allpass;
    if (cfg.sampler_column)
    {
        for (double f_s : cfg.f_s_list)
        {
            ResolvedWorld row = resolve_world(cfg, f_s);
            c_allpass.push_back(
                periodic_capacity(all_pass_sampler(row.grid, f_s), row.channel, cfg.power,
                                  cfg.eps_min)
                    .capacity());
        }
    }

    echo_resolved(json{{"command", "sweep"},
                       {"grid", grid_json(w.grid)},
                       {"f_s_list", cfg.f_s_list},
                       {"power", cfg.power},
                       {"sampler_column", cfg.sampler_column},
                       {"unit", u.name()}});

    // monotonicity verdict on a sorted copy
    std::vector<std::size_t> order(cfg.f_s_list.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return cfg.f_s_list[a] < cfg.f_s_list[b]; });
    bool nondecreasing = true;
    for (std::size_t k = 1; k < order.size(); ++k)
        nondecreasing &= c_u[order[k - 1]] <= c_u[order[k]];
    bool sampler_dips = false;
    if (cfg.sampler_column)
        for (std::size_t k = 1; k < order.size(); ++k)
            sampler_dips |= c_allpass[order[k]] < c_allpass[order[k - 1]];

    std::vector<std::string> rows;
    for (std::size_t k = 0; k < cfg.f_s_list.size(); ++k)
    {
        std::string row = fmt(cfg.f_s_list[k]) + "," + fmt(c_u[k] * u.scale());
        if (cfg.sampler_column)
            row += "," + fmt(c_allpass[k] * u.scale());
        rows.push_back(row);
        std::printf("%s\n", row.c_str());
    }
    std::printf("upper bound nondecreasing (sorted): %s\n", nondecreasing ? "yes" : "no");
    if (cfg.sampler_column)
        std::printf("all-pass sampler column has a strict decrease: %s\n",
                    sampler_dips ? "yes" : "no");

    if (!cfg.out_path.empty())
    {
        std::string header = std::string("f_s_hz,capacity_upper_") + u.name();
        if (cfg.sampler_column)
            header += std::string(",capacity_allpass_") + u.name();
        write_csv(cfg.out_path, header, rows);
    }
    return 0;
}

int cmd_beurling(const RunConfig &cfg)
{
    if (cfg.sampling_set.is_null())
        throw config_error("beurling: config needs a 'sampling_set' section");
    SamplingSet set = build_sampling_set(cfg.sampling_set, cfg.seed);
    BeurlingDensityEstimate d = beurling_density(set, cfg.window, cfg.window_positions);

    echo_resolved(json{{"command", "beurling"},
                       {"sampling_set", cfg.sampling_set},
                       {"window", cfg.window},
                       {"window_positions", cfg.window_positions},
                       {"seed", cfg.seed}});
    std::printf("upper density estimate: %s\n", fmt(d.upper).c_str());
    std::printf("lower density estimate: %s\n", fmt(d.lower).c_str());
    if (d.exact)
        std::printf("exact asymptotic density: %s\n", fmt(*d.exact).c_str());
    else
        std::printf("exact asymptotic density: n/a (finite explicit set)\n");

    if (!cfg.out_path.empty())
        write_csv(cfg.out_path, "upper_estimate,lower_estimate,exact",
                  {fmt(d.upper) + "," + fmt(d.lower) + "," + (d.exact ? fmt(*d.exact) : "nan")});
    return 0;
}

int cmd_verify(const RunConfig &cfg)
{
    // Property suite on the configured instance: finite-horizon convergence,
    // trace and truncation bounds, jitter stability, and the converse chain.
    ResolvedWorld w = resolve_world(cfg, regrid_target(cfg.sampler, cfg.f_s));
    const double f_s = cfg.f_s, P = cfg.power;
    PeriodicSampler sampler =
        cfg.sampler.is_null() ? ideal_lowpass_sampler(w.grid, f_s) : build_sampler(cfg.sampler, w.grid);

    echo_resolved(json{{"command", "verify"},
                       {"grid", grid_json(w.grid)},
                       {"regridded", w.regridded},
                       {"f_s", f_s},
                       {"power", P},
                       {"horizon_samples", cfg.horizon_samples},
                       {"seed", cfg.seed},
                       {"tolerance", cfg.tolerance}});

    struct Check
    {
        std::string name;
        double measured;
        double threshold;
        bool pass;
    };
    std::vector<Check> checks;
    auto add = [&](const std::string &name, double measured, double threshold, bool pass)
    { checks.push_back(Check{name, measured, threshold, pass}); };

    // 1. finite-horizon convergence to the periodic formula
    const double asymptotic = periodic_capacity(sampler, w.channel, P, cfg.eps_min).capacity();
    double prev_err = std::numeric_limits<double>::infinity();
    bool nonincreasing = true;
    double final_err = std::numeric_limits<double>::infinity();
    for (int K : cfg.horizon_samples)
    {
        const double T = K / (2.0 * sampler.rate());
        TimeKernelSet kernels(sampler, w.channel, periodic_window_samples(sampler, K));
        const double c = finite_capacity(kernels, T, P, cfg.eps_min).capacity;
        final_err = std::abs(c - asymptotic) / std::max(asymptotic, 1e-300);
        nonincreasing &= final_err <= prev_err + 1e-3;
        prev_err = final_err;
    }
    add("convergence_final_relative_error", final_err, cfg.tolerance, final_err <= cfg.tolerance);
    add("convergence_error_nonincreasing", nonincreasing ? 1.0 : 0.0, 1.0, nonincreasing);

    // 2. trace bound at every horizon
    bool trace_ok = true;
    double worst_trace_ratio = 0.0;
    for (int K : cfg.horizon_samples)
    {
        const double T = K / (2.0 * sampler.rate());
        TimeKernelSet kernels(sampler, w.channel, periodic_window_samples(sampler, K));
        FiniteCapacityResult r = finite_capacity(kernels, T, P, cfg.eps_min);
        double trace = 0.0;
        for (double lam : r.lambda)
            trace += lam / (2.0 * T);
        worst_trace_ratio = std::max(worst_trace_ratio, trace / kernels.g_energy());
        trace_ok &= trace <= kernels.g_energy() * (1.0 + 1e-9);
    }
    add("trace_bound_ratio_max", worst_trace_ratio, 1.0, trace_ok);

    // 3. truncation: deviation shrinks as L1 doubles, trace shift obeys bound
    {
        const int K = cfg.horizon_samples.front();
        const double T = K / (2.0 * sampler.rate());
        std::vector<HorizonSample> samples = periodic_window_samples(sampler, K);
        double prev = std::numeric_limits<double>::infinity();
        bool shrink = true, bound_ok = true;
        for (double L1 : cfg.truncation_l1)
        {
            TruncationReport rep =
                truncation_comparison(sampler, w.channel, samples, T, L1, cfg.eps_min);
            bound_ok &= std::abs(rep.trace_full - rep.trace_truncated) <=
                        rep.trace_shift_bound + 1e-9;
            shrink &= rep.max_eigen_deviation <= prev + 1e-12;
            prev = rep.max_eigen_deviation;
        }
        add("truncation_trace_shift_within_bound", bound_ok ? 1.0 : 0.0, 1.0, bound_ok);
        add("truncation_deviation_nonincreasing", shrink ? 1.0 : 0.0, 1.0, shrink);
    }

    // 4. jitter stability (quarter-interval condition)
    {
        KadecReport rep =
            kadec_perturbation_test(w.channel, f_s, cfg.kadec_jitter_fraction / f_s,
                                    cfg.kadec_samples, P, cfg.seed, cfg.eps_min);
        add("kadec_relative_delta", rep.rel_delta, cfg.tolerance, rep.rel_delta <= cfg.tolerance);
    }

    // 5. converse chain at this rate
    {
        const double c_s = periodic_capacity(sampler, w.channel, P, cfg.eps_min).capacity();
        const double c_p =
            corollary_bound(w.channel, sampler.f_q(), sampler.rate(), P).capacity_nats_per_sec;
        const double c_u = upper_bound(w.channel, sampler.rate(), P).capacity();
        const bool ok = c_s <= c_p + 1e-9 * std::max(1.0, c_p) && c_p <= c_u + 1e-6;
        add("converse_chain_sampler_minus_bound", c_s - c_u, 0.0, ok);
    }

    bool all_ok = true;
    std::vector<std::string> rows;
    for (const Check &c : checks)
    {
        all_ok &= c.pass;
        std::printf("[%s] %s measured=%s threshold=%s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), fmt(c.measured).c_str(), fmt(c.threshold).c_str());
        rows.push_back(c.name + "," + fmt(c.measured) + "," + fmt(c.threshold) + "," +
                       (c.pass ? "1" : "0"));
    }
    if (!cfg.out_path.empty())
        write_csv(cfg.out_path, "check,measured,threshold,pass", rows);
    if (!all_ok)
        throw numeric_error("verify: one or more checks failed");
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"capacity of LTI Gaussian channels under sub-Nyquist sampling"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    bool bits = false;
    std::optional<std::uint64_t> seed_override;
    std::optional<double> tol_override;

    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_flag("--bits", bits, "report capacities in bits/s instead of nats/s");
    app.add_option("--out", out_path, "write machine-readable CSV here");
    app.add_option("--seed", seed_override, "override run.seed");
    app.add_option("--tol", tol_override, "override run.tolerance");

    auto *c_upper = app.add_subcommand("upper-bound", "universal converse bound C_u(f_s, P)");
    auto *c_periodic = app.add_subcommand("periodic", "exact capacity of a periodic sampler");
    auto *c_fb = app.add_subcommand("filterbank", "capacity-achieving filterbank design");
    auto *c_mod = app.add_subcommand("modulation", "single-branch modulation design");
    auto *c_sweep = app.add_subcommand("sweep", "capacity vs sampling rate table");
    auto *c_beur = app.add_subcommand("beurling", "Beurling density of a sampling set");
    auto *c_verify = app.add_subcommand("verify", "finite-horizon verification report");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        RunConfig cfg = parse_config(config_path);
        cfg.bits = bits;
        cfg.out_path = out_path;
        if (seed_override)
            cfg.seed = *seed_override;
        if (tol_override)
        {
            if (!(*tol_override > 0.0))
                throw config_error("--tol must be > 0");
            cfg.tolerance = *tol_override;
        }

        if (c_upper->parsed())
            return cmd_upper_bound(cfg);
        if (c_periodic->parsed())
            return cmd_periodic(cfg);
        if (c_fb->parsed())
            return cmd_filterbank(cfg);
        if (c_mod->parsed())
            return cmd_modulation(cfg);
        if (c_sweep->parsed())
            return cmd_sweep(cfg);
        if (c_beur->parsed())
            return cmd_beurling(cfg);
        if (c_verify->parsed())
            return cmd_verify(cfg);
        return 2;
    }
    catch (const right_invertibility_error &e)
    {
        std::fprintf(stderr, "right-invertibility failure: %s\n", e.what());
        return 4;
    }
    catch (const config_error &e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    catch (const nlohmann::json::exception &e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    catch (const std::invalid_argument &e)
    {
        // bad domain values trace back to the configuration
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    }
}
