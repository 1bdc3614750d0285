#include "otfslab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace otfslab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& field,
                       const std::string& msg) {
    throw ConfigError(origin + ": " + field + ": " + msg);
}

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

Waveform parse_waveform(const std::string& origin, const std::string& s) {
    if (s == "otfs") return Waveform::otfs;
    if (s == "ofdm") return Waveform::ofdm;
    fail(origin, "waveform", "expected \"otfs\" or \"ofdm\", got \"" + s + "\"");
}

Side parse_side(const std::string& origin, const json& j, Side fallback) {
    if (!j.contains("side")) return fallback;
    const std::string s = j.at("side").get<std::string>();
    if (s == "tx") return Side::tx;
    if (s == "rx") return Side::rx;
    fail(origin, "impairments.side", "expected \"tx\" or \"rx\"");
}

ImpairmentStage parse_stage(const std::string& origin, const json& j) {
    if (!j.contains("type")) fail(origin, "impairments", "stage is missing \"type\"");
    const std::string type = j.at("type").get<std::string>();
    ImpairmentStage st;
    if (type == "cfo") {
        CfoParams p;
        p.normalized_offset = j.value("normalized_offset", 0.0);
        st.side = parse_side(origin, j, Side::rx);
        st.model = p;
    } else if (type == "iq-imbalance") {
        IqImbalance p;
        p.epsilon = j.value("epsilon", 0.0);
        p.phase_rad = j.value("phase_deg", 0.0) * kPi / 180.0;
        st.side = parse_side(origin, j, Side::rx);
        st.model = p;
    } else if (type == "dc-offset") {
        DcOffset p;
        p.gamma_i = j.value("gamma_i", 0.0);
        p.gamma_q = j.value("gamma_q", 0.0);
        st.side = parse_side(origin, j, Side::rx);
        st.model = p;
    } else if (type == "phase-noise") {
        PhaseNoiseModel p;
        const std::string kind = j.value("model", std::string("wiener"));
        if (kind == "wiener") {
            p.kind = PhaseNoiseKind::wiener;
        } else if (kind == "filtered-gaussian") {
            p.kind = PhaseNoiseKind::filtered_gaussian;
        } else {
            fail(origin, "impairments.model", "expected \"wiener\" or \"filtered-gaussian\"");
        }
        p.sigma2 = j.value("sigma2", 0.0);
        p.filter_len = j.value("filter_len", std::size_t(16));
        if (p.sigma2 < 0.0) fail(origin, "impairments.sigma2", "must be >= 0");
        st.side = parse_side(origin, j, Side::rx);
        st.model = p;
    } else if (type == "saleh-pa") {
        SalehPa p;
        p.alpha_g = j.value("alpha_g", p.alpha_g);
        p.beta_g = j.value("beta_g", p.beta_g);
        p.alpha_phi = j.value("alpha_phi", p.alpha_phi);
        p.beta_phi = j.value("beta_phi", p.beta_phi);
        p.input_backoff_db = j.value("input_backoff_db", 0.0);
        if (p.beta_g <= 0.0) fail(origin, "impairments.beta_g", "must be > 0");
        if (p.beta_phi < 0.0) fail(origin, "impairments.beta_phi", "must be >= 0");
        st.side = parse_side(origin, j, Side::tx);
        st.model = p;
    } else if (type == "sample-clock-offset") {
        SampleClockOffset p;
        p.delta_ratio = j.value("delta_ratio", 0.0);
        if (std::abs(p.delta_ratio) >= 0.01) {
            fail(origin, "impairments.delta_ratio", "|delta_ratio| must be < 0.01");
        }
        st.side = parse_side(origin, j, Side::rx);
        st.model = p;
    } else {
        fail(origin, "impairments.type", "unknown stage type \"" + type + "\"");
    }
    return st;
}

ChannelProfile parse_channel(const std::string& origin, const json& j) {
    if (j.contains("file")) {
        return ChannelProfile::from_json_file(j.at("file").get<std::string>());
    }
    if (!j.contains("taps")) fail(origin, "channel", "needs \"taps\" or \"file\"");
    std::vector<ChannelTap> taps;
    for (const auto& jt : j.at("taps")) {
        ChannelTap t;
        t.delay = jt.at("delay").get<int>();
        t.doppler = jt.at("doppler").get<int>();
        t.gain = {jt.value("gain_re", 1.0), jt.value("gain_im", 0.0)};
        if (t.delay < 0) fail(origin, "channel.taps.delay", "must be >= 0");
        taps.push_back(t);
    }
    if (taps.empty()) fail(origin, "channel.taps", "at least one tap required");
    return ChannelProfile::make(std::move(taps), j.value("normalize", false));
}

}  // namespace

ExperimentConfig load_config_text(const std::string& text, const std::string& origin,
                                  ConfigReport* report) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ":" + std::to_string(line_of_byte(text, e.byte)) + ": " +
                          e.what());
    }

    ExperimentConfig cfg;
    cfg.source_json = text;
    ConfigReport local;
    ConfigReport& rep = report ? *report : local;

    try {
        if (j.contains("waveform")) {
            cfg.waveforms.clear();
            const auto& jw = j.at("waveform");
            if (jw.is_array()) {
                for (const auto& w : jw) {
                    cfg.waveforms.push_back(parse_waveform(origin, w.get<std::string>()));
                }
            } else {
                cfg.waveforms.push_back(parse_waveform(origin, jw.get<std::string>()));
            }
            if (cfg.waveforms.empty()) fail(origin, "waveform", "empty waveform list");
        }

        if (j.contains("grid")) {
            const auto& jg = j.at("grid");
            cfg.grid.m_delay = jg.value("m_delay", cfg.grid.m_delay);
            cfg.grid.n_doppler = jg.value("n_doppler", cfg.grid.n_doppler);
            cfg.grid.alphabet_order = jg.value("alphabet_order", cfg.grid.alphabet_order);
            cfg.grid.cp_len = jg.value("cp_len", cfg.grid.cp_len);
        }
        if (cfg.grid.m_delay < 1 || cfg.grid.n_doppler < 1) {
            fail(origin, "grid", "m_delay and n_doppler must be >= 1");
        }
        if (cfg.grid.alphabet_order != 4 && cfg.grid.alphabet_order != 16 &&
            cfg.grid.alphabet_order != 64) {
            fail(origin, "grid.alphabet_order", "must be 4, 16 or 64");
        }
        const auto usual = {std::size_t(4), std::size_t(32), std::size_t(256), std::size_t(1024)};
        const auto in_usual = [&](std::size_t v) {
            return std::find(usual.begin(), usual.end(), v) != usual.end();
        };
        if (!in_usual(cfg.grid.m_delay) || !in_usual(cfg.grid.n_doppler)) {
            rep.warnings.push_back("grid: dimensions outside the usual {4, 32, 256, 1024} set");
        }

        if (j.contains("channel")) cfg.channel = parse_channel(origin, j.at("channel"));

        if (j.contains("impairments")) {
            for (const auto& js : j.at("impairments")) {
                cfg.impairments.stages.push_back(parse_stage(origin, js));
            }
        }

        if (j.contains("detector")) {
            const auto& jd = j.at("detector");
            const std::string type = jd.value("type", std::string("auto"));
            if (type == "auto") {
                cfg.detector = DetectorKind::automatic;
            } else if (type == "mp") {
                cfg.detector = DetectorKind::mp;
            } else if (type == "map-oracle") {
                cfg.detector = DetectorKind::map_oracle;
            } else if (type == "one-tap") {
                cfg.detector = DetectorKind::one_tap;
            } else {
                fail(origin, "detector.type", "expected auto|mp|map-oracle|one-tap");
            }
            cfg.mp.damping = jd.value("damping", cfg.mp.damping);
            cfg.mp.max_iter = jd.value("max_iter", cfg.mp.max_iter);
            cfg.mp.conv_eps = jd.value("conv_eps", cfg.mp.conv_eps);
            if (cfg.mp.damping <= 0.0 || cfg.mp.damping > 1.0) {
                fail(origin, "detector.damping", "must be in (0, 1]");
            }
            if (cfg.mp.max_iter < 1) fail(origin, "detector.max_iter", "must be >= 1");
        }

        if (j.contains("csi")) {
            const std::string c = j.at("csi").get<std::string>();
            if (c == "perfect") {
                cfg.csi = CsiMode::perfect;
            } else if (c == "pilot") {
                cfg.csi = CsiMode::pilot;
            } else {
                fail(origin, "csi", "expected \"perfect\" or \"pilot\"");
            }
        }

        if (j.contains("pilot")) {
            const auto& jp = j.at("pilot");
            cfg.pilot.doppler_pos = jp.value("doppler_pos", cfg.pilot.doppler_pos);
            cfg.pilot.delay_pos = jp.value("delay_pos", cfg.pilot.delay_pos);
            cfg.pilot.amplitude = jp.value("amplitude", cfg.pilot.amplitude);
            cfg.pilot.guard_doppler = jp.value("guard_doppler", cfg.pilot.guard_doppler);
            cfg.pilot.guard_delay = jp.value("guard_delay", cfg.pilot.guard_delay);
        }

        if (j.contains("sweep")) {
            const auto& js = j.at("sweep");
            if (js.contains("snr_db")) {
                cfg.sweep.snr_db = js.at("snr_db").get<std::vector<double>>();
            }
            cfg.sweep.frames_per_point =
                js.value("frames_per_point", cfg.sweep.frames_per_point);
        }
        if (cfg.sweep.snr_db.empty()) fail(origin, "sweep.snr_db", "must not be empty");
        if (cfg.sweep.frames_per_point < 1) {
            fail(origin, "sweep.frames_per_point", "must be >= 1");
        }

        cfg.papr_frames = j.value("papr_frames", cfg.papr_frames);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.threads = j.value("threads", cfg.threads);

        // Cross-field checks that do not need the full link setup.
        for (const auto wf : cfg.waveforms) {
            if (wf == Waveform::ofdm && cfg.csi == CsiMode::pilot) {
                fail(origin, "csi", "pilot CSI applies to the otfs waveform only");
            }
            if (wf == Waveform::ofdm &&
                (cfg.detector == DetectorKind::mp || cfg.detector == DetectorKind::map_oracle)) {
                fail(origin, "detector.type", "mp/map-oracle detectors apply to otfs only");
            }
            if (wf == Waveform::otfs && cfg.detector == DetectorKind::one_tap) {
                fail(origin, "detector.type", "one-tap detector applies to ofdm only");
            }
        }
        const int max_delay = cfg.channel.max_delay();
        if (cfg.grid.cp_len >= 0 && max_delay > cfg.grid.cp_len) {
            fail(origin, "grid.cp_len", "uncovered delay: channel spread exceeds the prefix");
        }
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path, ConfigReport* report) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config_text(ss.str(), path, report);
}

}  // namespace otfslab
