#include "otfslab/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace otfslab {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

nlohmann::json config_echo(const ExperimentConfig& cfg) {
    if (cfg.source_json.empty()) return nlohmann::json::object();
    return nlohmann::json::parse(cfg.source_json);
}

}  // namespace

std::string ber_csv_text(const std::vector<BerPoint>& points) {
    std::string out = "snr_db,ber,stderr,frames,bits\n";
    for (const auto& p : points) {
        out += fmt(p.snr_db) + "," + fmt(p.ber) + "," + fmt(p.stderr_est) + "," +
               std::to_string(p.frames) + "," + std::to_string(p.bits_total) + "\n";
    }
    return out;
}

std::string papr_csv_text(const PaprResult& r) {
    std::string out = "gamma_db,ccdf_empirical,ccdf_analytic\n";
    for (std::size_t i = 0; i < r.ccdf_thresholds_db.size(); ++i) {
        out += fmt(r.ccdf_thresholds_db[i]) + "," + fmt(r.ccdf_empirical[i]) + "," +
               fmt(r.ccdf_analytic[i]) + "\n";
    }
    return out;
}

void write_ber_csv(const std::string& path, const std::vector<BerPoint>& points) {
    write_text(path, ber_csv_text(points));
}

void write_ber_json(const std::string& path, const ExperimentConfig& cfg, Waveform wf,
                    const std::vector<BerPoint>& points) {
    nlohmann::json j;
    j["tool"] = "otfslab";
    j["kind"] = "ber";
    j["waveform"] = waveform_name(wf);
    j["seed"] = cfg.seed;
    j["config"] = config_echo(cfg);
    auto& arr = j["points"] = nlohmann::json::array();
    for (const auto& p : points) {
        arr.push_back({{"snr_db", p.snr_db},
                       {"ber", p.ber},
                       {"stderr", p.stderr_est},
                       {"bit_errors", p.bit_errors},
                       {"bits", p.bits_total},
                       {"frames", p.frames}});
    }
    write_text(path, j.dump(2) + "\n");
}

void write_papr_csv(const std::string& path, const PaprResult& r) {
    write_text(path, papr_csv_text(r));
}

void write_papr_json(const std::string& path, const ExperimentConfig& cfg, Waveform wf,
                     const PaprResult& r) {
    nlohmann::json j;
    j["tool"] = "otfslab";
    j["kind"] = "papr";
    j["waveform"] = waveform_name(wf);
    j["seed"] = cfg.seed;
    j["samples_per_frame"] = r.samples_per_frame;
    j["frames"] = r.per_frame_papr.size();
    j["config"] = config_echo(cfg);
    auto& arr = j["ccdf"] = nlohmann::json::array();
    for (std::size_t i = 0; i < r.ccdf_thresholds_db.size(); ++i) {
        arr.push_back({{"gamma_db", r.ccdf_thresholds_db[i]},
                       {"empirical", r.ccdf_empirical[i]},
                       {"analytic", r.ccdf_analytic[i]}});
    }
    write_text(path, j.dump(2) + "\n");
}

}  // namespace otfslab
