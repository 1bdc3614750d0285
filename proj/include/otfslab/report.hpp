#pragma once

#include <string>
#include <vector>

#include "otfslab/experiment.hpp"
#include "otfslab/metrics.hpp"

namespace otfslab {

// Result writers. CSV is the canonical tabular output (UTF-8, LF line ends,
// '.' decimal separator, fixed headers); JSON mirrors it with the config
// echoed for provenance. Nothing time- or host-dependent is written, so
// reruns with the same config and seed are byte-identical.

void write_ber_csv(const std::string& path, const std::vector<BerPoint>& points);
void write_ber_json(const std::string& path, const ExperimentConfig& cfg, Waveform wf,
                    const std::vector<BerPoint>& points);

void write_papr_csv(const std::string& path, const PaprResult& result);
void write_papr_json(const std::string& path, const ExperimentConfig& cfg, Waveform wf,
                     const PaprResult& result);

std::string ber_csv_text(const std::vector<BerPoint>& points);
std::string papr_csv_text(const PaprResult& result);

}  // namespace otfslab
