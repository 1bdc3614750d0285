#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otfslab/channel.hpp"
#include "otfslab/impairments.hpp"
#include "otfslab/metrics.hpp"
#include "otfslab/receiver.hpp"
#include "otfslab/types.hpp"

namespace otfslab {

enum class Waveform { otfs, ofdm };
enum class DetectorKind { automatic, mp, map_oracle, one_tap };
enum class CsiMode { perfect, pilot };

const char* waveform_name(Waveform w);

struct GridConfig {
    std::size_t m_delay = 8;
    std::size_t n_doppler = 8;
    int alphabet_order = 4;
    int cp_len = -1;  // < 0: per-frame max tap delay (OTFS) / M/8 per symbol (OFDM)
};

struct PilotConfig {
    long long doppler_pos = -1;  // < 0: N/2
    long long delay_pos = -1;    // < 0: M/2
    double amplitude = 0.0;      // <= 0: sqrt(10) (pilot power 10x mean data power)
    int guard_doppler = -1;      // < 0: 2 * max |Doppler tap|
    int guard_delay = -1;        // < 0: max delay tap
};

struct SweepConfig {
    std::vector<double> snr_db = {0, 5, 10, 15, 20, 25};
    std::size_t frames_per_point = 1000;
};

struct ExperimentConfig {
    std::vector<Waveform> waveforms = {Waveform::otfs};
    GridConfig grid;
    ChannelProfile channel = ChannelProfile::default_test_profile();
    ImpairmentChain impairments;
    DetectorKind detector = DetectorKind::automatic;
    MpConfig mp;  // noise_variance is overwritten per SNR point
    CsiMode csi = CsiMode::perfect;
    PilotConfig pilot;
    SweepConfig sweep;
    std::size_t papr_frames = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 0;      // 0: OTFSLAB_THREADS, else hardware concurrency
    std::string source_json;   // raw config text, echoed into result files
};

// Explicit count if nonzero, else OTFSLAB_THREADS, else the hardware count.
unsigned resolve_thread_count(unsigned requested);

// Monte-Carlo BER sweep for one waveform. Per SNR point: random bits ->
// symbols -> frame (embedded pilot when csi == pilot) -> modulate -> tx
// impairments -> channel -> AWGN calibrated to unit symbol energy -> rx
// impairments -> demodulate -> estimate/equalize/detect -> demap; errors are
// counted over data cells only. Per-frame RNG streams derive from (seed,
// waveform, point, frame), so the output is identical for any worker count.
std::vector<BerPoint> run_ber_experiment(const ExperimentConfig& cfg, Waveform wf);

// PAPR of the bare modulated waveform (no CP, channel, noise or
// impairments). For OFDM the per-frame statistic covers the concatenation of
// N symbols, so both waveforms are compared over M*N samples.
PaprResult run_papr_experiment(const ExperimentConfig& cfg, Waveform wf, std::size_t n_frames);

// Effective-matrix summary for `probe-channel`.
struct ChannelProbe {
    std::size_t dim = 0;
    std::size_t nnz = 0;
    std::size_t row_nnz_min = 0;
    std::size_t row_nnz_max = 0;
    std::size_t n_taps = 0;
    double consistency_residual = 0.0;  // ||H vec(x) - pipeline(x)|| on a random frame
};

ChannelProbe probe_channel(const ExperimentConfig& cfg);

}  // namespace otfslab
