#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "otfslab/frame.hpp"
#include "otfslab/types.hpp"

namespace otfslab {

// One resolvable path: integer delay in samples, integer Doppler in cycles
// per frame (M*N payload samples), complex gain.
struct ChannelTap {
    int delay = 0;
    int doppler = 0;
    Complex gain{1.0, 0.0};
};

struct ChannelProfile {
    std::vector<ChannelTap> taps;
    bool normalize = false;

    // Applies the normalization invariant (sum |h_i|^2 == 1) when requested.
    static ChannelProfile make(std::vector<ChannelTap> taps, bool normalize);
    static ChannelProfile from_json_text(const std::string& text);
    static ChannelProfile from_json_file(const std::string& path);
    // Equal-power 4-tap test profile: delays {0,1,2,3}, Doppler {0,1,-1,2}.
    static ChannelProfile default_test_profile();

    int max_delay() const;
    int max_abs_doppler() const;
    double total_power() const;
};

// y[n] = sum_i h_i s[n - l_i] exp(j 2 pi k_i (n - l_i) / frame_len), with n
// indexing the CP-inclusive stream and s[n-l] = 0 before the stream starts.
// frame_len is the Doppler normalization (M*N payload samples); the stream
// may be longer than frame_len + max delay (OFDM frames with per-symbol CPs).
// Throws "uncovered delay" when a delay exceeds the stream's prefix margin.
CVec apply_channel(const CVec& s, const ChannelProfile& profile, std::size_t frame_len);

// Sparse MN x MN delay-Doppler domain channel matrix. Row d holds the
// nonzero couplings of received cell d; column c those of transmitted cell
// c. Edges are indexed row-major for the detector's belief tables.
class EffectiveMatrix {
public:
    struct RowEntry {
        std::uint32_t col;
        std::uint32_t edge;
        Complex val;
    };
    struct ColEntry {
        std::uint32_t row;
        std::uint32_t edge;
        Complex val;
    };

    EffectiveMatrix() = default;

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_.size(); }
    std::size_t edge_count() const { return edges_; }

    const std::vector<RowEntry>& row(std::size_t d) const { return rows_[d]; }
    const std::vector<ColEntry>& col(std::size_t c) const { return cols_[c]; }

    Complex at(std::size_t d, std::size_t c) const;  // 0 when absent
    CVec multiply(const CVec& x) const;

    // Submatrix with the given columns (in order), all rows kept.
    EffectiveMatrix select_columns(const std::vector<std::uint32_t>& keep) const;

    class Builder {
    public:
        Builder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
        void add(std::uint32_t row, std::uint32_t col, Complex v);
        EffectiveMatrix finalize(double prune_below = 1e-9);

    private:
        std::size_t rows_, cols_;
        std::map<std::pair<std::uint32_t, std::uint32_t>, Complex> entries_;
    };

private:
    std::vector<std::vector<RowEntry>> rows_;
    std::vector<std::vector<ColEntry>> cols_;
    std::size_t edges_ = 0;
};

// Builds the matrix by probing the actual modulate -> channel -> demodulate
// pipeline with unit basis frames, so it matches the modem conventions by
// construction. Entries below 1e-9 in magnitude are pruned.
EffectiveMatrix build_effective_matrix(const ChannelProfile& profile, std::size_t m_delay,
                                       std::size_t n_doppler, const CpConfig& cp);

// Memoized unit-gain single-tap responses for one (M, N, cp) geometry. Used
// by the pilot estimator for its phase calibration and to assemble the
// detector matrix from estimated taps without re-probing every frame.
// ensure() probes and caches; the const lookups are safe to share across
// threads once the needed taps are warm.
class TapResponseCache {
public:
    TapResponseCache(std::size_t m_delay, std::size_t n_doppler, CpConfig cp)
        : m_(m_delay), n_(n_doppler), cp_(cp) {}

    void ensure(int delay, int doppler);
    const EffectiveMatrix& unit_response(int delay, int doppler) const;

    // Phase factor a unit tap (delay, doppler) imprints on the pilot cell's
    // response, and the cell it lands on.
    struct PilotResponse {
        std::uint32_t cell;
        Complex phase;
    };
    PilotResponse pilot_response(int delay, int doppler, std::uint32_t pilot_cell) const;

    // Weighted sum of cached unit responses.
    EffectiveMatrix assemble(const std::vector<ChannelTap>& taps) const;

    std::size_t m_delay() const { return m_; }
    std::size_t n_doppler() const { return n_; }
    const CpConfig& cp() const { return cp_; }

private:
    std::size_t m_, n_;
    CpConfig cp_;
    std::map<std::pair<int, int>, std::shared_ptr<const EffectiveMatrix>> cache_;
};

// sigma^2 = signal_power / 10^(snr_db/10); throws for signal_power <= 0.
double noise_variance_for_snr(double snr_db, double signal_power);

}  // namespace otfslab
