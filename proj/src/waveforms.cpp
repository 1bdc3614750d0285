#include "otfslab/waveforms.hpp"

#include <stdexcept>

#include "otfslab/dft.hpp"

namespace otfslab {

TimeFrequencyFrame isfft(const DelayDopplerFrame& dd) {
    const std::size_t m = dd.m_delay();
    const std::size_t n = dd.n_doppler();
    // Doppler k -> time n (inverse kernel), per delay column.
    CVec work = dd.data();
    for (std::size_t l = 0; l < m; ++l) {
        dft::transform_strided(work.data() + l, n, m, /*inverse=*/true);
    }
    // Delay l -> subcarrier m (forward kernel), per time slot.
    TimeFrequencyFrame tf(n, m);
    for (std::size_t slot = 0; slot < n; ++slot) {
        for (std::size_t l = 0; l < m; ++l) tf.at(slot, l) = work[slot * m + l];
        dft::transform(&tf.at(slot, 0), m, /*inverse=*/false);
    }
    return tf;
}

DelayDopplerFrame sfft(const TimeFrequencyFrame& tf) {
    const std::size_t m = tf.m_freq();
    const std::size_t n = tf.n_time();
    // Subcarrier m -> delay l (inverse kernel), per time slot.
    CVec work = tf.data();
    for (std::size_t slot = 0; slot < n; ++slot) {
        dft::transform(work.data() + slot * m, m, /*inverse=*/true);
    }
    // Time n -> Doppler k (forward kernel), per delay column.
    DelayDopplerFrame dd(m, n);
    for (std::size_t l = 0; l < m; ++l) {
        dft::transform_strided(work.data() + l, n, m, /*inverse=*/false);
    }
    dd.data() = std::move(work);
    return dd;
}

CVec heisenberg(const TimeFrequencyFrame& tf) {
    const std::size_t m = tf.m_freq();
    const std::size_t n = tf.n_time();
    CVec s = tf.data();
    for (std::size_t slot = 0; slot < n; ++slot) {
        dft::transform(s.data() + slot * m, m, /*inverse=*/true);
    }
    return s;
}

TimeFrequencyFrame wigner(const CVec& s, std::size_t m_freq, std::size_t n_time) {
    if (s.size() != m_freq * n_time) {
        throw std::invalid_argument("wigner: sample count does not match M*N");
    }
    TimeFrequencyFrame tf(n_time, m_freq);
    tf.data() = s;
    for (std::size_t slot = 0; slot < n_time; ++slot) {
        dft::transform(tf.data().data() + slot * m_freq, m_freq, /*inverse=*/false);
    }
    return tf;
}

namespace {

CVec add_cyclic_prefix(const CVec& block, std::size_t cp_len) {
    if (cp_len >= block.size()) {
        throw std::invalid_argument("cyclic prefix must be shorter than the block");
    }
    CVec out;
    out.reserve(block.size() + cp_len);
    out.insert(out.end(), block.end() - cp_len, block.end());
    out.insert(out.end(), block.begin(), block.end());
    return out;
}

}  // namespace

CVec otfs_modulate(const DelayDopplerFrame& dd, const CpConfig& cp) {
    if (cp.scope != CpScope::per_otfs_frame) {
        throw std::invalid_argument("otfs_modulate expects a per-frame cyclic prefix");
    }
    return add_cyclic_prefix(heisenberg(isfft(dd)), cp.cp_len);
}

DelayDopplerFrame otfs_demodulate(const CVec& r, std::size_t m_delay, std::size_t n_doppler,
                                  const CpConfig& cp) {
    if (cp.scope != CpScope::per_otfs_frame) {
        throw std::invalid_argument("otfs_demodulate expects a per-frame cyclic prefix");
    }
    if (r.size() != m_delay * n_doppler + cp.cp_len) {
        throw std::invalid_argument("otfs_demodulate: sample count does not match M*N + cp");
    }
    CVec payload(r.begin() + cp.cp_len, r.end());
    return sfft(wigner(payload, m_delay, n_doppler));
}

CVec ofdm_modulate(const CVec& subcarriers, const CpConfig& cp) {
    if (cp.scope != CpScope::per_ofdm_symbol) {
        throw std::invalid_argument("ofdm_modulate expects a per-symbol cyclic prefix");
    }
    CVec x = dft::transform(subcarriers, /*inverse=*/true);
    return add_cyclic_prefix(x, cp.cp_len);
}

CVec ofdm_demodulate(const CVec& r, std::size_t n_subcarriers, const CpConfig& cp) {
    if (cp.scope != CpScope::per_ofdm_symbol) {
        throw std::invalid_argument("ofdm_demodulate expects a per-symbol cyclic prefix");
    }
    if (r.size() != n_subcarriers + cp.cp_len) {
        throw std::invalid_argument("ofdm_demodulate: sample count does not match N + cp");
    }
    CVec payload(r.begin() + cp.cp_len, r.end());
    dft::transform(payload.data(), payload.size(), /*inverse=*/false);
    return payload;
}

DelayDopplerFrame build_pilot_frame(const CVec& data_syms, const FrameLayout& layout) {
    if (data_syms.size() != layout.data_count()) {
        throw std::invalid_argument("build_pilot_frame: symbol count does not match data mask");
    }
    DelayDopplerFrame dd(layout.m_delay, layout.n_doppler);
    std::size_t next = 0;
    for (std::size_t i = 0; i < layout.data_mask.size(); ++i) {
        if (layout.data_mask[i]) dd.data()[i] = data_syms[next++];
    }
    dd.data()[layout.pilot_cell()] = Complex{layout.pilot_amplitude, 0.0};
    return dd;
}

CVec extract_data_cells(const DelayDopplerFrame& dd, const FrameLayout& layout) {
    if (dd.m_delay() != layout.m_delay || dd.n_doppler() != layout.n_doppler) {
        throw std::invalid_argument("extract_data_cells: frame/layout dimension mismatch");
    }
    CVec out;
    out.reserve(layout.data_count());
    for (std::size_t i = 0; i < layout.data_mask.size(); ++i) {
        if (layout.data_mask[i]) out.push_back(dd.data()[i]);
    }
    return out;
}

}  // namespace otfslab
