#pragma once

#include "otfslab/frame.hpp"
#include "otfslab/types.hpp"

namespace otfslab {

// Delay-Doppler <-> time-frequency transform pair, unitary 1/sqrt(NM)
// scaling in both directions:
//   X[n,m] = (1/sqrt(NM)) sum_k sum_l x[k,l] exp(+j2pi(nk/N - ml/M))
// realized as a unitary inverse DFT along Doppler followed by a unitary
// forward DFT along delay (and the exact reverse for sfft).
TimeFrequencyFrame isfft(const DelayDopplerFrame& dd);
DelayDopplerFrame sfft(const TimeFrequencyFrame& tf);

// Time-frequency <-> time-domain pair for rectangular transmit/receive
// pulses: per time slot, an M-point unitary IDFT (heisenberg) or DFT
// (wigner); slots are concatenated.
CVec heisenberg(const TimeFrequencyFrame& tf);
TimeFrequencyFrame wigner(const CVec& s, std::size_t m_freq, std::size_t n_time);

// heisenberg(isfft(dd)) with one cyclic prefix for the whole frame.
CVec otfs_modulate(const DelayDopplerFrame& dd, const CpConfig& cp);
DelayDopplerFrame otfs_demodulate(const CVec& r, std::size_t m_delay, std::size_t n_doppler,
                                  const CpConfig& cp);

// Unitary IDFT/DFT with a per-symbol cyclic prefix.
CVec ofdm_modulate(const CVec& subcarriers, const CpConfig& cp);
CVec ofdm_demodulate(const CVec& r, std::size_t n_subcarriers, const CpConfig& cp);

// Places the pilot impulse and fills the data-mask cells with `data_syms` in
// ascending flat-index order (Doppler-major, delay fastest); guard cells stay
// zero. Throws if the symbol count does not match the mask.
DelayDopplerFrame build_pilot_frame(const CVec& data_syms, const FrameLayout& layout);
// Reads back the data cells in the same order.
CVec extract_data_cells(const DelayDopplerFrame& dd, const FrameLayout& layout);

}  // namespace otfslab
