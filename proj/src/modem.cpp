#include "mimosd/modem.hpp"

#include <cmath>

namespace mimosd {

namespace {

// Reflected-Gray decode: bit pattern (MSB-first) -> level rank 0..2^k-1.
int gray_rank(int pattern, int bits) {
  int rank = 0;
  int acc = 0;
  for (int i = bits - 1; i >= 0; --i) {
    acc ^= (pattern >> i) & 1;
    rank = (rank << 1) | acc;
  }
  return rank;
}

}  // namespace

Constellation make_constellation(int order) {
  if (order != 2 && order != 4 && order != 16 && order != 64) {
    throw modem_error("make_constellation: order must be 2, 4, 16 or 64");
  }
  Constellation c;
  c.order = order;
  c.bits_per_symbol = 0;
  for (int v = order; v > 1; v >>= 1) {
    ++c.bits_per_symbol;
  }

  const bool has_quadrature = order > 2;
  const int axis_bits = has_quadrature ? c.bits_per_symbol / 2 : 1;
  const int levels = 1 << axis_bits;

  // Raw PAM levels per axis: odd integers centred on zero.
  std::vector<double> pam(levels);
  for (int rank = 0; rank < levels; ++rank) {
    pam[rank] = static_cast<double>(2 * rank - (levels - 1));
  }
  double axis_energy = 0.0;
  for (double v : pam) {
    axis_energy += v * v;
  }
  axis_energy /= levels;
  const double symbol_energy = has_quadrature ? 2.0 * axis_energy : axis_energy;
  c.energy_norm = 1.0 / std::sqrt(symbol_energy);

  c.points.resize(order);
  for (int idx = 0; idx < order; ++idx) {
    const int i_pattern = has_quadrature ? idx >> axis_bits : idx;
    const int q_pattern = has_quadrature ? idx & (levels - 1) : 0;
    const double re = pam[gray_rank(i_pattern, axis_bits)];
    const double im = has_quadrature ? pam[gray_rank(q_pattern, axis_bits)] : 0.0;
    c.points[idx] = cplx(re, im) * c.energy_norm;
  }
  return c;
}

int block_to_index(const BitBlock& block, const Constellation& c) {
  if (static_cast<int>(block.size()) != c.bits_per_symbol) {
    throw modem_error("map_bits: block length must equal bits per symbol");
  }
  int idx = 0;
  for (int8_t b : block) {
    if (b != -1 && b != 1) {
      throw modem_error("map_bits: bits must be bipolar (-1 or +1)");
    }
    idx = (idx << 1) | (b > 0 ? 1 : 0);
  }
  return idx;
}

cplx map_bits(const BitBlock& block, const Constellation& c) {
  return c.points[block_to_index(block, c)];
}

BitBlock demap_index(int symbol_index, const Constellation& c) {
  if (symbol_index < 0 || symbol_index >= c.order) {
    throw modem_error("demap_index: index out of range");
  }
  BitBlock block(c.bits_per_symbol);
  for (int i = 0; i < c.bits_per_symbol; ++i) {
    const int bit = (symbol_index >> (c.bits_per_symbol - 1 - i)) & 1;
    block[i] = bit ? 1 : -1;
  }
  return block;
}

std::vector<cplx> assemble_vector(const std::vector<BitBlock>& blocks, const Constellation& c,
                                  std::size_t num_antennas) {
  if (blocks.size() != num_antennas) {
    throw modem_error("assemble_vector: wrong antenna count");
  }
  std::vector<cplx> s(blocks.size());
  for (std::size_t t = 0; t < blocks.size(); ++t) {
    s[t] = map_bits(blocks[t], c);
  }
  return s;
}

}  // namespace mimosd
