#ifndef MIMOSD_MODEM_HPP
#define MIMOSD_MODEM_HPP

#include <cstdint>
#include <vector>

#include "mimosd/linalg.hpp"

namespace mimosd {

// One antenna's bit group for one channel use, bipolar convention:
// logical 0 <-> -1, logical 1 <-> +1.
using BitBlock = std::vector<int8_t>;

// Gray-mapped square QAM (or BPSK for order 2), normalized to unit average
// symbol energy. Point index equals the bit pattern read MSB-first with the
// in-phase bits leading; per axis the labels follow the reflected Gray code
// {00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3} (scaled).
struct Constellation {
  int order;            // |S|
  int bits_per_symbol;  // log2 |S|
  std::vector<cplx> points;
  double energy_norm;   // scale applied to raw integer levels
};

struct modem_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// order in {2, 4, 16, 64}; order 2 is BPSK on the in-phase axis, kept for
// scalar detection tests.
Constellation make_constellation(int order);

cplx map_bits(const BitBlock& block, const Constellation& c);

BitBlock demap_index(int symbol_index, const Constellation& c);

// One block per transmit antenna, antenna 0 first. Throws when the block
// count does not match the expected antenna count.
std::vector<cplx> assemble_vector(const std::vector<BitBlock>& blocks, const Constellation& c,
                                  std::size_t num_antennas);

// Pattern index for a bit block (MSB-first), the inverse of demap_index.
int block_to_index(const BitBlock& block, const Constellation& c);

}  // namespace mimosd

#endif
