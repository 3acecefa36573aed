#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ltevid::phy {

struct QppCoefficients {
    std::uint32_t k;
    std::uint32_t f1;
    std::uint32_t f2;
};

/// The 188 turbo interleaver sizes, ascending, 40..6144.
std::span<const QppCoefficients> qpp_table();

bool is_valid_block_size(std::size_t k);

/// Smallest valid block size >= n. Throws UnsupportedSizeError above 6144.
std::size_t next_valid_block_size(std::size_t n);

/// Throws UnsupportedSizeError when k is not in the table.
QppCoefficients qpp_coefficients(std::size_t k);

/// perm[i] = (f1*i + f2*i^2) mod K. Interleaved stream c'_i = c_{perm[i]}.
std::vector<std::uint32_t> qpp_permutation(std::size_t k);

}  // namespace ltevid::phy
