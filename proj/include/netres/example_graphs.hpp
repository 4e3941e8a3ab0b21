#pragma once

#include <string_view>

namespace netres {

// Bundled symmetrizable example graphs. Masses are powers of two and every
// weight is an exact decimal quotient base/mass, so m_i w_ij = m_j w_ji holds
// bit-exactly in double arithmetic after a file round trip.
//
// Eigenfrequencies: (0, 1.8021, 2.1649, 2.8312).
inline constexpr std::string_view example_graph4 =
    "# 4-node symmetrizable directed graph (masses 1, 2, 1, 0.5)\n"
    "4\n"
    "0 1 2.68\n"
    "1 0 1.34\n"
    "0 2 0.49\n"
    "2 0 0.49\n"
    "0 3 0.38\n"
    "3 0 0.76\n"
    "1 2 1.77\n"
    "2 1 3.54\n"
    "2 3 1.5\n"
    "3 2 3\n";

// Eigenfrequencies: (0, 1.7903, 2.3789, 3.7252, 4.2409).
inline constexpr std::string_view example_graph5 =
    "# 5-node symmetrizable directed graph (masses 2, 1, 0.5, 1, 4)\n"
    "5\n"
    "0 1 0.875\n"
    "1 0 1.75\n"
    "1 2 2.04\n"
    "2 1 4.08\n"
    "2 3 6.12\n"
    "3 2 3.06\n"
    "3 4 2.91\n"
    "4 3 0.7275\n"
    "0 4 2.54\n"
    "4 0 1.27\n"
    "1 3 4.74\n"
    "3 1 4.74\n"
    "0 2 1.175\n"
    "2 0 4.7\n";

}  // namespace netres
