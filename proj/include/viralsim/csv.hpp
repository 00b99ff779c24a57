// Trajectory export: header `t,S,I,R`, one row per sample, numbers with
// 17 significant digits (bit-exact round trip), LF line endings.
#ifndef VIRALSIM_CSV_HPP
#define VIRALSIM_CSV_HPP

#include <string>
#include <string_view>
#include <vector>

#include "viralsim/campaign.hpp"

namespace viralsim::io {

std::string write_csv(const campaign::Trajectory& traj);

struct CsvData {
    std::vector<double> t, s, i, r;
};

// Strict reader for the format emitted above; throws on any deviation.
CsvData read_csv(std::string_view text);

}  // namespace viralsim::io

#endif
