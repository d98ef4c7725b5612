#ifndef AGGEQ_IO_HPP
#define AGGEQ_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "aggeq/model.hpp"

// Deterministic file emission: fixed 17-significant-digit formatting, no
// timestamps, so identical configurations produce byte-identical files.

namespace aggeq::io {

std::string format_number(double v);

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_text(const std::filesystem::path& path, const std::string& content);

// two-column r,rho file -> profile (nodes must be increasing from 0)
RadialProfile read_profile_csv(const std::filesystem::path& path);

}  // namespace aggeq::io

#endif
