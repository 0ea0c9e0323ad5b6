#pragma once

#include <string>
#include <vector>

#include "alphalab/models.hpp"

namespace alphalab::checkpoint {

// One record, all integers little-endian:
//   "AFMD" | u16 version | u8 kind | u32 n_dims | u32 dims[n_dims]
//   | u64 seed | u64 n_weights | f64 weights[n_weights]
// An ensemble is its members' records concatenated in asset order.
inline constexpr char kMagic[4] = {'A', 'F', 'M', 'D'};
inline constexpr std::uint16_t kVersion = 1;

std::string encode(const models::ModelParams& params);
std::vector<models::ModelParams> decode(const std::string& bytes);

void save(const std::vector<models::ModelParams>& members, const std::string& path);
std::vector<models::ModelParams> load(const std::string& path);

}  // namespace alphalab::checkpoint
