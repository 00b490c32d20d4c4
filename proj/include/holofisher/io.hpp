#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "holofisher/mle.hpp"
#include "holofisher/rotation.hpp"

namespace holofisher {

/// Dataset file layouts (one sample per line, comma-separated, '#' comments):
///   matrix_csv      9 values row-major, must satisfy the Rotation invariants
///   quaternion_csv  w,x,y,z scalar-first, normalized on read (tol 1e-6)
///   vector_pair_csv v1x,v1y,v1z,v2x,v2y,v2z, orthonormalized frame
enum class DatasetFormat { matrix_csv, quaternion_csv, vector_pair_csv };

DatasetFormat dataset_format_from_string(const std::string& s);
const char* to_string(DatasetFormat f);

std::vector<Rotation> read_dataset(std::istream& in, DatasetFormat format);
void write_dataset(std::ostream& out, const std::vector<Rotation>& samples,
                   DatasetFormat format, const std::string& header_comment);

/// "v11,v12,...,v33" row-major; also accepts whitespace separators.
Mat3 parse_matrix_literal(const std::string& nine_values);

/// Mean-matrix file: '#' comments plus nine values (one or more lines).
Mat3 read_mean_file(std::istream& in);

/// FNV-1a, for input digests in result documents.
std::uint64_t fnv1a64(std::string_view bytes);

/// Machine-readable fit record, schema "holofisher/1"; round-trips losslessly
/// through JSON (binary64 values survive serialize/parse exactly).
nlohmann::json result_document(const MLEResult& result, const SufficientStats& stats,
                               const OptimConfig& cfg, std::uint64_t input_digest,
                               double wall_time_s);

}  // namespace holofisher
