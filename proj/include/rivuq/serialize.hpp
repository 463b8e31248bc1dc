// Copyright 2026 The rivuq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RIVUQ_SERIALIZE_HPP_
#define RIVUQ_SERIALIZE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rivuq/channel.hpp"
#include "rivuq/input_space.hpp"
#include "rivuq/pc.hpp"
#include "rivuq/pgp.hpp"
#include "rivuq/sampling.hpp"

namespace rivuq {

using Json = nlohmann::ordered_json;

/// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

Json to_json(const Eigen::Ref<const Eigen::MatrixXd>& matrix);  // array of rows
Json to_json_vector(const Eigen::Ref<const Eigen::VectorXd>& vector);
Eigen::MatrixXd matrix_from_json(const Json& rows);
Eigen::VectorXd vector_from_json(const Json& values);

Json to_json(const InputSpace& space);
InputSpace input_space_from_json(const Json& doc);
Json to_json(const DesignBox& box);
DesignBox design_box_from_json(const Json& doc);

/// Self-describing documents: input space, basis specification and
/// coefficients for PC; design, mean, POD basis and per-mode GP data for pGP.
Json to_json(const PcSurrogate& pc);
PcSurrogate pc_from_json(const Json& doc);
Json to_json(const PgpSurrogate& pgp);
PgpSurrogate pgp_from_json(const Json& doc);

/// Plain CSV table with a header row. Values use format_double.
struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;
};
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// Points with an `index` column followed by one column per input name.
void write_points_csv(const std::filesystem::path& path, const Eigen::Ref<const Eigen::MatrixXd>& points,
                      const std::vector<std::string>& names);
/// Station outputs with an `index` column followed by s01, s02, ...
void write_outputs_csv(const std::filesystem::path& path, const Eigen::Ref<const Eigen::MatrixXd>& outputs);
/// Drops the leading `index` column written by the two functions above.
Eigen::MatrixXd read_indexed_csv(const std::filesystem::path& path);

/// abscissa_km, bed_elevation_m, width_m, Ks per cross-section. The random
/// zone is reported with `nominal_random_strickler`.
void write_geometry_csv(const std::filesystem::path& path, const ChannelModel& channel,
                        double nominal_random_strickler);
/// Cross-sections from a CSV with columns abscissa_km, bed_elevation_m,
/// width_m (further columns are ignored).
std::vector<CrossSectionGeometry> read_geometry_csv(const std::filesystem::path& path);

/// station, i1, i2, ..., gamma (stations numbered from 1).
void write_pc_coefficients_csv(const std::filesystem::path& path, const PcSurrogate& pc);
/// mode, singular_value, energy_fraction, cumulative_energy.
void write_spectrum_csv(const std::filesystem::path& path, const PodBasis& basis);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& doc);
Json read_json(const std::filesystem::path& path);

}  // namespace rivuq

#endif  // RIVUQ_SERIALIZE_HPP_
