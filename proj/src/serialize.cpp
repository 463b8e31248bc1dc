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

#include "rivuq/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace rivuq {

namespace {

std::string station_label(Eigen::Index s) {
  std::ostringstream out;
  out << 's' << std::setw(2) << std::setfill('0') << (s + 1);
  return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, const std::filesystem::path& path, std::size_t line) {
  if (text == "nan") return std::nan("");
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    std::ostringstream msg;
    msg << path.string() << ":" << line << ": cannot parse '" << text << "' as a number";
    throw std::runtime_error(msg.str());
  }
  return value;
}

std::string family_name(PolyFamily f) { return f == PolyFamily::hermite ? "hermite" : "legendre"; }

PolyFamily family_from_name(const std::string& name) {
  if (name == "hermite") return PolyFamily::hermite;
  if (name == "legendre") return PolyFamily::legendre;
  throw std::runtime_error("unknown polynomial family '" + name + "'");
}

void expect_type(const Json& doc, const std::string& type) {
  if (!doc.is_object() || doc.value("type", std::string()) != type)
    throw std::runtime_error("expected a JSON document of type '" + type + "'");
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << value;
  return out.str();
}

Json to_json(const Eigen::Ref<const Eigen::MatrixXd>& matrix) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) row.push_back(matrix(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json_vector(const Eigen::Ref<const Eigen::VectorXd>& vector) {
  Json values = Json::array();
  for (Eigen::Index i = 0; i < vector.size(); ++i) values.push_back(vector(i));
  return values;
}

Eigen::MatrixXd matrix_from_json(const Json& rows) {
  if (!rows.is_array()) throw std::runtime_error("matrix: expected an array of rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index m = n > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  Eigen::MatrixXd out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m)
      throw std::runtime_error("matrix: ragged rows");
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return out;
}

Eigen::VectorXd vector_from_json(const Json& values) {
  if (!values.is_array()) throw std::runtime_error("vector: expected an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) out(static_cast<Eigen::Index>(i)) = values[i].get<double>();
  return out;
}

Json to_json(const InputSpace& space) {
  Json dims = Json::array();
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    Json d;
    d["name"] = space.names()[static_cast<std::size_t>(i)];
    if (const auto* n = std::get_if<NormalLaw>(&space.marginal(i))) {
      d["law"] = "normal";
      d["mean"] = n->mean;
      d["stddev"] = n->stddev;
    } else {
      const auto& u = std::get<UniformLaw>(space.marginal(i));
      d["law"] = "uniform";
      d["lower"] = u.lower;
      d["upper"] = u.upper;
    }
    dims.push_back(std::move(d));
  }
  return dims;
}

InputSpace input_space_from_json(const Json& doc) {
  if (!doc.is_array() || doc.empty()) throw std::runtime_error("input space: expected a non-empty array");
  std::vector<Marginal> marginals;
  std::vector<std::string> names;
  for (const auto& d : doc) {
    const std::string law = d.at("law").get<std::string>();
    if (law == "normal") {
      marginals.emplace_back(NormalLaw{d.at("mean").get<double>(), d.at("stddev").get<double>()});
    } else if (law == "uniform") {
      marginals.emplace_back(UniformLaw{d.at("lower").get<double>(), d.at("upper").get<double>()});
    } else {
      throw std::runtime_error("input space: unknown law '" + law + "'");
    }
    names.push_back(d.value("name", "x" + std::to_string(names.size() + 1)));
  }
  return InputSpace(std::move(marginals), std::move(names));
}

Json to_json(const DesignBox& box) {
  Json doc;
  doc["lower"] = to_json_vector(box.lower);
  doc["upper"] = to_json_vector(box.upper);
  return doc;
}

DesignBox design_box_from_json(const Json& doc) {
  DesignBox box{vector_from_json(doc.at("lower")), vector_from_json(doc.at("upper"))};
  if (box.lower.size() != box.upper.size() || box.lower.size() == 0)
    throw std::runtime_error("design box: lower and upper differ in length");
  if (!((box.upper - box.lower).array() > 0.0).all()) throw std::runtime_error("design box: empty interval");
  return box;
}

Json to_json(const PcSurrogate& pc) {
  Json doc;
  doc["type"] = "polynomial_chaos";
  doc["input_space"] = to_json(pc.space);
  Json basis;
  basis["order"] = pc.basis.order();
  Json families = Json::array();
  for (auto f : pc.basis.families()) families.push_back(family_name(f));
  basis["families"] = families;
  basis["ordering"] = "graded_lexicographic";
  Json indices = Json::array();
  for (Eigen::Index j = 0; j < pc.basis.size(); ++j) {
    Json row = Json::array();
    for (Eigen::Index i = 0; i < pc.basis.dim(); ++i) row.push_back(pc.basis.indices()(j, i));
    indices.push_back(std::move(row));
  }
  basis["indices"] = indices;
  doc["basis"] = basis;
  doc["coefficients"] = to_json(pc.coefficients);
  return doc;
}

PcSurrogate pc_from_json(const Json& doc) {
  expect_type(doc, "polynomial_chaos");
  PcSurrogate pc;
  pc.space = input_space_from_json(doc.at("input_space"));
  const Json& basis = doc.at("basis");
  std::vector<PolyFamily> families;
  for (const auto& f : basis.at("families")) families.push_back(family_from_name(f.get<std::string>()));
  pc.basis = MultiIndexBasis(std::move(families), basis.at("order").get<int>());
  const Json& indices = basis.at("indices");
  if (static_cast<Eigen::Index>(indices.size()) != pc.basis.size())
    throw std::runtime_error("polynomial chaos: basis size does not match its order");
  for (Eigen::Index j = 0; j < pc.basis.size(); ++j)
    for (Eigen::Index i = 0; i < pc.basis.dim(); ++i)
      if (indices[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)].get<int>() != pc.basis.indices()(j, i))
        throw std::runtime_error("polynomial chaos: unexpected multi-index ordering");
  pc.coefficients = matrix_from_json(doc.at("coefficients"));
  if (pc.coefficients.cols() != pc.basis.size())
    throw std::runtime_error("polynomial chaos: coefficient matrix does not match the basis");
  return pc;
}

Json to_json(const PgpSurrogate& pgp) {
  Json doc;
  doc["type"] = "pod_gaussian_process";
  doc["design_box"] = to_json(pgp.box);
  doc["inputs"] = to_json(pgp.inputs);
  doc["mean"] = to_json_vector(pgp.mean);
  Json pod;
  pod["singular_values"] = to_json_vector(pgp.basis.singular_values);
  pod["modes"] = to_json(pgp.basis.modes);
  pod["mode_samples"] = to_json(pgp.basis.mode_samples);
  pod["degenerate"] = pgp.basis.degenerate;
  doc["pod"] = pod;
  Json modes = Json::array();
  for (const auto& m : pgp.modes) {
    Json g;
    g["length_scale"] = m.hyper.length_scale;
    g["signal_variance"] = m.hyper.signal_variance;
    g["nugget"] = m.hyper.nugget;
    g["target_scale"] = m.target_scale;
    g["log_likelihood"] = m.log_likelihood;
    g["jitter"] = m.jitter;
    g["trivial"] = m.trivial;
    g["beta"] = to_json_vector(m.beta);
    modes.push_back(std::move(g));
  }
  doc["gp_modes"] = modes;
  return doc;
}

PgpSurrogate pgp_from_json(const Json& doc) {
  expect_type(doc, "pod_gaussian_process");
  PgpSurrogate pgp;
  pgp.box = design_box_from_json(doc.at("design_box"));
  pgp.inputs = matrix_from_json(doc.at("inputs"));
  pgp.mean = vector_from_json(doc.at("mean"));
  const Json& pod = doc.at("pod");
  pgp.basis.singular_values = vector_from_json(pod.at("singular_values"));
  pgp.basis.modes = matrix_from_json(pod.at("modes"));
  pgp.basis.mode_samples = matrix_from_json(pod.at("mode_samples"));
  pgp.basis.degenerate = pod.at("degenerate").get<bool>();
  const Eigen::MatrixXd unit = pgp.box.to_unit_rows(pgp.inputs);
  for (const auto& g : doc.at("gp_modes")) {
    GpMode m;
    m.hyper = {g.at("length_scale").get<double>(), g.at("signal_variance").get<double>(), g.at("nugget").get<double>()};
    m.target_scale = g.at("target_scale").get<double>();
    m.log_likelihood = g.at("log_likelihood").get<double>();
    m.jitter = g.at("jitter").get<double>();
    m.trivial = g.at("trivial").get<bool>();
    m.beta = vector_from_json(g.at("beta"));
    m.inputs = unit;
    if (m.beta.size() != unit.rows()) throw std::runtime_error("pGP: dual weights do not match the design size");
    pgp.modes.push_back(std::move(m));
  }
  if (static_cast<Eigen::Index>(pgp.modes.size()) != pgp.basis.rank() || pgp.basis.modes.rows() != pgp.mean.size())
    throw std::runtime_error("pGP: inconsistent mode count or output dimension");
  return pgp;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  if (static_cast<Eigen::Index>(table.header.size()) != table.values.cols())
    throw std::invalid_argument("write_csv: header does not match the column count");
  std::ostringstream out;
  for (std::size_t j = 0; j < table.header.size(); ++j) out << (j ? "," : "") << table.header[j];
  out << '\n';
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.values.cols(); ++j) out << (j ? "," : "") << format_double(table.values(i, j));
    out << '\n';
  }
  write_text(path, out.str());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  table.header = split_csv_line(line);
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != table.header.size()) {
      std::ostringstream msg;
      msg << path.string() << ":" << lineno << ": expected " << table.header.size() << " fields, found "
          << fields.size();
      throw std::runtime_error(msg.str());
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f, path, lineno));
    rows.push_back(std::move(row));
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(table.header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return table;
}

void write_points_csv(const std::filesystem::path& path, const Eigen::Ref<const Eigen::MatrixXd>& points,
                      const std::vector<std::string>& names) {
  if (static_cast<Eigen::Index>(names.size()) != points.cols())
    throw std::invalid_argument("write_points_csv: one name per column required");
  CsvTable t;
  t.header.push_back("index");
  t.header.insert(t.header.end(), names.begin(), names.end());
  t.values.resize(points.rows(), points.cols() + 1);
  t.values.col(0) = Eigen::VectorXd::LinSpaced(points.rows(), 0.0, static_cast<double>(points.rows() - 1));
  t.values.rightCols(points.cols()) = points;
  write_csv(path, t);
}

void write_outputs_csv(const std::filesystem::path& path, const Eigen::Ref<const Eigen::MatrixXd>& outputs) {
  std::vector<std::string> names;
  for (Eigen::Index s = 0; s < outputs.cols(); ++s) names.push_back(station_label(s));
  write_points_csv(path, outputs, names);
}

Eigen::MatrixXd read_indexed_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  if (t.header.empty() || t.header.front() != "index")
    throw std::runtime_error(path.string() + ": first column must be 'index'");
  return t.values.rightCols(t.values.cols() - 1);
}

void write_geometry_csv(const std::filesystem::path& path, const ChannelModel& channel,
                        double nominal_random_strickler) {
  const auto& sections = channel.sections();
  const auto& zones = channel.friction();
  CsvTable t;
  t.header = {"abscissa_km", "bed_elevation_m", "width_m", "Ks"};
  t.values.resize(static_cast<Eigen::Index>(sections.size()), 4);
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const auto& s = sections[i];
    const std::size_t zone = zones.zone_of(s.abscissa_km);
    const double ks = zone == zones.random_zone ? nominal_random_strickler : zones.strickler[zone];
    t.values.row(static_cast<Eigen::Index>(i)) << s.abscissa_km, s.bed_elevation_m, s.width_m, ks;
  }
  write_csv(path, t);
}

std::vector<CrossSectionGeometry> read_geometry_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  auto column = [&](const std::string& name) {
    for (std::size_t j = 0; j < t.header.size(); ++j)
      if (t.header[j] == name) return static_cast<Eigen::Index>(j);
    throw std::runtime_error(path.string() + ": missing column '" + name + "'");
  };
  const Eigen::Index a = column("abscissa_km"), z = column("bed_elevation_m"), w = column("width_m");
  std::vector<CrossSectionGeometry> sections;
  for (Eigen::Index i = 0; i < t.values.rows(); ++i)
    sections.push_back({t.values(i, a), t.values(i, z), t.values(i, w)});
  return sections;
}

void write_pc_coefficients_csv(const std::filesystem::path& path, const PcSurrogate& pc) {
  const Eigen::Index d = pc.basis.dim();
  const Eigen::Index r = pc.basis.size();
  CsvTable t;
  t.header.push_back("station");
  for (Eigen::Index i = 0; i < d; ++i) t.header.push_back("i" + std::to_string(i + 1));
  t.header.push_back("gamma");
  t.values.resize(pc.outputs() * r, d + 2);
  for (Eigen::Index a = 0; a < pc.outputs(); ++a) {
    for (Eigen::Index j = 0; j < r; ++j) {
      auto row = t.values.row(a * r + j);
      row(0) = static_cast<double>(a + 1);
      for (Eigen::Index i = 0; i < d; ++i) row(i + 1) = pc.basis.indices()(j, i);
      row(d + 1) = pc.coefficients(a, j);
    }
  }
  write_csv(path, t);
}

void write_spectrum_csv(const std::filesystem::path& path, const PodBasis& basis) {
  const Eigen::Index r = basis.rank();
  const double energy = basis.singular_values.squaredNorm();
  CsvTable t;
  t.header = {"mode", "singular_value", "energy_fraction", "cumulative_energy"};
  t.values.resize(r, 4);
  double cumulative = 0.0;
  for (Eigen::Index i = 0; i < r; ++i) {
    const double share = energy > 0.0 ? basis.singular_values(i) * basis.singular_values(i) / energy : 0.0;
    cumulative += share;
    t.values.row(i) << static_cast<double>(i + 1), basis.singular_values(i), share, cumulative;
  }
  write_csv(path, t);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_json(const std::filesystem::path& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace rivuq
