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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <doctest.h>

#include "rivuq/experiment.hpp"
#include "rivuq/serialize.hpp"
#include "schema_check.hpp"

using namespace rivuq;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rivuq-test-" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig smoke_config(const fs::path& out) {
  ExperimentConfig c;
  c.n_reference = 100;
  c.budgets = {49};
  c.sobol_samples = 100;
  c.out_dir = out.string();
  return c;
}

void check_schema(const fs::path& document, const std::string& schema_name) {
  const auto schema = nlohmann::json::parse(read_text(fs::path(RIVUQ_SCHEMA_DIR) / schema_name));
  const auto errors = schema_check::validate(nlohmann::json::parse(read_text(document)), schema);
  std::string joined;
  for (const auto& e : errors) joined += e + "\n";
  const std::string context = document.string() + " against " + schema_name + ":\n" + joined;
  CHECK_MESSAGE(errors.empty(), context);
}

std::string run_cli(const std::string& args, int* status) {
  const char* exe = std::getenv("RIVUQ_CLI");
  REQUIRE(exe != nullptr);
  const fs::path capture = fs::temp_directory_path() / "rivuq-test-cli-output.txt";
  *status = std::system(("\"" + std::string(exe) + "\" " + args + " > \"" + capture.string() + "\" 2>&1").c_str());
  return read_text(capture);
}

}  // namespace

TEST_CASE("configuration round trip") {
  ExperimentConfig c;
  c.seed = 99;
  c.budgets = {121};
  c.workers = 3;
  c.gp.restarts = 4;
  const Json doc = config_to_json(c);
  const ExperimentConfig back = config_from_json(doc);
  CHECK(config_to_json(back) == doc);
  CHECK(config_hash(back) == config_hash(c));
  ExperimentConfig other = c;
  other.workers = 1;
  other.out_dir = "elsewhere";
  CHECK(config_hash(other) == config_hash(c));
  other.seed = 100;
  CHECK(config_hash(other) != config_hash(c));
  CHECK(c.sobol_seed() == 100);
}

TEST_CASE("default configuration conforms to the published schema") {
  const fs::path dir = scratch("schema");
  fs::create_directories(dir);
  write_json(dir / "config.json", config_to_json(ExperimentConfig{}));
  check_schema(dir / "config.json", "config.schema.json");
  Json bad = config_to_json(ExperimentConfig{});
  bad["surplus"] = 1;
  bad["workers"] = 0;
  const auto schema = nlohmann::json::parse(read_text(fs::path(RIVUQ_SCHEMA_DIR) / "config.schema.json"));
  CHECK(schema_check::validate(nlohmann::json::parse(bad.dump()), schema).size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("configuration errors are explicit") {
  Json doc = config_to_json(ExperimentConfig{});
  doc["n_refrence"] = 5;
  CHECK_THROWS_WITH_AS(config_from_json(doc), doctest::Contains("n_refrence"), std::invalid_argument);

  CHECK(pc_order_for_budget(49, 2) == 6);
  CHECK(pc_order_for_budget(121, 2) == 10);
  CHECK(pc_order_for_budget(256, 2) == 15);
  try {
    pc_order_for_budget(50, 2);
    FAIL("budget 50 accepted");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("49") != std::string::npos);
    CHECK(msg.find("64") != std::string::npos);
  }
  Json bad = config_to_json(ExperimentConfig{});
  bad["budgets"] = {50};
  CHECK_THROWS(config_from_json(bad));
  bad = config_to_json(ExperimentConfig{});
  bad["alpha"] = 1.5;
  CHECK_THROWS(config_from_json(bad));
}

TEST_CASE("end-to-end smoke run") {
  const fs::path out = scratch("smoke");
  const ExperimentConfig c = smoke_config(out);
  const ReferenceRun ref = run_reference(c);
  CHECK(ref.forward_solves == 100);
  CHECK(ref.outputs.rows() == 100);
  CHECK(ref.outputs.cols() == 14);
  // Sample mean of the discharge within 3 sigma / sqrt(N).
  CHECK(std::abs(ref.inputs.col(0).mean() - 4031.0) < 3.0 * 400.0 / std::sqrt(100.0));

  const FitRun fit = run_fit(c);
  REQUIRE(fit.pc_solves.size() == 1);
  CHECK(fit.pc_solves[0] == 49);
  CHECK(fit.pgp_solves[0] == 49);

  const Json summary = run_comparison(c);
  CHECK(summary.at("config_hash") == config_hash(c));
  const Json& solves = summary.at("forward_solves");
  CHECK(solves.at("reference") == 100);
  CHECK(solves.at("sobol_reference") == 400);
  CHECK(solves.at("pc").at("49") == 49);
  CHECK(solves.at("pgp").at("49") == 49);
  CHECK(solves.at("pc_sobol_extra") == 0);
  CHECK(solves.at("pgp_sobol_extra") == 0);

  for (const char* rel : {"reference/inputs.csv", "reference/outputs.csv", "reference/geometry.csv",
                          "reference/metadata.json", "fit/pc_049.json", "fit/pc_049_nodes.csv",
                          "fit/pc_049_coefficients.csv", "fit/pgp_049.json", "fit/pgp_049_design.csv",
                          "fit/pgp_049_spectrum.csv", "fit/metadata.json", "compare/summary.json",
                          "compare/report_pc_049.json", "compare/report_pgp_049.json", "compare/corr_mse.csv",
                          "compare/sobol_error.csv", "compare/pdf_s01.csv", "compare/pdf_s07.csv"})
    CHECK_MESSAGE(fs::exists(out / rel), rel);
  for (const char* stage : {"reference", "fit", "compare"})
    check_schema(out / stage / "metadata.json", "metadata.schema.json");
  check_schema(out / "compare" / "summary.json", "summary.schema.json");
  CHECK(read_text(out / "reference" / "inputs.csv").rfind("index,Q_m3s,Ks3\n", 0) == 0);
  CHECK(read_text(out / "reference" / "outputs.csv").rfind("index,s01,", 0) == 0);
  CHECK(read_text(out / "compare" / "pdf_s07.csv").rfind("series,level_m,density\n", 0) == 0);

  const PcSurrogate pc = pc_from_json(read_json(out / "fit" / "pc_049.json"));
  CHECK((pc.coefficients - fit.pc[0].coefficients).cwiseAbs().maxCoeff() == 0.0);
  const PgpSurrogate pgp = pgp_from_json(read_json(out / "fit" / "pgp_049.json"));
  CHECK((eval_pgp_rows(pgp, ref.inputs) - eval_pgp_rows(fit.pgp[0], ref.inputs)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(!format_report(summary).empty());

  // Mismatched configuration is refused at the compare stage.
  ExperimentConfig changed = c;
  changed.seed += 1;
  CHECK_THROWS(run_comparison(changed));
  fs::remove_all(out);
}

TEST_CASE("same seed gives byte-identical reference inputs") {
  const fs::path a = scratch("seed-a"), b = scratch("seed-b");
  run_reference(smoke_config(a));
  ExperimentConfig cb = smoke_config(b);
  cb.workers = 2;
  run_reference(cb);
  CHECK(read_text(a / "reference" / "inputs.csv") == read_text(b / "reference" / "inputs.csv"));
  CHECK(read_text(a / "reference" / "outputs.csv") == read_text(b / "reference" / "outputs.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("command-line driver") {
  int status = 0;
  const std::string version = run_cli("--version", &status);
  CHECK(status == 0);
  CHECK(version.find(kVersion) != std::string::npos);

  const std::string cfg_text = run_cli("config --seed 7 --workers 2", &status);
  CHECK(status == 0);
  const ExperimentConfig parsed = config_from_json(Json::parse(cfg_text));
  CHECK(parsed.seed == 7);
  CHECK(parsed.workers == 2);

  const fs::path out = scratch("cli");
  fs::create_directories(out);
  Json doc = config_to_json(smoke_config(out / "run"));
  write_json(out / "config.json", doc);
  const std::string report = run_cli("run --config \"" + (out / "config.json").string() + "\"", &status);
  CHECK_MESSAGE(status == 0, report);
  CHECK(fs::exists(out / "run" / "compare" / "summary.json"));
  const std::string again = run_cli("report --config \"" + (out / "config.json").string() + "\"", &status);
  CHECK(status == 0);
  CHECK(!again.empty());

  doc["budgets"] = {50};
  write_json(out / "bad.json", doc);
  const std::string err = run_cli("reference --config \"" + (out / "bad.json").string() + "\"", &status);
  CHECK(status != 0);
  CHECK(err.find("rivuq: error:") != std::string::npos);
  CHECK(err.find("64") != std::string::npos);

  run_cli("no-such-verb", &status);
  CHECK(status != 0);
  fs::remove_all(out);
}
