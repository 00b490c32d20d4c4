#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "holofisher/io.hpp"
#include "test_util.hpp"

using namespace holofisher;

TEST_CASE("matrix_csv round-trips bit-exactly") {
  const auto samples = haar_sample(71, 25);
  std::stringstream s;
  write_dataset(s, samples, DatasetFormat::matrix_csv, "roundtrip test");
  const auto back = read_dataset(s, DatasetFormat::matrix_csv);
  REQUIRE(back.size() == samples.size());
  for (std::size_t i = 0; i < back.size(); ++i)
    CHECK(back[i].matrix() == samples[i].matrix());
}

TEST_CASE("quaternion_csv round-trips to high accuracy") {
  const auto samples = haar_sample(72, 25);
  std::stringstream s;
  write_dataset(s, samples, DatasetFormat::quaternion_csv, "");
  const auto back = read_dataset(s, DatasetFormat::quaternion_csv);
  REQUIRE(back.size() == samples.size());
  for (std::size_t i = 0; i < back.size(); ++i)
    CHECK((back[i].matrix() - samples[i].matrix()).norm() < 1e-12);
}

TEST_CASE("vector_pair_csv round-trips the frame") {
  const auto samples = haar_sample(73, 10);
  std::stringstream s;
  write_dataset(s, samples, DatasetFormat::vector_pair_csv, "");
  const auto back = read_dataset(s, DatasetFormat::vector_pair_csv);
  REQUIRE(back.size() == samples.size());
  for (std::size_t i = 0; i < back.size(); ++i)
    CHECK((back[i].matrix() - samples[i].matrix()).norm() < 1e-12);
}

TEST_CASE("comments, blank lines and malformed rows") {
  std::stringstream good(
      "# header\n"
      "\n"
      "1,0,0, 0,1,0, 0,0,1  # identity\n");
  const auto rows = read_dataset(good, DatasetFormat::matrix_csv);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].matrix() == Mat3::Identity());

  std::stringstream short_row("1,0,0,0,1,0\n");
  CHECK_THROWS_AS(read_dataset(short_row, DatasetFormat::matrix_csv), ParseError);

  std::stringstream not_a_number("1,0,zero,0,1,0,0,0,1\n");
  CHECK_THROWS_AS(read_dataset(not_a_number, DatasetFormat::matrix_csv), ParseError);

  std::stringstream not_a_rotation("2,0,0,0,1,0,0,0,1\n");
  CHECK_THROWS_AS(read_dataset(not_a_rotation, DatasetFormat::matrix_csv), ParseError);

  std::stringstream bad_norm("1.1,0,0,0\n");
  CHECK_THROWS_AS(read_dataset(bad_norm, DatasetFormat::quaternion_csv), ParseError);

  std::stringstream ok_norm("1.0000001,0,0,0\n");  // inside the 1e-6 normalize window
  CHECK(read_dataset(ok_norm, DatasetFormat::quaternion_csv).size() == 1);
}

TEST_CASE("format names") {
  CHECK(dataset_format_from_string("matrix_csv") == DatasetFormat::matrix_csv);
  CHECK(dataset_format_from_string("quaternion_csv") == DatasetFormat::quaternion_csv);
  CHECK(dataset_format_from_string("vector_pair_csv") == DatasetFormat::vector_pair_csv);
  CHECK_THROWS_AS(dataset_format_from_string("csv"), ParseError);
  CHECK(std::string(to_string(DatasetFormat::matrix_csv)) == "matrix_csv");
}

TEST_CASE("matrix literal and mean file") {
  const Mat3 m = parse_matrix_literal("1,2,3,4,5,6,7,8,9");
  CHECK(m(0, 0) == 1.0);
  CHECK(m(2, 2) == 9.0);
  CHECK_THROWS_AS(parse_matrix_literal("1,2,3"), ParseError);

  const Mat3 ybar = hftest::load_mean("synthetic500_mean.csv");
  CHECK(ybar(0, 0) == -0.2262);
  CHECK(ybar(2, 2) == 0.3529);
}

TEST_CASE("fnv1a64 known vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("result document round-trips losslessly") {
  MLEResult r;
  r.x_hat = Vec3(1.0 / 3.0, -2.0 / 7.0, 0.1);
  r.theta_hat.t = Mat3::Identity() * (1.0 / 9.0);
  r.loglik = 3.9739878746462445;
  r.grad_norm = 1e-9;
  r.iterations = 17;
  r.method = OptimMethod::hbfgs;
  r.warnings = {"example warning"};
  SufficientStats s = signed_svd(Mat3::Identity() * 0.5);
  s.n = 500;
  OptimConfig cfg;

  const auto doc = result_document(r, s, cfg, fnv1a64("input"), 0.125);
  const auto parsed = nlohmann::json::parse(doc.dump());
  CHECK(parsed == doc);
  CHECK(parsed["schema"] == "holofisher/1");
  CHECK(parsed["result"]["x_hat"][0].get<double>() == 1.0 / 3.0);
  CHECK(parsed["result"]["loglik"].get<double>() == 3.9739878746462445);
  CHECK(parsed["result"]["iterations"].get<int>() == 17);
  CHECK(parsed["stats"]["n"].get<std::size_t>() == 500);
  CHECK(parsed["config"]["method"] == "hbfgs");
  CHECK(parsed["result"]["converged"].get<bool>() == true);
}
