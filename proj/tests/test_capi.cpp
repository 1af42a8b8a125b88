#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "berrylab/berrylab.h"
#include "doctest.h"

namespace {

const double kPi = 3.14159265358979323846;

const char* kConfig =
    "[experiment]\nkind = il-scan\nseed = 2\n[sequence]\nmax_eigenvalue = 400\n[grid]\nresolution = 17\n";

std::string take(char* s) {
  std::string out = s ? s : "";
  blab_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("status names and exit codes") {
  CHECK(std::string(blab_status_name(BLAB_OK)) == "ok");
  CHECK(blab_exit_code(BLAB_OK) == 0);
  CHECK(blab_exit_code(BLAB_ERR_CONFIG) == 2);
  CHECK(blab_exit_code(BLAB_ERR_PRECONDITION) == 3);
  CHECK(blab_exit_code(BLAB_ERR_NUMERICAL) == 4);
  CHECK(blab_exit_code(BLAB_ERR_IO) == 5);
  CHECK(std::string(blab_version()).size() > 0);
}

TEST_CASE("special functions through the C API") {
  double v = 0.0;
  REQUIRE(blab_bessel_j(0.0, 1.0, &v) == BLAB_OK);
  CHECK(v == doctest::Approx(0.7651976865579666));
  REQUIRE(blab_bessel_j_zero(0.0, 1, &v) == BLAB_OK);
  CHECK(v == doctest::Approx(2.404825557695773));
  REQUIRE(blab_legendre_p(2, 0.5, &v) == BLAB_OK);
  CHECK(v == doctest::Approx(-0.125));
  const double north[3] = {0.0, 0.0, 1.0};
  REQUIRE(blab_spherical_harmonic(0, 1, north, &v) == BLAB_OK);
  CHECK(v == doctest::Approx(1.0 / std::sqrt(4 * kPi)));
  REQUIRE(blab_berry_kernel(3, 1.0, &v) == BLAB_OK);
  CHECK(v == doctest::Approx(std::sin(1.0)));

  CHECK(blab_bessel_j(0.0, 1.0, nullptr) == BLAB_ERR_ARGUMENT);
  CHECK(std::string(blab_last_error()).size() > 0);
  CHECK(blab_legendre_p(2, 3.0, &v) == BLAB_ERR_PRECONDITION);
  CHECK(blab_berry_kernel(5, 1.0, &v) == BLAB_ERR_PRECONDITION);
}

TEST_CASE("manifold spectrum with the buffer protocol") {
  blab_manifold* torus = nullptr;
  const double sides[2] = {1.0, 1.0};
  REQUIRE(blab_manifold_torus(sides, 2, 0, &torus) == BLAB_OK);
  CHECK(blab_manifold_dimension(torus) == 2);
  size_t count = 0;
  double lambdas[2];
  int mults[2];
  CHECK(blab_manifold_eigenvalues(torus, 4 * kPi * kPi * 25.5, lambdas, mults, 2, &count) == BLAB_ERR_BUFFER);
  std::vector<double> ls(count);
  std::vector<int> ms(count);
  REQUIRE(blab_manifold_eigenvalues(torus, 4 * kPi * kPi * 25.5, ls.data(), ms.data(), count, &count) == BLAB_OK);
  CHECK(ms.back() == 12);
  CHECK(ls.back() == doctest::Approx(4 * kPi * kPi * 25));

  blab_eigenfunction* psi = nullptr;
  std::vector<double> c(12, 0.0);
  c[0] = 1.0;
  REQUIRE(blab_eigenfunction_create(torus, ls.back(), c.data(), c.size(), 1, &psi) == BLAB_OK);
  CHECK(blab_eigenfunction_multiplicity(psi) == 12);
  const double origin[2] = {0.0, 0.0};
  double v = 0.0;
  REQUIRE(blab_eigenfunction_value(psi, origin, 2, &v) == BLAB_OK);
  CHECK(v == doctest::Approx(std::sqrt(2.0)));
  CHECK(blab_eigenfunction_create(torus, ls.back(), c.data(), 3, 1, &psi) != BLAB_OK);

  blab_field* phi = nullptr;
  REQUIRE(blab_field_localize(psi, origin, 2, &phi) == BLAB_OK);
  blab_sampled* s = nullptr;
  REQUIRE(blab_sample(phi, 1.0, 17, 2, &s) == BLAB_OK);
  double res = 1.0;
  REQUIRE(blab_helmholtz_residual(s, &res) == BLAB_OK);
  CHECK(res < 1e-10);

  blab_sampled_free(s);
  blab_field_free(phi);
  blab_eigenfunction_free(psi);
  blab_manifold_free(torus);

  blab_manifold* sphere = nullptr;
  REQUIRE(blab_manifold_sphere(&sphere) == BLAB_OK);
  blab_eigenfunction* y = nullptr;
  REQUIRE(blab_eigenfunction_random(sphere, 30.0, 4, &y) == BLAB_OK);
  CHECK(blab_eigenfunction_multiplicity(y) == 11);
  CHECK(blab_eigenfunction_random(sphere, 31.0, 4, &y) == BLAB_ERR_PRECONDITION);
  blab_eigenfunction_free(y);
  blab_manifold_free(sphere);
}

TEST_CASE("fields, samples and distances") {
  blab_field* a = nullptr;
  blab_field* b = nullptr;
  REQUIRE(blab_field_berry(BLAB_SAMPLER_PLANE_WAVE, 2, 256, 16, 7, 0, &a) == BLAB_OK);
  REQUIRE(blab_field_radial_wave(2, 1.0, &b) == BLAB_OK);
  CHECK(blab_field_dimension(a) == 2);
  const double y[2] = {0.0, 0.0};
  double v = 0.0;
  REQUIRE(blab_field_value(b, y, 2, &v) == BLAB_OK);
  CHECK(v == doctest::Approx(1.0));
  size_t count = 0;
  double jet[6];
  REQUIRE(blab_field_derivatives(b, y, 2, 2, jet, 6, &count) == BLAB_OK);
  CHECK(count == 6);
  CHECK(jet[3] == doctest::Approx(-0.5));
  CHECK(blab_field_derivatives(b, y, 2, 2, jet, 2, &count) == BLAB_ERR_BUFFER);

  double dist = -1.0;
  double tail = -1.0;
  REQUIRE(blab_frechet_distance(a, a, 3, 2, 0.25, &dist, &tail) == BLAB_OK);
  CHECK(dist == 0.0);
  CHECK(tail == doctest::Approx(0.5 + 1.0));

  blab_sampled* sa = nullptr;
  blab_sampled* sb = nullptr;
  REQUIRE(blab_sample(a, 1.0, 17, 1, &sa) == BLAB_OK);
  REQUIRE(blab_sample(b, 1.0, 17, 1, &sb) == BLAB_OK);
  CHECK(blab_sampled_stride(sa) == 3);
  double d = 0.0;
  REQUIRE(blab_cr_distance(sa, sb, 1, 1.0, &d) == BLAB_OK);
  CHECK(d > 0.0);

  char* text = nullptr;
  REQUIRE(blab_sampled_to_text(sa, &text) == BLAB_OK);
  blab_sampled* back = nullptr;
  REQUIRE(blab_sampled_from_text(text, &back) == BLAB_OK);
  blab_string_free(text);
  REQUIRE(blab_cr_distance(sa, back, 1, 1.0, &d) == BLAB_OK);
  CHECK(d == 0.0);
  std::vector<double> data(blab_sampled_node_count(back) * blab_sampled_stride(back));
  REQUIRE(blab_sampled_data(back, data.data(), data.size(), &count) == BLAB_OK);
  CHECK(count == data.size());

  CHECK(blab_sample(a, 1.0, 4, 1, &sa) == BLAB_ERR_PRECONDITION);
  blab_sampled_free(back);
  blab_sampled_free(sa);
  blab_sampled_free(sb);
  blab_field_free(a);
  blab_field_free(b);
}

TEST_CASE("config validation and runs") {
  char* report = nullptr;
  REQUIRE(blab_config_validate_text(kConfig, &report) == BLAB_OK);
  const std::string ok = take(report);
  CHECK(ok.rfind("ok ", 0) == 0);
  char* hash = nullptr;
  REQUIRE(blab_config_hash(kConfig, &hash) == BLAB_OK);
  CHECK(ok.find(take(hash)) != std::string::npos);

  CHECK(blab_config_validate_text("[experiment]\nkind = il-scan\nbogus = 1\n", &report) == BLAB_ERR_CONFIG);
  CHECK(take(report).find("bogus") != std::string::npos);

  const std::filesystem::path dir = std::filesystem::path(BERRYLAB_TEST_TMP) / "capi";
  std::filesystem::remove_all(dir);
  char* headline = nullptr;
  char* record = nullptr;
  REQUIRE(blab_run_text(kConfig, dir.c_str(), nullptr, 1, &headline, &record) == BLAB_OK);
  CHECK(!take(headline).empty());
  const std::string first = take(record);
  REQUIRE(blab_check_outputs(dir.c_str(), nullptr, &report) == BLAB_OK);
  CHECK(take(report).rfind("ok", 0) == 0);

  const uint64_t seed = 11;
  const std::filesystem::path seeded = std::filesystem::path(BERRYLAB_TEST_TMP) / "capi_seeded";
  REQUIRE(blab_run_text(kConfig, seeded.c_str(), &seed, 1, nullptr, &record) == BLAB_OK);
  CHECK(take(record) != first);

  const std::filesystem::path bad = std::filesystem::path(BERRYLAB_TEST_TMP) / "capi_bad";
  std::filesystem::remove_all(bad);
  CHECK(blab_run_text("[experiment]\nkind = il-scan\n[sampling]\nbase_points = -3\n", bad.c_str(), nullptr, 1,
                      nullptr, nullptr) == BLAB_ERR_CONFIG);
  CHECK(!std::filesystem::exists(bad));
  CHECK(blab_run_file("/nonexistent.ini", nullptr, nullptr, 1, nullptr, nullptr) == BLAB_ERR_IO);

  char* list = nullptr;
  REQUIRE(blab_list_experiments(&list) == BLAB_OK);
  CHECK(take(list).find("inverse-localize") != std::string::npos);
}
