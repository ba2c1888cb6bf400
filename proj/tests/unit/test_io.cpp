#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <random>

#include "algstab/errors.hpp"
#include "algstab/io.hpp"
#include "algstab/nilpotent.hpp"
#include "algstab/spectral.hpp"
#include "algstab/matcore.hpp"
#include "algstab/rng.hpp"
#include "test_helpers.hpp"

using namespace algstab;
using namespace algstab::test;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("matrix json round trip preserves entries exactly") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    Mat X = random_ginibre(4 + trial, rng);
    Mat back = matrix_from_json(matrix_to_json(X));
    CHECK((back - X).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("matrix binary round trip is bit exact") {
  std::mt19937_64 rng(5);
  Mat X = random_ginibre(7, rng);
  const std::string path = tmp_path("algstab_io_test.bin");
  save_matrix_bin(path, X);
  Mat back = load_matrix_bin(path);
  CHECK((back - X).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("load_matrix dispatches on extension") {
  std::mt19937_64 rng(7);
  Mat X = random_ginibre(3, rng);
  const std::string jb = tmp_path("algstab_io_test.json");
  const std::string bb = tmp_path("algstab_io_test2.bin");
  save_matrix(jb, X);
  save_matrix(bb, X);
  CHECK(dist(load_matrix(jb), load_matrix(bb)) == 0.0);
  std::remove(jb.c_str());
  std::remove(bb.c_str());
}

TEST_CASE("matrix json validation") {
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json{{"dim", 2}}), ValidationError);
  nlohmann::json bad = {{"dim", 2}, {"re", {{1, 2}}}, {"im", {{0, 0}, {0, 0}}}};
  CHECK_THROWS_AS(matrix_from_json(bad), ValidationError);
}

TEST_CASE("polynomial json round trip and inline parse") {
  Polynomial p({{0.0, 2}, {1.0, 2}});
  Polynomial q = polynomial_from_json(polynomial_to_json(p));
  CHECK(q.degree() == 4);
  CHECK(q.roots()[1].root == Complex(1.0, 0.0));

  Polynomial inl = parse_polynomial_arg(R"({"roots":[{"re":0,"im":0,"mult":2}]})");
  CHECK(inl.degree() == 2);
  CHECK(classify(inl) == Regime::AllMultiple);

  CHECK_THROWS_AS(parse_polynomial_arg("{not json"), ValidationError);
  CHECK_THROWS_AS(parse_polynomial_arg("/nonexistent/poly.json"), ValidationError);
}

TEST_CASE("spectral data and chain dumps use the matrix container") {
  Polynomial p({{0.0, 1}, {2.0, 1}});
  Mat X = m2(0, 1, 0, 2);
  SpectralData sd = spectral_data(X, p);
  nlohmann::json j = spectral_data_to_json(sd);
  CHECK(j.at("idempotents").size() == 2);
  CHECK(dist(matrix_from_json(j.at("metric")), sd.metric) == 0.0);
  CHECK(dist(matrix_from_json(j.at("idempotents").at(0)), sd.idempotents[0]) == 0.0);
  CHECK(j.at("cond_s").get<double>() == sd.cond_s);

  NilChain chain = build_chain(m2(0, 1, 0, 0), 2);
  nlohmann::json cj = nil_chain_to_json(chain);
  CHECK(cj.at("order") == 2);
  CHECK(cj.at("ranks").at(0) == 1);
  CHECK(dist(matrix_from_json(cj.at("flags").at(0)), chain.E(1)) == 0.0);
}

TEST_CASE("matseq json round trip") {
  std::mt19937_64 rng(11);
  MatSeq s;
  for (int k = 0; k < 4; ++k) s.terms.push_back(random_ginibre(2, rng));
  MatSeq back = matseq_from_json(matseq_to_json(s));
  REQUIRE(back.length() == 4);
  for (int k = 0; k < 4; ++k)
    CHECK((back.terms[static_cast<std::size_t>(k)] -
           s.terms[static_cast<std::size_t>(k)]).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.tail == TailModel::Truncated);

  s.tail = TailModel::Periodic;
  s.period = 2;
  MatSeq per = matseq_from_json(matseq_to_json(s));
  CHECK(per.tail == TailModel::Periodic);
  CHECK(per.period == 2);

  MatSeq two;
  two.terms = {Mat::Zero(1, 1), Mat::Zero(1, 1)};
  CHECK_THROWS_AS(matseq_from_json(matseq_to_json(two)), ValidationError);
}
