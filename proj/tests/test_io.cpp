#include "torvan/io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

using namespace torvan;

TEST(FanJson, RoundTripsEveryCatalogFan) {
  for (const auto& nf : standard_catalog()) {
    const Json j = fan_to_json(nf.fan);
    const Fan back = fan_from_json(Json::parse(j.dump()));
    EXPECT_EQ(fan_to_json(back), j) << nf.name;
  }
}

TEST(FanJson, ExactFormat) {
  EXPECT_EQ(fan_to_json(projective_space(1)).dump(), R"({"rank":1,"rays":[[1],[-1]],"max_cones":[[0],[1]]})");
}

TEST(FanJson, RejectsMalformed) {
  EXPECT_THROW(fan_from_json(Json::parse("[]")), InputError);
  EXPECT_THROW(fan_from_json(Json::parse(R"({"rank":2,"rays":[[1,0]]})")), InputError);
  EXPECT_THROW(fan_from_json(Json::parse(R"({"rank":2,"rays":[[1,0],[0,1]],"max_cones":[[0,-1]]})")), InputError);
  EXPECT_THROW(fan_from_json(Json::parse(R"({"rank":2,"rays":["x"],"max_cones":[[0]]})")), InputError);
  // Overlapping cones fail validation.
  EXPECT_THROW(fan_from_json(Json::parse(R"({"rank":2,"rays":[[1,0],[0,1],[1,1]],"max_cones":[[0,1],[0,2]]})")),
               InputError);
}

TEST(DivisorJson, AcceptsStringsAndIntegers) {
  const auto f = share(weighted_projective({1, 1, 2}));
  const auto d = divisor_from_json(Json::parse(R"({"coeffs":["0", 1, "-1/2"]})"), f);
  EXPECT_EQ(d.coeff(1), Rational(1));
  EXPECT_EQ(d.coeff(2), Rational(-1, 2));
  EXPECT_EQ(divisor_to_json(d).dump(), R"({"coeffs":["0","1","-1/2"]})");
  EXPECT_THROW(divisor_from_json(Json::parse(R"({"coeffs":["1"]})"), f), InputError);
  EXPECT_THROW(divisor_from_json(Json::parse(R"({"coeffs":[0.5, 0, 0]})"), f), InputError);
  EXPECT_THROW(divisor_from_json(Json::parse(R"({"c":[]})"), f), InputError);
}

TEST(Fingerprint, IgnoresConeOrderOnly) {
  const Fan a = projective_space(2);
  Fan b(2, a.rays(), {a.max_cones()[2], a.max_cones()[0], a.max_cones()[1]});
  EXPECT_EQ(fan_fingerprint(a), fan_fingerprint(b));
  EXPECT_NE(fan_fingerprint(a), fan_fingerprint(hirzebruch(1)));
  EXPECT_EQ(fan_fingerprint(a).size(), 16u);
}

TEST(Fnv, KnownVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Files, ReadWriteAndErrors) {
  const auto path = (std::filesystem::temp_directory_path() / "torvan_io_test.json").string();
  write_text_file(path, fan_to_json(hirzebruch(2)).dump());
  EXPECT_EQ(fan_to_json(fan_from_json(read_json_file(path))), fan_to_json(hirzebruch(2)));
  write_text_file(path, "{not json");
  EXPECT_THROW(read_json_file(path), InputError);
  std::remove(path.c_str());
  EXPECT_THROW(read_json_file(path), InputError);
}
