#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "kvf/field_spec.hpp"
#include "test_helpers.hpp"

using kvf::Vec;
using nlohmann::json;

TEST_CASE("explicit field specs round trip through JSON", "[field_spec]") {
    kvf::DeterministicRng rng(11);
    for (std::size_t m = 2; m <= 6; ++m) {
        const kvf::EuclideanKillingField field = helpers::random_field(rng, m);
        const kvf::EuclideanKillingField back = kvf::parse_field_spec(kvf::field_spec_json(field));
        REQUIRE(back.dim() == m);
        REQUIRE(kvf::frobenius_norm(back.skew() - field.skew()) < 1e-15);
        REQUIRE(helpers::max_abs_diff(back.translation(), field.translation()) < 1e-15);
    }
}

TEST_CASE("canonical shorthand builds block fields", "[field_spec]") {
    const json j = {{"frequencies", {1.0, 2.0}}, {"kernel_dim", 1}, {"v_ker", {0.5}}};
    const kvf::EuclideanKillingField field = kvf::parse_field_spec(j);
    REQUIRE(field.dim() == 5);

    // plane j sits on the coordinate pair (2j, 2j+1), kernel trailing
    CHECK(field.skew()(0, 1) == -1.0);
    CHECK(field.skew()(1, 0) == 1.0);
    CHECK(field.skew()(2, 3) == -2.0);
    CHECK(field.skew()(3, 2) == 2.0);
    CHECK(field.translation() == Vec{0.0, 0.0, 0.0, 0.0, 0.5});

    const kvf::CanonicalFrame frame = kvf::canonicalize(field);
    CHECK(frame.frequencies() == Vec{2.0, 1.0});
    CHECK(frame.kernel_dim() == 1);
    CHECK(kvf::norm(frame.center) == 0.0);

    SECTION("kernel-only spec") {
        const kvf::EuclideanKillingField translation =
            kvf::parse_field_spec({{"frequencies", json::array()}, {"kernel_dim", 3}, {"v_ker", {0.0, 0.0, 1.0}}});
        CHECK(translation.dim() == 3);
        CHECK(kvf::frobenius_norm(translation.skew()) == 0.0);
        CHECK(translation.translation() == Vec{0.0, 0.0, 1.0});
    }
}

TEST_CASE("malformed field specs are rejected with diagnostics", "[field_spec]") {
    SECTION("both forms present") {
        const json j = {{"dimension", 2}, {"frequencies", {1.0}}};
        CHECK_THROWS_MATCHES(kvf::parse_field_spec(j), kvf::ParseError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("exactly one")));
    }

    SECTION("neither form present") {
        CHECK_THROWS_AS(kvf::parse_field_spec(json::object()), kvf::ParseError);
    }

    SECTION("explicit form with a non-skew matrix") {
        const json j = {{"dimension", 2},
                        {"skew", {{0.0, 1.0}, {1.0, 0.0}}},
                        {"translation", {0.0, 0.0}}};
        CHECK_THROWS_AS(kvf::parse_field_spec(j), kvf::NonSkewSymmetricInput);
    }

    SECTION("explicit form with missing keys") {
        const json j = {{"dimension", 2}, {"skew", {{0.0, 0.0}, {0.0, 0.0}}}};
        CHECK_THROWS_MATCHES(kvf::parse_field_spec(j), kvf::ParseError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("translation")));
    }

    SECTION("ragged skew rows") {
        const json j = {{"dimension", 2}, {"skew", {{0.0, 1.0}, {-1.0}}}, {"translation", {0.0, 0.0}}};
        CHECK_THROWS_AS(kvf::parse_field_spec(j), kvf::ParseError);
    }

    SECTION("non-positive frequency") {
        const json j = {{"frequencies", {1.0, -2.0}}, {"kernel_dim", 0}, {"v_ker", json::array()}};
        CHECK_THROWS_MATCHES(kvf::parse_field_spec(j), kvf::ParseError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("strictly positive")));
    }

    SECTION("v_ker length disagrees with kernel_dim") {
        const json j = {{"frequencies", {1.0}}, {"kernel_dim", 2}, {"v_ker", {1.0}}};
        CHECK_THROWS_AS(kvf::parse_field_spec(j), kvf::ParseError);
    }

    SECTION("non-numeric entry") {
        const json j = {{"frequencies", {1.0, "two"}}, {"kernel_dim", 0}, {"v_ker", json::array()}};
        CHECK_THROWS_AS(kvf::parse_field_spec(j), kvf::ParseError);
    }

    SECTION("zero-dimensional spec") {
        const json j = {{"frequencies", json::array()}, {"kernel_dim", 0}, {"v_ker", json::array()}};
        CHECK_THROWS_AS(kvf::parse_field_spec(j), kvf::ParseError);
    }

    SECTION("bad dimension") {
        const json j = {{"dimension", 0}, {"skew", json::array()}, {"translation", json::array()}};
        CHECK_THROWS_AS(kvf::parse_field_spec(j), kvf::ParseError);
    }
}

TEST_CASE("field specs load from disk", "[field_spec]") {
    const std::string dir = KVF_DATA_DIR;
    const kvf::EuclideanKillingField sphere = kvf::load_field_spec(dir + "/sphere3.json");
    CHECK(sphere.dim() == 4);
    CHECK(kvf::canonicalize(sphere).frequencies() == Vec{1.0, 1.0});

    CHECK_THROWS_MATCHES(kvf::load_field_spec(dir + "/no_such_file.json"), kvf::ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("no_such_file")));

    const std::string test_dir = KVF_TEST_DATA_DIR;
    CHECK_THROWS_MATCHES(kvf::load_field_spec(test_dir + "/malformed.json"), kvf::ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("invalid JSON")));
    CHECK_THROWS_AS(kvf::load_field_spec(test_dir + "/non_skew.json"), kvf::NonSkewSymmetricInput);
}
