#include "geoent/state_io.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "geoent/random.hpp"

using namespace geoent;

namespace {

std::string field_of(std::string_view text, const StateReadOptions& opts = {}) {
  try {
    parse_state_json(text, opts);
  } catch (const StateFormatError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(StateIo, ParsesGhz) {
  const auto parsed =
      parse_state_json(R"({"n_qubits": 3, "amplitudes": [[0.7071067811865476, 0], [0, 0], [0, 0], [0, 0],
                           [0, 0], [0, 0], [0, 0], [0.7071067811865476, 0]]})");
  EXPECT_EQ(parsed.state.n_qubits(), 3U);
  EXPECT_FALSE(parsed.warning.has_value());
  EXPECT_NEAR(parsed.state[7].real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(StateIo, ComplexAmplitudes) {
  const auto parsed = parse_state_json(R"({"n_qubits": 1, "amplitudes": [[0, 0.6], [0.8, 0]]})");
  EXPECT_EQ(parsed.state[0], Complex(0, 0.6));
  EXPECT_EQ(parsed.state[1], Complex(0.8, 0));
}

TEST(StateIo, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = haar_random_state(3, seed);
    const auto back = parse_state_json(write_state_json(s)).state;
    for (std::size_t i = 0; i < s.dim(); ++i) EXPECT_NEAR(std::abs(back[i] - s[i]), 0.0, 1e-15);
  }
}

TEST(StateIo, SmallNormDeviationWarns) {
  const auto parsed = parse_state_json(R"({"n_qubits": 1, "amplitudes": [[1.0000001, 0], [0, 0]]})");
  ASSERT_TRUE(parsed.warning.has_value());
  EXPECT_DOUBLE_EQ(std::abs(parsed.state[0]), 1.0);
}

TEST(StateIo, LargeNormDeviationNeedsOptIn) {
  constexpr std::string_view text = R"({"n_qubits": 2, "amplitudes": [[1, 0], [0, 0], [0, 0], [1, 0]]})";
  EXPECT_EQ(field_of(text), "amplitudes");
  const auto parsed = parse_state_json(text, {.allow_unnormalized = true});
  EXPECT_TRUE(parsed.warning.has_value());
  EXPECT_NEAR(parsed.state[3].real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(StateIo, MalformedDocumentsNameTheField) {
  EXPECT_EQ(field_of("not json"), "document");
  EXPECT_EQ(field_of("[1, 2]"), "document");
  EXPECT_EQ(field_of(R"({"amplitudes": [[1, 0], [0, 0]]})"), "n_qubits");
  EXPECT_EQ(field_of(R"({"n_qubits": "3", "amplitudes": []})"), "n_qubits");
  EXPECT_EQ(field_of(R"({"n_qubits": 0, "amplitudes": []})"), "n_qubits");
  EXPECT_EQ(field_of(R"({"n_qubits": 9, "amplitudes": []})"), "n_qubits");
  EXPECT_EQ(field_of(R"({"n_qubits": 1})"), "amplitudes");
  EXPECT_EQ(field_of(R"({"n_qubits": 1, "amplitudes": {"re": 1}})"), "amplitudes");
  EXPECT_EQ(field_of(R"({"n_qubits": 2, "amplitudes": [[1, 0], [0, 0]]})"), "amplitudes");
  EXPECT_EQ(field_of(R"({"n_qubits": 1, "amplitudes": [[1, 0], [0]]})"), "amplitudes[1]");
  EXPECT_EQ(field_of(R"({"n_qubits": 1, "amplitudes": [[1, 0], ["x", 0]]})"), "amplitudes[1]");
  EXPECT_EQ(field_of(R"({"n_qubits": 1, "amplitudes": [1, 0]})"), "amplitudes[0]");
  EXPECT_EQ(field_of(R"({"n_qubits": 1, "amplitudes": [[0, 0], [0, 0]]})", {.allow_unnormalized = true}),
            "amplitudes");
}

TEST(StateIo, ErrorMessageContainsField) {
  try {
    parse_state_json(R"({"n_qubits": 1, "amplitudes": [[1, 0], [0]]})");
    FAIL();
  } catch (const StateFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("amplitudes[1]"), std::string::npos);
  }
}
