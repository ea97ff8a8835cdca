#include <cstdio>
#include <filesystem>
#include <functional>

#include "doctest.h"
#include "ultrajet/error.hpp"
#include "ultrajet/io.hpp"

using namespace ultrajet;
using ultrajet::io::json;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;  // sentinel for "no throw"; tests never expect it
}

}  // namespace

TEST_CASE("malformed input maps to parse errors") {
  CHECK(code_of([] { (void)io::parse("{\"family\": "); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)io::sequence_from_json(json{{"family", "nope"}}); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)io::sequence_from_json(json::array()); }) == ErrorCode::Parse);
  CHECK(code_of([] { (void)io::read_file("/nonexistent/ultrajet.json"); }) == ErrorCode::Io);
}

TEST_CASE("sequence specs") {
  const auto M = io::sequence_from_json(io::parse(R"({"family": "gevrey", "params": {"s": 2}, "K": 40})"));
  CHECK(M.K() == 40);
  CHECK(M.log_M(5) == doctest::Approx(2 * std::log(120.0)));
  const auto T = io::sequence_from_json(io::parse(R"({"family": "gevrey", "params": {"s": 1}})"), 17);
  CHECK(T.K() == 17);
}

TEST_CASE("matrix and jet specs") {
  const auto spec = io::matrix_from_json(
      io::parse(R"({"weight_function": {"kind": "omega_s", "s": 2}, "params": [1, 2, 4], "K": 64})"));
  CHECK(spec.matrix->size() == 3);
  CHECK(spec.omega.has_value());

  const Jet F = io::jet_from_json(io::parse(R"({"points": [0, 1], "order_cap": 3, "analytic": "exp"})"));
  CHECK(F.size() == 2);
  CHECK(F.value(1, 2) == doctest::Approx(std::exp(1.0)));
  const Jet G = io::jet_from_json(io::jet_to_json(F));
  for (std::size_t i = 0; i < 2; ++i)
    for (int k = 0; k <= 3; ++k) CHECK(G.value(i, k) == F.value(i, k));
  CHECK(code_of([] { (void)io::jet_from_json(io::parse(R"({"points": [1, 0], "order_cap": 0, "values": [[1], [2]]})")); }) ==
        ErrorCode::Parse);
}

TEST_CASE("atomic writes and deterministic output") {
  const auto dir = std::filesystem::temp_directory_path() / "ultrajet_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.json").string();
  const auto M = make_sequence(family::Gevrey{1.5}, 64);
  const std::string a = io::to_json(check_moderate_growth(M)).dump(2);
  const std::string b = io::to_json(check_moderate_growth(M)).dump(2);
  CHECK(a == b);
  io::write_atomic(path, a);
  CHECK(io::read_file(path) == a);
  CHECK(io::read_json(path) == io::parse(a));
  std::filesystem::remove_all(dir);
}
