#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oldcong/io.hpp"
#include "oracles.hpp"

namespace testutil {

inline std::filesystem::path data_dir() { return OLDCONG_TEST_DATA; }

inline oldcong::CurveRecord fixture(unsigned level) {
  return oldcong::load_curve(data_dir() / ("curve" + std::to_string(level) + ".json"));
}

inline const std::vector<unsigned>& fixture_levels() {
  static const std::vector<unsigned> levels{11, 14, 15, 17, 33, 37, 42, 57};
  return levels;
}

inline nlohmann::json sweep_data() {
  std::ifstream in(data_dir() / "curves_upto_150.json");
  return nlohmann::json::parse(in);
}

inline oldcong::CurveRecord curve_from_sweep(const nlohmann::json& e) {
  nlohmann::json doc = e;
  doc.erase("an");
  return oldcong::parse_curve(doc.dump());
}

inline oldcong::IntMatrix to_int(const oracle::Mat& a, std::size_t cols) {
  oldcong::IntMatrix m(0, cols);
  for (const auto& r : a) {
    std::vector<oldcong::Integer> row;
    for (auto x : r) row.emplace_back(static_cast<long>(x));
    m.append_row(row);
  }
  return m;
}

inline oracle::Mat to_small(const oldcong::IntMatrix& m) {
  oracle::Mat out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<oracle::i64> r;
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).get_si());
    out.push_back(r);
  }
  return out;
}

inline std::vector<oldcong::Integer> ints(std::initializer_list<long> v) {
  return {v.begin(), v.end()};
}

}  // namespace testutil
