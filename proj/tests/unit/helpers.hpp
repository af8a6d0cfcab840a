#pragma once

#include <string>

#include "decor/bench.hpp"
#include "decor/netlist.hpp"
#include "decor/random.hpp"

namespace decor::test {

inline std::string data_path(const std::string& name) { return std::string(DECOR_TEST_DATA) + "/" + name; }

inline Circuit c17() { return read_bench_file(data_path("c17.bench")); }

inline Circuit random_circuit(std::size_t inputs, std::size_t outputs, std::size_t gates, std::uint64_t seed) {
  Rng rng(seed);
  return generate_random_circuit({inputs, outputs, gates, 16}, rng, "r" + std::to_string(seed));
}

}  // namespace decor::test
