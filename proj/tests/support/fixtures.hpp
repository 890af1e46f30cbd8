#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "gicl/graph.hpp"

namespace gicl::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// G(n, p) graph with random labels, splits and embeddings. Every node gets a
/// label; roughly half are train, a sixth val, the rest test.
GraphParts random_parts(std::size_t n, double p, std::uint64_t seed, std::uint32_t dim = 8,
                        std::size_t num_labels = 4);

/// The 30-node citation fixture used by the end-to-end and golden tests.
/// Nodes 0-11 are train, 12-17 val, 18-29 test; node 27 is unlabelled.
GraphParts tiny_parts();

inline constexpr const char* kTinyNcDescription =
    "I'm starting a node classification task. Please predict the category of the target paper. "
    "Choose from: Neural Networks, Theory, Rule Learning.";
inline constexpr const char* kTinyLpDescription =
    "I'm starting a link prediction task. Answer '0' for no link or '1' for a link.";

/// Writes tiny_parts() under `dir` and returns `dir`.
std::filesystem::path write_tiny(const std::filesystem::path& dir);

}  // namespace gicl::testing
