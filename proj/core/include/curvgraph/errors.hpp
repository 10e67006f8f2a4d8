#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace curvgraph {

// Invalid caller-supplied data: bad node ids, malformed measures, bad flags.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Some mass of a transport problem can only route through infinite-cost arcs.
class InfeasibleTransport : public std::runtime_error {
 public:
  explicit InfeasibleTransport(const std::string& what) : std::runtime_error(what) {}
};

// Curvature-degree normalization failure: zero degree, or a non-positive
// degree under the symmetric mode (square root of a negative product).
class NormalizationError : public std::runtime_error {
 public:
  NormalizationError(std::uint32_t node, const std::string& what)
      : std::runtime_error(what), node_(node) {}
  std::uint32_t node() const noexcept { return node_; }

 private:
  std::uint32_t node_;
};

// Training produced a non-finite loss or activation.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int epoch, const std::string& what)
      : std::runtime_error(what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

// Malformed input file. `offset` is a 1-based line number for line-oriented
// formats and a byte offset for the GML parser.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace curvgraph
