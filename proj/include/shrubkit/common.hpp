#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace shrubkit {

using Vertex = int;

struct ShrubError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// input text could not be parsed; line is 1-based
struct ParseError : ShrubError {
  int line;
  ParseError(const std::string& msg, int line_) : ShrubError(msg), line(line_) {}
};

// a formula does not have the arity an operation requires
struct ArityError : ShrubError {
  using ShrubError::ShrubError;
};

// labeling found two pairs that agree on labels but disagree on the relation
struct AdequacyError : ShrubError {
  std::array<Vertex, 4> witness;  // (u, v, u2, v2)
  AdequacyError(const std::string& msg, std::array<Vertex, 4> w)
      : ShrubError(msg), witness(w) {}
};

// an instance exceeds a configured size cap for an exact computation
struct CapError : ShrubError {
  using ShrubError::ShrubError;
};

// a declared resource budget (type-tree nodes) was exhausted
struct ResourceError : ShrubError {
  using ShrubError::ShrubError;
};

// no simple path within the requested budget
struct NoPathError : ShrubError {
  using ShrubError::ShrubError;
};

// equal tuples produced different trace data; construction is not a function
struct WellDefinednessError : ShrubError {
  using ShrubError::ShrubError;
};

// a claimed separator failed to separate a pair it must separate
struct SeparatorPropertyError : ShrubError {
  std::array<Vertex, 2> witness;
  SeparatorPropertyError(const std::string& msg, std::array<Vertex, 2> w)
      : ShrubError(msg), witness(w) {}
};

// a structure violates its representation invariants
struct ValidationError : ShrubError {
  using ShrubError::ShrubError;
};

inline bool contains_sorted(const std::vector<Vertex>& xs, Vertex v) {
  return std::binary_search(xs.begin(), xs.end(), v);
}

inline std::vector<Vertex> sorted_unique(std::vector<Vertex> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

// number of worker threads requested via SHRUBKIT_THREADS (default 1)
int thread_count();

// deterministic parallel loop: f(i) for i in [0, n); results must go to
// preallocated per-index slots so the merge order is index order
void parallel_for(int n, const std::function<void(int)>& f);

// saturating arithmetic for report-only bound values
long long sat_add(long long a, long long b);
long long sat_mul(long long a, long long b);
long long sat_pow(long long base, long long exp);

}  // namespace shrubkit
